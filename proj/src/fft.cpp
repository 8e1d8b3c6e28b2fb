#include "evomsn/fft.hpp"

#include <cmath>
#include <numbers>

namespace evomsn {
namespace {

using cplx = std::complex<double>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_pow2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

void fft_bluestein(std::vector<cplx>& a) {
    const std::size_t n = a.size();
    const std::size_t m = next_pow2(2 * n - 1);

    // Chirp factors exp(-i*pi*k^2/n); k^2 mod 2n keeps the angle argument
    // small so accuracy holds for long signals.
    std::vector<cplx> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t k2 = (k * k) % (2 * n);
        const double ang = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = cplx(std::cos(ang), std::sin(ang));
    }

    std::vector<cplx> u(m, cplx(0.0, 0.0)), v(m, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp[k];
    v[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) v[k] = v[m - k] = std::conj(chirp[k]);

    fft_pow2(u, false);
    fft_pow2(v, false);
    for (std::size_t k = 0; k < m; ++k) u[k] *= v[k];
    fft_pow2(u, true);

    for (std::size_t k = 0; k < n; ++k) a[k] = u[k] * chirp[k];
}

}  // namespace

void fft(std::vector<cplx>& buf) {
    if (buf.size() <= 1) return;
    if (is_pow2(buf.size()))
        fft_pow2(buf, false);
    else
        fft_bluestein(buf);
}

std::vector<cplx> fft_real(const std::vector<double>& signal) {
    std::vector<cplx> buf(signal.size());
    for (std::size_t i = 0; i < signal.size(); ++i) buf[i] = cplx(signal[i], 0.0);
    fft(buf);
    return buf;
}

}  // namespace evomsn
