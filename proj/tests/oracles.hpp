// Independent reference implementations used only by tests. These are kept
// deliberately naive and separate from the library code paths they check.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "evomsn/mat.hpp"

namespace oracle {

// Direct O(t^2) discrete Fourier transform.
inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(j) / static_cast<double>(n);
            acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

// Central finite differences of a scalar function over a flat parameter
// vector. Returns d(loss)/d(theta_i) for every i.
inline std::vector<double> finite_diff(std::vector<double> theta,
                                       const std::function<double(const std::vector<double>&)>& f,
                                       double h = 1e-5) {
    std::vector<double> grad(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double keep = theta[i];
        theta[i] = keep + h;
        const double up = f(theta);
        theta[i] = keep - h;
        const double down = f(theta);
        theta[i] = keep;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

inline double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8});
}

// Least-squares solve of (X^T X) w = X^T y by Gaussian elimination with
// partial pivoting; X is n x d row-major.
inline std::vector<double> ols(const std::vector<std::vector<double>>& X,
                               const std::vector<double>& y) {
    const std::size_t n = X.size();
    const std::size_t d = X[0].size();
    std::vector<std::vector<double>> a(d, std::vector<double>(d + 1, 0.0));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t r = 0; r < n; ++r) a[i][j] += X[r][i] * X[r][j];
        for (std::size_t r = 0; r < n; ++r) a[i][d] += X[r][i] * y[r];
    }
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col || a[col][col] == 0.0) continue;
            const double factor = a[r][col] / a[col][col];
            for (std::size_t j = col; j <= d; ++j) a[r][j] -= factor * a[col][j];
        }
    }
    std::vector<double> w(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        if (a[i][i] != 0.0) w[i] = a[i][d] / a[i][i];
    return w;
}

inline evomsn::Mat random_mat(std::mt19937_64& rng, int rows, int cols, double lo = -2.0,
                              double hi = 2.0) {
    evomsn::Mat m(rows, cols);
    for (auto& v : m.data) v = evomsn::uniform(rng, lo, hi);
    return m;
}

}  // namespace oracle
