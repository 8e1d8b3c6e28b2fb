#include "evomsn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "evomsn/common.hpp"
#include "evomsn/fft.hpp"
#include "evomsn/parallel.hpp"

namespace evomsn {

std::vector<double> dft_amplitudes(const std::vector<double>& signal) {
    const int t = static_cast<int>(signal.size());
    if (t < 2) throw SignalTooShort("dft_amplitudes: need at least 2 samples, got " + std::to_string(t));
    const auto spectrum = fft_real(signal);
    std::vector<double> amps(static_cast<std::size_t>(t / 2));
    for (int f = 1; f <= t / 2; ++f) amps[static_cast<std::size_t>(f - 1)] = std::abs(spectrum[static_cast<std::size_t>(f)]);
    return amps;
}

namespace kernels {

namespace {

std::vector<double> window_spectrum_sum(const Mat& w) {
    std::vector<double> acc(static_cast<std::size_t>(w.rows / 2), 0.0);
    std::vector<double> channel(static_cast<std::size_t>(w.rows));
    for (int c = 0; c < w.cols; ++c) {
        for (int r = 0; r < w.rows; ++r) channel[static_cast<std::size_t>(r)] = w(r, c);
        const auto amps = dft_amplitudes(channel);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += amps[i];
    }
    return acc;
}

std::vector<double> reduce_partials(const std::vector<std::vector<double>>& partials,
                                    std::size_t bins, double denom) {
    std::vector<double> mean(bins, 0.0);
    for (const auto& p : partials)
        for (std::size_t i = 0; i < bins; ++i) mean[i] += p[i];
    for (auto& v : mean) v /= denom;
    return mean;
}

}  // namespace

std::vector<double> batch_mean_spectrum_serial(const std::vector<Mat>& windows) {
    if (windows.empty()) throw NoData("batch_mean_spectrum: no windows");
    const int t = windows[0].rows;
    const int C = windows[0].cols;
    std::vector<std::vector<double>> partials(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (windows[i].rows != t || windows[i].cols != C)
            throw ShapeError("batch_mean_spectrum: inconsistent window shapes");
        partials[i] = window_spectrum_sum(windows[i]);
    }
    return reduce_partials(partials, static_cast<std::size_t>(t / 2),
                           static_cast<double>(windows.size()) * C);
}

std::vector<double> batch_mean_spectrum_openmp(const std::vector<Mat>& windows) {
    if (windows.empty()) throw NoData("batch_mean_spectrum: no windows");
    const int t = windows[0].rows;
    const int C = windows[0].cols;
    for (const auto& w : windows)
        if (w.rows != t || w.cols != C)
            throw ShapeError("batch_mean_spectrum: inconsistent window shapes");
    std::vector<std::vector<double>> partials(windows.size());
    #pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(windows.size()); ++i)
        partials[static_cast<std::size_t>(i)] = window_spectrum_sum(windows[static_cast<std::size_t>(i)]);
    return reduce_partials(partials, static_cast<std::size_t>(t / 2),
                           static_cast<double>(windows.size()) * C);
}

std::vector<double> batch_mean_spectrum(const std::vector<Mat>& windows) {
#ifdef _OPENMP
    if (execution_mode() == ExecMode::openmp) return batch_mean_spectrum_openmp(windows);
#endif
    return batch_mean_spectrum_serial(windows);
}

}  // namespace kernels

PeriodSet extract_global_periods(const std::vector<Mat>& training_windows, int k) {
    if (training_windows.empty()) throw NoData("extract_global_periods: no training windows");
    if (k < 1) throw RangeError("extract_global_periods: k must be >= 1, got " + std::to_string(k));

    const int t = training_windows[0].rows;
    const auto mean_amps = kernels::batch_mean_spectrum(training_windows);

    std::vector<int> bins(mean_amps.size());
    std::iota(bins.begin(), bins.end(), 1);
    std::sort(bins.begin(), bins.end(), [&](int a, int b) {
        const double aa = mean_amps[static_cast<std::size_t>(a - 1)];
        const double ab = mean_amps[static_cast<std::size_t>(b - 1)];
        if (aa != ab) return aa > ab;
        return a < b;  // tie: longer period wins
    });

    PeriodSet out;
    out.analysis_len = t;
    for (int f : bins) {
        if (out.size() == k) break;
        const int p = std::min(t, static_cast<int>((t + f - 1) / f));
        if (std::find(out.periods.begin(), out.periods.end(), p) != out.periods.end()) continue;
        out.periods.push_back(p);
        out.frequencies.push_back(f);
        out.mean_amplitudes.push_back(mean_amps[static_cast<std::size_t>(f - 1)]);
    }
    return out;
}

LocalAmplitudes local_amplitudes(const Mat& window, const PeriodSet& periods) {
    if (window.rows != periods.analysis_len)
        throw LengthMismatch("local_amplitudes: window length " + std::to_string(window.rows) +
                             " != analysis length " + std::to_string(periods.analysis_len));
    const int k = periods.size();
    LocalAmplitudes out{Mat(k, window.cols)};
    std::vector<double> channel(static_cast<std::size_t>(window.rows));
    for (int c = 0; c < window.cols; ++c) {
        for (int r = 0; r < window.rows; ++r) channel[static_cast<std::size_t>(r)] = window(r, c);
        const auto amps = dft_amplitudes(channel);
        for (int i = 0; i < k; ++i)
            out.amplitudes(i, c) = amps[static_cast<std::size_t>(periods.frequencies[static_cast<std::size_t>(i)] - 1)];
    }
    return out;
}

}  // namespace evomsn
