#include "evomsn/slicing.hpp"

#include <cmath>

#include "evomsn/parallel.hpp"

namespace evomsn {

SlicedWindow pad_and_slice(const Mat& window, int period) {
    if (period < 1) throw InvalidPeriod("pad_and_slice: period must be >= 1, got " + std::to_string(period));
    if (window.rows < 1) throw ShapeError("pad_and_slice: empty window");

    const int len = window.rows;
    const int pad = (period - len % period) % period;
    const int total = len + pad;

    SlicedWindow out;
    out.period = period;
    out.pad_len = pad;
    out.slice_count = total / period;
    out.padded = Mat(total, window.cols);
    for (int r = 0; r < total; ++r) {
        const int src = r < len ? r : r - pad;
        for (int c = 0; c < window.cols; ++c) out.padded(r, c) = window(src, c);
    }
    return out;
}

SliceStats compute_slice_stats(const SlicedWindow& sliced) {
    const int J = sliced.slice_count;
    const int p = sliced.period;
    const int C = sliced.channels();

    SliceStats stats{Mat(J, C), Mat(J, C)};
    for (int j = 0; j < J; ++j) {
        for (int c = 0; c < C; ++c) {
            double sum = 0.0;
            for (int t = 0; t < p; ++t) sum += sliced.padded(j * p + t, c);
            const double mean = sum / p;
            double sq = 0.0;
            for (int t = 0; t < p; ++t) {
                const double d = sliced.padded(j * p + t, c) - mean;
                sq += d * d;
            }
            stats.means(j, c) = mean;
            stats.stds(j, c) = std::sqrt(sq / p);
        }
    }
    return stats;
}

Mat reassemble(const SlicedWindow& sliced) {
    return row_block(sliced.padded, 0, sliced.original_len());
}

namespace kernels {

std::vector<SliceStats> batch_slice_stats_serial(const std::vector<Mat>& windows, int period) {
    std::vector<SliceStats> out(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i)
        out[i] = compute_slice_stats(pad_and_slice(windows[i], period));
    return out;
}

std::vector<SliceStats> batch_slice_stats_openmp(const std::vector<Mat>& windows, int period) {
    if (period < 1) throw InvalidPeriod("batch_slice_stats: period must be >= 1");
    std::vector<SliceStats> out(windows.size());
    // Fused pad + two-pass stats; no padded buffer is materialized. The
    // summation order over t matches the reference exactly.
    #pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(windows.size()); ++i) {
        const Mat& w = windows[static_cast<std::size_t>(i)];
        const int len = w.rows;
        const int pad = (period - len % period) % period;
        const int J = (len + pad) / period;
        SliceStats stats{Mat(J, w.cols), Mat(J, w.cols)};
        for (int j = 0; j < J; ++j) {
            for (int c = 0; c < w.cols; ++c) {
                double sum = 0.0;
                for (int t = 0; t < period; ++t) {
                    const int r = j * period + t;
                    sum += w(r < len ? r : r - pad, c);
                }
                const double mean = sum / period;
                double sq = 0.0;
                for (int t = 0; t < period; ++t) {
                    const int r = j * period + t;
                    const double d = w(r < len ? r : r - pad, c) - mean;
                    sq += d * d;
                }
                stats.means(j, c) = mean;
                stats.stds(j, c) = std::sqrt(sq / period);
            }
        }
        out[static_cast<std::size_t>(i)] = std::move(stats);
    }
    return out;
}

std::vector<SliceStats> batch_slice_stats(const std::vector<Mat>& windows, int period) {
#ifdef _OPENMP
    if (execution_mode() == ExecMode::openmp)
        return batch_slice_stats_openmp(windows, period);
#endif
    return batch_slice_stats_serial(windows, period);
}

}  // namespace kernels

}  // namespace evomsn
