#pragma once

#include "evomsn/mat.hpp"

namespace evomsn {

/// A window split into consecutive non-overlapping period-length slices.
/// The padded buffer holds slice_count * period rows; the final pad_len rows
/// are copies of the window's last pad_len rows.
struct SlicedWindow {
    int scale_index = 0;  // which scale produced this view (informational)
    int period = 0;
    int pad_len = 0;
    int slice_count = 0;  // J
    Mat padded;           // (J * period) x C

    int original_len() const { return slice_count * period - pad_len; }
    int channels() const { return padded.cols; }
};

/// Per-slice, per-channel mean and population standard deviation.
struct SliceStats {
    Mat means;  // J x C
    Mat stds;   // J x C
};

/// Extends the window by copying its final rows until the length divides
/// `period`, then records the slice layout.
SlicedWindow pad_and_slice(const Mat& window, int period);

/// Two-pass mean and population std (divide by period) per slice and channel.
SliceStats compute_slice_stats(const SlicedWindow& sliced);

/// Inverse of pad_and_slice: concatenates slices and trims the padding.
Mat reassemble(const SlicedWindow& sliced);

namespace kernels {

/// Slice statistics for a batch of equal-shape windows at one period.
/// The dispatcher picks the serial reference or the fused OpenMP kernel
/// according to the process execution mode; both produce bit-identical
/// results.
std::vector<SliceStats> batch_slice_stats(const std::vector<Mat>& windows, int period);
std::vector<SliceStats> batch_slice_stats_serial(const std::vector<Mat>& windows, int period);
std::vector<SliceStats> batch_slice_stats_openmp(const std::vector<Mat>& windows, int period);

}  // namespace kernels

}  // namespace evomsn
