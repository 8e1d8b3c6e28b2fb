#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evomsn/mat.hpp"

namespace evomsn {

/// A length-T, C-channel real-valued series. `step_index_origin` is the
/// offset of row 0 into the source file the series was cut from.
struct MultiSeries {
    Mat values;  // T x C
    std::vector<std::string> channel_names;
    long step_index_origin = 0;

    long length() const { return values.rows; }
    int channels() const { return values.cols; }
};

/// One look-back/horizon pair. `horizon` is absent at pure-inference time.
struct WindowPair {
    Mat input;                  // L x C
    std::optional<Mat> horizon; // H x C
    long origin = 0;            // start step of `input`
};

/// Chronological stride-`stride` windowing of a series into (x, y) pairs.
/// Yields floor((T - L - H) / stride) + 1 windows.
std::vector<WindowPair> make_windows(const MultiSeries& series, int lookback, int horizon,
                                     int stride = 1);

}  // namespace evomsn
