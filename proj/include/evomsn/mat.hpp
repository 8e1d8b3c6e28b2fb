#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "evomsn/common.hpp"

namespace evomsn {

/// Dense row-major matrix of doubles. Windows are stored time-major:
/// rows index time steps, columns index channels.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    bool empty() const { return rows == 0 || cols == 0; }
    std::size_t size() const { return data.size(); }

    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

inline void require_shape(const Mat& m, int rows, int cols, const char* what) {
    if (m.rows != rows || m.cols != cols)
        throw ShapeError(std::string(what) + ": expected " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ", got " + std::to_string(m.rows) + "x" +
                         std::to_string(m.cols));
}

inline std::vector<double> column(const Mat& m, int c) {
    std::vector<double> out(static_cast<std::size_t>(m.rows));
    for (int r = 0; r < m.rows; ++r) out[r] = m(r, c);
    return out;
}

inline void set_column(Mat& m, int c, const std::vector<double>& v) {
    for (int r = 0; r < m.rows; ++r) m(r, c) = v[r];
}

/// Rows [first, first+count) as a new matrix.
inline Mat row_block(const Mat& m, int first, int count) {
    Mat out(count, m.cols);
    for (int r = 0; r < count; ++r)
        for (int c = 0; c < m.cols; ++c) out(r, c) = m(first + r, c);
    return out;
}

inline bool all_finite(const Mat& m) {
    for (double v : m.data)
        if (!std::isfinite(v)) return false;
    return true;
}

/// Uniform double in [lo, hi) drawn directly from the engine's 64-bit output,
/// so results do not depend on the standard library's distribution internals.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

/// Unbiased integer draw in [0, n).
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do { x = rng(); } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

}  // namespace evomsn
