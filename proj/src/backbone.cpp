#include "evomsn/backbone.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "evomsn/common.hpp"

namespace evomsn {

std::size_t BackboneParams::param_count() const {
    if (kind == BackboneKind::linear) return weight.data.size() + bias.size();
    return trend_weight.data.size() + trend_bias.size() + seasonal_weight.data.size() +
           seasonal_bias.size();
}

BackboneParams make_backbone(BackboneKind kind, int lookback, int horizon, std::uint64_t seed,
                             int ma_kernel) {
    if (lookback < 1 || horizon < 1)
        throw RangeError("make_backbone: lookback/horizon must be >= 1");
    if (ma_kernel < 1 || ma_kernel % 2 == 0)
        throw RangeError("make_backbone: moving-average kernel must be odd and >= 1, got " +
                         std::to_string(ma_kernel));

    BackboneParams p;
    p.kind = kind;
    p.lookback = lookback;
    p.horizon = horizon;
    p.ma_kernel = ma_kernel;

    std::mt19937_64 rng(seed);
    const double s = 1.0 / std::sqrt(static_cast<double>(lookback));
    if (kind == BackboneKind::linear) {
        p.weight = Mat(horizon, lookback);
        p.bias.assign(static_cast<std::size_t>(horizon), 0.0);
        for (auto& w : p.weight.data) w = uniform(rng, -s, s);
        for (auto& b : p.bias) b = uniform(rng, -s, s);
    } else {
        p.trend_weight = Mat(horizon, lookback);
        p.seasonal_weight = Mat(horizon, lookback);
        p.trend_bias.assign(static_cast<std::size_t>(horizon), 0.0);
        p.seasonal_bias.assign(static_cast<std::size_t>(horizon), 0.0);
        for (auto& w : p.trend_weight.data) w = uniform(rng, -s, s);
        for (auto& b : p.trend_bias) b = uniform(rng, -s, s);
        for (auto& w : p.seasonal_weight.data) w = uniform(rng, -s, s);
        for (auto& b : p.seasonal_bias) b = uniform(rng, -s, s);
    }
    return p;
}

BackboneParams zero_like(const BackboneParams& p) {
    BackboneParams z = p;
    std::fill(z.weight.data.begin(), z.weight.data.end(), 0.0);
    std::fill(z.bias.begin(), z.bias.end(), 0.0);
    std::fill(z.trend_weight.data.begin(), z.trend_weight.data.end(), 0.0);
    std::fill(z.trend_bias.begin(), z.trend_bias.end(), 0.0);
    std::fill(z.seasonal_weight.data.begin(), z.seasonal_weight.data.end(), 0.0);
    std::fill(z.seasonal_bias.begin(), z.seasonal_bias.end(), 0.0);
    return z;
}

std::vector<double> moving_average(const std::vector<double>& x, int kernel) {
    if (kernel < 1 || kernel % 2 == 0)
        throw RangeError("moving_average: kernel must be odd and >= 1");
    const int n = static_cast<int>(x.size());
    const int half = kernel / 2;
    std::vector<double> out(x.size());
    for (int t = 0; t < n; ++t) {
        double acc = 0.0;
        for (int d = -half; d <= half; ++d) {
            const int idx = std::clamp(t + d, 0, n - 1);
            acc += x[static_cast<std::size_t>(idx)];
        }
        out[static_cast<std::size_t>(t)] = acc / kernel;
    }
    return out;
}

namespace {

void apply_linear(const Mat& w, const std::vector<double>& b, const std::vector<double>& x,
                  int H, int L, std::vector<double>& out_acc) {
    for (int h = 0; h < H; ++h) {
        double acc = b[static_cast<std::size_t>(h)];
        for (int l = 0; l < L; ++l) acc += w(h, l) * x[static_cast<std::size_t>(l)];
        out_acc[static_cast<std::size_t>(h)] += acc;
    }
}

}  // namespace

Mat backbone_forward(const BackboneParams& p, const Mat& input) {
    if (input.rows != p.lookback)
        throw ShapeError("backbone_forward: input length " + std::to_string(input.rows) +
                         " != lookback " + std::to_string(p.lookback));
    Mat out(p.horizon, input.cols);
    std::vector<double> acc(static_cast<std::size_t>(p.horizon));
    for (int c = 0; c < input.cols; ++c) {
        const auto x = column(input, c);
        std::fill(acc.begin(), acc.end(), 0.0);
        if (p.kind == BackboneKind::linear) {
            apply_linear(p.weight, p.bias, x, p.horizon, p.lookback, acc);
        } else {
            const auto trend = moving_average(x, p.ma_kernel);
            std::vector<double> seasonal(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) seasonal[i] = x[i] - trend[i];
            apply_linear(p.trend_weight, p.trend_bias, trend, p.horizon, p.lookback, acc);
            apply_linear(p.seasonal_weight, p.seasonal_bias, seasonal, p.horizon, p.lookback, acc);
        }
        for (int h = 0; h < p.horizon; ++h) out(h, c) = acc[static_cast<std::size_t>(h)];
    }
    return out;
}

std::vector<Mat> backbone_forward_multiscale(const BackboneParams& p,
                                             const std::vector<Mat>& normalized_set) {
    std::vector<Mat> out;
    out.reserve(normalized_set.size());
    for (const auto& x : normalized_set) out.push_back(backbone_forward(p, x));
    return out;
}

void backbone_backward(const BackboneParams& p, const Mat& input, const Mat& dloss_dout,
                       BackboneParams& grad) {
    if (input.rows != p.lookback || dloss_dout.rows != p.horizon ||
        input.cols != dloss_dout.cols)
        throw ShapeError("backbone_backward: shape mismatch");

    for (int c = 0; c < input.cols; ++c) {
        const auto x = column(input, c);
        if (p.kind == BackboneKind::linear) {
            for (int h = 0; h < p.horizon; ++h) {
                const double g = dloss_dout(h, c);
                if (g == 0.0) continue;
                grad.bias[static_cast<std::size_t>(h)] += g;
                for (int l = 0; l < p.lookback; ++l)
                    grad.weight(h, l) += g * x[static_cast<std::size_t>(l)];
            }
        } else {
            const auto trend = moving_average(x, p.ma_kernel);
            std::vector<double> seasonal(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) seasonal[i] = x[i] - trend[i];
            for (int h = 0; h < p.horizon; ++h) {
                const double g = dloss_dout(h, c);
                if (g == 0.0) continue;
                grad.trend_bias[static_cast<std::size_t>(h)] += g;
                grad.seasonal_bias[static_cast<std::size_t>(h)] += g;
                for (int l = 0; l < p.lookback; ++l) {
                    grad.trend_weight(h, l) += g * trend[static_cast<std::size_t>(l)];
                    grad.seasonal_weight(h, l) += g * seasonal[static_cast<std::size_t>(l)];
                }
            }
        }
    }
}

std::vector<double> backbone_flatten(const BackboneParams& p) {
    std::vector<double> flat;
    flat.reserve(p.param_count());
    if (p.kind == BackboneKind::linear) {
        flat.insert(flat.end(), p.weight.data.begin(), p.weight.data.end());
        flat.insert(flat.end(), p.bias.begin(), p.bias.end());
    } else {
        flat.insert(flat.end(), p.trend_weight.data.begin(), p.trend_weight.data.end());
        flat.insert(flat.end(), p.trend_bias.begin(), p.trend_bias.end());
        flat.insert(flat.end(), p.seasonal_weight.data.begin(), p.seasonal_weight.data.end());
        flat.insert(flat.end(), p.seasonal_bias.begin(), p.seasonal_bias.end());
    }
    return flat;
}

void backbone_unflatten(BackboneParams& p, const std::vector<double>& flat) {
    if (flat.size() != p.param_count())
        throw ShapeError("backbone_unflatten: stream length mismatch");
    std::size_t cur = 0;
    if (p.kind == BackboneKind::linear) {
        for (auto& w : p.weight.data) w = flat[cur++];
        for (auto& b : p.bias) b = flat[cur++];
    } else {
        for (auto& w : p.trend_weight.data) w = flat[cur++];
        for (auto& b : p.trend_bias) b = flat[cur++];
        for (auto& w : p.seasonal_weight.data) w = flat[cur++];
        for (auto& b : p.seasonal_bias) b = flat[cur++];
    }
}

}  // namespace evomsn
