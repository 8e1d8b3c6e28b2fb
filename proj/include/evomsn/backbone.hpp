#pragma once

#include <cstdint>
#include <vector>

#include "evomsn/mat.hpp"

namespace evomsn {

enum class BackboneKind { linear, dlinear };

// Channel-independent forecasting head mapping a length-L input to a
// length-H output with one weight set shared across channels. The dlinear
// kind splits the input into a centered-moving-average trend and a seasonal
// remainder, each with its own linear map.
struct BackboneParams {
    BackboneKind kind = BackboneKind::linear;
    int lookback = 0;
    int horizon = 0;

    Mat weight;                // H x L (linear)
    std::vector<double> bias;  // H     (linear)

    Mat trend_weight;     // H x L (dlinear)
    Mat seasonal_weight;  // H x L (dlinear)
    std::vector<double> trend_bias;
    std::vector<double> seasonal_bias;
    int ma_kernel = 25;  // odd, edge-replicated

    std::size_t param_count() const;
};

BackboneParams make_backbone(BackboneKind kind, int lookback, int horizon, std::uint64_t seed,
                             int ma_kernel = 25);
BackboneParams zero_like(const BackboneParams& p);

// Centered moving average with clamped (edge-replicated) indices.
std::vector<double> moving_average(const std::vector<double>& x, int kernel);

Mat backbone_forward(const BackboneParams& p, const Mat& input);
std::vector<Mat> backbone_forward_multiscale(const BackboneParams& p,
                                             const std::vector<Mat>& normalized_set);

// Accumulates d(loss)/d(params) into `grad` given d(loss)/d(output) for one
// input window. Inputs are data, so no gradient flows to them.
void backbone_backward(const BackboneParams& p, const Mat& input, const Mat& dloss_dout,
                       BackboneParams& grad);

// Flat order: linear -> weight, bias; dlinear -> trend weight, trend bias,
// seasonal weight, seasonal bias.
std::vector<double> backbone_flatten(const BackboneParams& p);
void backbone_unflatten(BackboneParams& p, const std::vector<double>& flat);

}  // namespace evomsn
