#pragma once

#include <cstdint>
#include <vector>

#include "evomsn/mat.hpp"

namespace evomsn {

enum class FinalAct { identity, relu };

// Two-layer perceptron applied per channel. Hidden activation is relu; the
// output activation is chosen by the caller (identity for mean heads, relu
// for std heads so predictions stay non-negative).
struct MlpParams {
    Mat w1;                  // hidden x in
    std::vector<double> b1;  // hidden
    Mat w2;                  // out x hidden
    std::vector<double> b2;  // out

    int in_dim() const { return w1.cols; }
    int hidden_dim() const { return w1.rows; }
    int out_dim() const { return w2.rows; }

    std::size_t param_count() const {
        return w1.data.size() + b1.size() + w2.data.size() + b2.size();
    }
};

// Everything the backward pass needs from one forward evaluation.
struct MlpTrace {
    std::vector<double> input;
    std::vector<double> hidden_pre;
    std::vector<double> hidden;
    std::vector<double> out_pre;
    std::vector<double> out;
};

MlpParams zero_like(const MlpParams& p);

// Weights drawn uniformly in [-1/sqrt(fan_in), +1/sqrt(fan_in)], fixed draw
// order (w1 row-major, b1, w2 row-major, b2) so a seed pins every value.
MlpParams init_mlp(int in, int hidden, int out, std::uint64_t seed);

MlpTrace mlp_forward(const MlpParams& p, const std::vector<double>& input, FinalAct act);

// Accumulates gradients into `grad` (callers batch over channels/samples by
// reusing one holder). dloss_dout is with respect to the post-activation
// output.
void mlp_backward(const MlpParams& p, const MlpTrace& trace, FinalAct act,
                  const std::vector<double>& dloss_dout, MlpParams& grad);

// Flat parameter order: w1 row-major, b1, w2 row-major, b2.
std::vector<double> mlp_flatten(const MlpParams& p);
void mlp_unflatten(MlpParams& p, const std::vector<double>& flat, std::size_t& cursor);

}  // namespace evomsn
