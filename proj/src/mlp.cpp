#include "evomsn/mlp.hpp"

#include <cmath>
#include <random>

#include "evomsn/common.hpp"

namespace evomsn {

MlpParams zero_like(const MlpParams& p) {
    MlpParams z;
    z.w1 = Mat(p.w1.rows, p.w1.cols);
    z.b1.assign(p.b1.size(), 0.0);
    z.w2 = Mat(p.w2.rows, p.w2.cols);
    z.b2.assign(p.b2.size(), 0.0);
    return z;
}

MlpParams init_mlp(int in, int hidden, int out, std::uint64_t seed) {
    if (in < 1 || hidden < 1 || out < 1)
        throw ShapeError("init_mlp: dimensions must be positive");
    std::mt19937_64 rng(seed);
    MlpParams p;
    p.w1 = Mat(hidden, in);
    p.b1.assign(static_cast<std::size_t>(hidden), 0.0);
    p.w2 = Mat(out, hidden);
    p.b2.assign(static_cast<std::size_t>(out), 0.0);

    const double s1 = 1.0 / std::sqrt(static_cast<double>(in));
    for (auto& w : p.w1.data) w = uniform(rng, -s1, s1);
    for (auto& b : p.b1) b = uniform(rng, -s1, s1);
    const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    for (auto& w : p.w2.data) w = uniform(rng, -s2, s2);
    for (auto& b : p.b2) b = uniform(rng, -s2, s2);
    return p;
}

MlpTrace mlp_forward(const MlpParams& p, const std::vector<double>& input, FinalAct act) {
    if (static_cast<int>(input.size()) != p.in_dim())
        throw ShapeError("mlp_forward: input size " + std::to_string(input.size()) +
                         " != in dim " + std::to_string(p.in_dim()));
    const int H = p.hidden_dim();
    const int O = p.out_dim();

    MlpTrace tr;
    tr.input = input;
    tr.hidden_pre.resize(static_cast<std::size_t>(H));
    tr.hidden.resize(static_cast<std::size_t>(H));
    for (int h = 0; h < H; ++h) {
        double acc = p.b1[static_cast<std::size_t>(h)];
        for (int i = 0; i < p.in_dim(); ++i) acc += p.w1(h, i) * input[static_cast<std::size_t>(i)];
        tr.hidden_pre[static_cast<std::size_t>(h)] = acc;
        tr.hidden[static_cast<std::size_t>(h)] = acc > 0.0 ? acc : 0.0;
    }
    tr.out_pre.resize(static_cast<std::size_t>(O));
    tr.out.resize(static_cast<std::size_t>(O));
    for (int o = 0; o < O; ++o) {
        double acc = p.b2[static_cast<std::size_t>(o)];
        for (int h = 0; h < H; ++h) acc += p.w2(o, h) * tr.hidden[static_cast<std::size_t>(h)];
        tr.out_pre[static_cast<std::size_t>(o)] = acc;
        tr.out[static_cast<std::size_t>(o)] =
            act == FinalAct::relu ? (acc > 0.0 ? acc : 0.0) : acc;
    }
    return tr;
}

void mlp_backward(const MlpParams& p, const MlpTrace& trace, FinalAct act,
                  const std::vector<double>& dloss_dout, MlpParams& grad) {
    const int H = p.hidden_dim();
    const int O = p.out_dim();
    const int I = p.in_dim();
    if (static_cast<int>(dloss_dout.size()) != O)
        throw ShapeError("mlp_backward: gradient size mismatch");

    std::vector<double> dout_pre(static_cast<std::size_t>(O));
    for (int o = 0; o < O; ++o) {
        double g = dloss_dout[static_cast<std::size_t>(o)];
        if (act == FinalAct::relu && trace.out_pre[static_cast<std::size_t>(o)] <= 0.0) g = 0.0;
        dout_pre[static_cast<std::size_t>(o)] = g;
    }

    std::vector<double> dhidden(static_cast<std::size_t>(H), 0.0);
    for (int o = 0; o < O; ++o) {
        const double g = dout_pre[static_cast<std::size_t>(o)];
        grad.b2[static_cast<std::size_t>(o)] += g;
        for (int h = 0; h < H; ++h) {
            grad.w2(o, h) += g * trace.hidden[static_cast<std::size_t>(h)];
            dhidden[static_cast<std::size_t>(h)] += p.w2(o, h) * g;
        }
    }

    for (int h = 0; h < H; ++h) {
        if (trace.hidden_pre[static_cast<std::size_t>(h)] <= 0.0) continue;
        const double g = dhidden[static_cast<std::size_t>(h)];
        grad.b1[static_cast<std::size_t>(h)] += g;
        for (int i = 0; i < I; ++i) grad.w1(h, i) += g * trace.input[static_cast<std::size_t>(i)];
    }
}

std::vector<double> mlp_flatten(const MlpParams& p) {
    std::vector<double> flat;
    flat.reserve(p.param_count());
    flat.insert(flat.end(), p.w1.data.begin(), p.w1.data.end());
    flat.insert(flat.end(), p.b1.begin(), p.b1.end());
    flat.insert(flat.end(), p.w2.data.begin(), p.w2.data.end());
    flat.insert(flat.end(), p.b2.begin(), p.b2.end());
    return flat;
}

void mlp_unflatten(MlpParams& p, const std::vector<double>& flat, std::size_t& cursor) {
    if (cursor + p.param_count() > flat.size())
        throw ShapeError("mlp_unflatten: stream too short");
    for (auto& w : p.w1.data) w = flat[cursor++];
    for (auto& b : p.b1) b = flat[cursor++];
    for (auto& w : p.w2.data) w = flat[cursor++];
    for (auto& b : p.b2) b = flat[cursor++];
}

}  // namespace evomsn
