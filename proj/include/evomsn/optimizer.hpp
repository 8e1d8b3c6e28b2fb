#pragma once

#include <vector>

namespace evomsn {

struct AdamWConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps_opt = 1e-8;
    double weight_decay = 1e-2;
};

// Decoupled-weight-decay Adam over one flat parameter vector.
struct AdamWState {
    std::vector<double> m;
    std::vector<double> v;
    long step = 0;
    AdamWConfig cfg;
};

AdamWState make_adamw(std::size_t n, const AdamWConfig& cfg);

// One update in place: moment averages, bias correction, then
// theta -= lr * (m_hat / (sqrt(v_hat) + eps) + weight_decay * theta).
void adamw_step(AdamWState& state, std::vector<double>& params,
                const std::vector<double>& grads);

}  // namespace evomsn
