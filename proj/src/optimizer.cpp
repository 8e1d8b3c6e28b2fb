#include "evomsn/optimizer.hpp"

#include <cmath>

#include "evomsn/common.hpp"

namespace evomsn {

AdamWState make_adamw(std::size_t n, const AdamWConfig& cfg) {
    AdamWState st;
    st.m.assign(n, 0.0);
    st.v.assign(n, 0.0);
    st.cfg = cfg;
    return st;
}

void adamw_step(AdamWState& state, std::vector<double>& params,
                const std::vector<double>& grads) {
    if (params.size() != state.m.size() || grads.size() != state.m.size())
        throw ShapeError("adamw_step: parameter/gradient/state lengths disagree");

    const auto& c = state.cfg;
    state.step += 1;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * g;
        state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * g * g;
        const double m_hat = state.m[i] / bc1;
        const double v_hat = state.v[i] / bc2;
        params[i] -= c.lr * (m_hat / (std::sqrt(v_hat) + c.eps_opt) + c.weight_decay * params[i]);
    }
}

}  // namespace evomsn
