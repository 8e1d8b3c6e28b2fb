#include "evomsn/stat_predictor.hpp"

#include <algorithm>
#include <cmath>

#include "evomsn/common.hpp"

namespace evomsn {

namespace {

int padded_slices(int len, int period) { return (len + period - 1) / period; }

double channel_mean(const Mat& window, int c) {
    double sum = 0.0;
    for (int r = 0; r < window.rows; ++r) sum += window(r, c);
    return sum / window.rows;
}

double channel_std(const Mat& window, int c) {
    const double mean = channel_mean(window, c);
    double sq = 0.0;
    for (int r = 0; r < window.rows; ++r) {
        const double d = window(r, c) - mean;
        sq += d * d;
    }
    return std::sqrt(sq / window.rows);
}

const ScalePredictor& scale_at(const StatPredictorBank& bank, int scale_index) {
    if (scale_index < 0 || scale_index >= bank.size())
        throw RangeError("stat predictor: scale index " + std::to_string(scale_index) +
                         " out of range");
    return bank.scales[static_cast<std::size_t>(scale_index)];
}

}  // namespace

BankGrads zero_grads(const StatPredictorBank& bank) {
    BankGrads g;
    g.mean_grads.reserve(bank.scales.size());
    g.std_grads.reserve(bank.scales.size());
    for (const auto& sp : bank.scales) {
        g.mean_grads.push_back(zero_like(sp.mean_model));
        g.std_grads.push_back(zero_like(sp.std_model));
    }
    return g;
}

StatPredictorBank make_stat_bank(const PeriodSet& periods, int lookback, int horizon,
                                 std::uint64_t seed) {
    if (lookback < 1 || horizon < 1) throw RangeError("make_stat_bank: lookback/horizon must be >= 1");
    if (periods.size() < 1) throw NoData("make_stat_bank: empty period set");

    StatPredictorBank bank;
    bank.lookback = lookback;
    bank.horizon = horizon;
    for (int i = 0; i < periods.size(); ++i) {
        const int p = periods.periods[static_cast<std::size_t>(i)];
        ScalePredictor sp;
        sp.period = p;
        sp.in_slices = padded_slices(lookback, p);
        sp.out_slices = padded_slices(horizon, p);
        const int in_dim = sp.in_slices + 1;
        const int hidden = std::max(32, 2 * in_dim);
        sp.mean_model = init_mlp(in_dim, hidden, sp.out_slices, mix_seed(seed, 2u * i));
        sp.std_model = init_mlp(in_dim, hidden, sp.out_slices, mix_seed(seed, 2u * i + 1));
        bank.scales.push_back(std::move(sp));
    }
    return bank;
}

std::vector<double> mean_features(const Mat& input_means, const Mat& window, int channel) {
    std::vector<double> v(static_cast<std::size_t>(input_means.rows) + 1);
    for (int j = 0; j < input_means.rows; ++j) v[static_cast<std::size_t>(j)] = input_means(j, channel);
    v.back() = channel_mean(window, channel);
    return v;
}

std::vector<double> std_features(const Mat& input_stds, const Mat& window, int channel) {
    std::vector<double> v(static_cast<std::size_t>(input_stds.rows) + 1);
    for (int j = 0; j < input_stds.rows; ++j) v[static_cast<std::size_t>(j)] = input_stds(j, channel);
    v.back() = channel_std(window, channel);
    return v;
}

Mat predict_means(const StatPredictorBank& bank, int scale_index, const Mat& input_means,
                  const Mat& window) {
    const auto& sp = scale_at(bank, scale_index);
    require_shape(input_means, sp.in_slices, window.cols, "predict_means input");
    Mat out(sp.out_slices, window.cols);
    for (int c = 0; c < window.cols; ++c) {
        const auto tr = mlp_forward(sp.mean_model, mean_features(input_means, window, c), FinalAct::identity);
        for (int j = 0; j < sp.out_slices; ++j) out(j, c) = tr.out[static_cast<std::size_t>(j)];
    }
    return out;
}

Mat predict_stds(const StatPredictorBank& bank, int scale_index, const Mat& input_stds,
                 const Mat& window) {
    const auto& sp = scale_at(bank, scale_index);
    require_shape(input_stds, sp.in_slices, window.cols, "predict_stds input");
    Mat out(sp.out_slices, window.cols);
    for (int c = 0; c < window.cols; ++c) {
        const auto tr = mlp_forward(sp.std_model, std_features(input_stds, window, c), FinalAct::relu);
        for (int j = 0; j < sp.out_slices; ++j) out(j, c) = tr.out[static_cast<std::size_t>(j)];
    }
    return out;
}

double stat_loss(const Mat& pred_means, const Mat& pred_stds, const Mat& true_means,
                 const Mat& true_stds) {
    if (!pred_means.same_shape(true_means) || !pred_stds.same_shape(true_stds) ||
        !pred_means.same_shape(pred_stds))
        throw ShapeError("stat_loss: statistic shapes disagree");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred_means.data.size(); ++i) {
        const double dm = pred_means.data[i] - true_means.data[i];
        const double ds = pred_stds.data[i] - true_stds.data[i];
        acc += dm * dm + ds * ds;
    }
    return acc / (2.0 * static_cast<double>(pred_means.data.size()));
}

double stat_loss_grad(const ScalePredictor& sp, const Mat& input_means, const Mat& input_stds,
                      const Mat& window, const Mat& true_means, const Mat& true_stds,
                      double weight, MlpParams& mean_grad, MlpParams& std_grad) {
    require_shape(true_means, sp.out_slices, window.cols, "stat_loss_grad target means");
    require_shape(true_stds, sp.out_slices, window.cols, "stat_loss_grad target stds");

    const double denom = 2.0 * sp.out_slices * window.cols;
    double loss = 0.0;
    std::vector<double> dmean(static_cast<std::size_t>(sp.out_slices));
    std::vector<double> dstd(static_cast<std::size_t>(sp.out_slices));
    for (int c = 0; c < window.cols; ++c) {
        const auto mtr = mlp_forward(sp.mean_model, mean_features(input_means, window, c), FinalAct::identity);
        const auto str = mlp_forward(sp.std_model, std_features(input_stds, window, c), FinalAct::relu);
        for (int j = 0; j < sp.out_slices; ++j) {
            const double em = mtr.out[static_cast<std::size_t>(j)] - true_means(j, c);
            const double es = str.out[static_cast<std::size_t>(j)] - true_stds(j, c);
            loss += em * em + es * es;
            dmean[static_cast<std::size_t>(j)] = weight * 2.0 * em / denom;
            dstd[static_cast<std::size_t>(j)] = weight * 2.0 * es / denom;
        }
        mlp_backward(sp.mean_model, mtr, FinalAct::identity, dmean, mean_grad);
        mlp_backward(sp.std_model, str, FinalAct::relu, dstd, std_grad);
    }
    return loss / denom;
}

std::vector<double> bank_flatten(const StatPredictorBank& bank) {
    std::vector<double> flat;
    for (const auto& sp : bank.scales) {
        const auto m = mlp_flatten(sp.mean_model);
        flat.insert(flat.end(), m.begin(), m.end());
        const auto s = mlp_flatten(sp.std_model);
        flat.insert(flat.end(), s.begin(), s.end());
    }
    return flat;
}

std::vector<double> grads_flatten(const BankGrads& grads) {
    std::vector<double> flat;
    for (std::size_t i = 0; i < grads.mean_grads.size(); ++i) {
        const auto m = mlp_flatten(grads.mean_grads[i]);
        flat.insert(flat.end(), m.begin(), m.end());
        const auto s = mlp_flatten(grads.std_grads[i]);
        flat.insert(flat.end(), s.begin(), s.end());
    }
    return flat;
}

void bank_unflatten(StatPredictorBank& bank, const std::vector<double>& flat) {
    std::size_t cursor = 0;
    for (auto& sp : bank.scales) {
        mlp_unflatten(sp.mean_model, flat, cursor);
        mlp_unflatten(sp.std_model, flat, cursor);
    }
    if (cursor != flat.size()) throw ShapeError("bank_unflatten: stream length mismatch");
}

}  // namespace evomsn
