#include "evomsn/pipeline.hpp"

#include <cmath>

#include "evomsn/common.hpp"

namespace evomsn {

NormalizedSet normalize(const Mat& window, const PeriodSet& periods, double eps) {
    if (eps <= 0.0) throw RangeError("normalize: eps must be positive");
    if (periods.size() < 1) throw NoData("normalize: empty period set");

    NormalizedSet ns;
    ns.eps = eps;
    ns.periods = periods.periods;
    for (int i = 0; i < periods.size(); ++i) {
        const int p = periods.periods[static_cast<std::size_t>(i)];
        SlicedWindow sliced = pad_and_slice(window, p);
        const SliceStats stats = compute_slice_stats(sliced);
        for (int r = 0; r < sliced.padded.rows; ++r) {
            const int j = r / p;
            for (int c = 0; c < sliced.padded.cols; ++c)
                sliced.padded(r, c) =
                    (sliced.padded(r, c) - stats.means(j, c)) / (stats.stds(j, c) + eps);
        }
        ns.normalized.push_back(reassemble(sliced));
        ns.stats.push_back(stats);
    }
    return ns;
}

std::vector<Mat> denormalize(const std::vector<Mat>& outputs, const std::vector<Mat>& pred_means,
                             const std::vector<Mat>& pred_stds, const PeriodSet& periods,
                             double eps, int horizon) {
    const std::size_t k = outputs.size();
    if (pred_means.size() != k || pred_stds.size() != k ||
        k != static_cast<std::size_t>(periods.size()))
        throw ShapeError("denormalize: scale counts disagree");

    std::vector<Mat> recovered;
    recovered.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const int p = periods.periods[i];
        const int slices = (horizon + p - 1) / p;
        const Mat& y = outputs[i];
        require_shape(y, horizon, y.cols, "denormalize output");
        require_shape(pred_means[i], slices, y.cols, "denormalize predicted means");
        require_shape(pred_stds[i], slices, y.cols, "denormalize predicted stds");

        Mat rec(horizon, y.cols);
        for (int t = 0; t < horizon; ++t) {
            const int j = t / p;
            for (int c = 0; c < y.cols; ++c)
                rec(t, c) = y(t, c) * (pred_stds[i](j, c) + eps) + pred_means[i](j, c);
        }
        recovered.push_back(std::move(rec));
    }
    return recovered;
}

Mat amplitude_weights(const Mat& local_amps) {
    const int k = local_amps.rows;
    if (k < 1) throw NoData("amplitude_weights: no scales");
    Mat w(k, local_amps.cols);
    for (int c = 0; c < local_amps.cols; ++c) {
        double total = 0.0;
        for (int i = 0; i < k; ++i) total += local_amps(i, c);
        for (int i = 0; i < k; ++i)
            w(i, c) = total > 0.0 ? local_amps(i, c) / total : 1.0 / k;
    }
    return w;
}

EnsembleResult ensemble(const std::vector<Mat>& per_scale, const Mat& local_amps) {
    const int k = static_cast<int>(per_scale.size());
    if (k < 1) throw NoData("ensemble: no forecasts");
    require_shape(local_amps, k, per_scale[0].cols, "ensemble amplitudes");

    const int H = per_scale[0].rows;
    const int C = per_scale[0].cols;
    for (const auto& m : per_scale) require_shape(m, H, C, "ensemble per-scale forecast");

    EnsembleResult res{amplitude_weights(local_amps), Mat(H, C)};
    for (int t = 0; t < H; ++t)
        for (int c = 0; c < C; ++c) {
            double acc = 0.0;
            for (int i = 0; i < k; ++i) acc += res.weights(i, c) * per_scale[static_cast<std::size_t>(i)](t, c);
            res.final(t, c) = acc;
        }
    return res;
}

EnsembleResult ensemble(const std::vector<Mat>& per_scale, const Mat& window,
                        const PeriodSet& periods) {
    return ensemble(per_scale, local_amplitudes(window, periods).amplitudes);
}

ForecastBundle msn_forward(const Models& models, const Mat& window) {
    if (window.rows != models.bank.lookback)
        throw ShapeError("msn_forward: window length " + std::to_string(window.rows) +
                         " != lookback " + std::to_string(models.bank.lookback));

    ForecastBundle b;
    b.inputs = normalize(window, models.periods, models.eps);

    const int k = models.periods.size();
    b.pred_means.reserve(static_cast<std::size_t>(k));
    b.pred_stds.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        b.pred_means.push_back(
            predict_means(models.bank, i, b.inputs.stats[static_cast<std::size_t>(i)].means, window));
        b.pred_stds.push_back(
            predict_stds(models.bank, i, b.inputs.stats[static_cast<std::size_t>(i)].stds, window));
    }

    b.normalized_outputs = backbone_forward_multiscale(models.backbone, b.inputs.normalized);
    b.per_scale = denormalize(b.normalized_outputs, b.pred_means, b.pred_stds, models.periods,
                              models.eps, models.bank.horizon);
    b.local_amps = local_amplitudes(window, models.periods).amplitudes;
    auto ens = ensemble(b.per_scale, b.local_amps);
    b.weights = std::move(ens.weights);
    b.final = std::move(ens.final);
    return b;
}

namespace {

double forecast_mse(const Mat& final, const Mat& truth, Mat& g) {
    if (!final.same_shape(truth)) throw ShapeError("end-to-end loss: forecast/target shapes disagree");
    g = Mat(final.rows, final.cols);
    const double n = static_cast<double>(final.data.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < final.data.size(); ++i) {
        const double e = final.data[i] - truth.data[i];
        loss += e * e;
        g.data[i] = 2.0 * e / n;
    }
    return loss / n;
}

}  // namespace

double end_to_end_stat_grads(const Models& models, const ForecastBundle& bundle,
                             const Mat& window, const Mat& truth, double weight,
                             BankGrads& grads) {
    Mat g;
    const double loss = forecast_mse(bundle.final, truth, g);
    const int H = truth.rows;
    const int C = truth.cols;

    for (int i = 0; i < models.bank.size(); ++i) {
        const auto& sp = models.bank.scales[static_cast<std::size_t>(i)];
        const int p = sp.period;
        Mat dmeans(sp.out_slices, C);
        Mat dstds(sp.out_slices, C);
        for (int t = 0; t < H; ++t) {
            const int j = t / p;
            for (int c = 0; c < C; ++c) {
                const double up = g(t, c) * bundle.weights(i, c);
                dmeans(j, c) += up;
                dstds(j, c) += up * bundle.normalized_outputs[static_cast<std::size_t>(i)](t, c);
            }
        }
        std::vector<double> dm(static_cast<std::size_t>(sp.out_slices));
        std::vector<double> ds(static_cast<std::size_t>(sp.out_slices));
        const auto& in_stats = bundle.inputs.stats[static_cast<std::size_t>(i)];
        for (int c = 0; c < C; ++c) {
            const auto mtr =
                mlp_forward(sp.mean_model, mean_features(in_stats.means, window, c), FinalAct::identity);
            const auto str =
                mlp_forward(sp.std_model, std_features(in_stats.stds, window, c), FinalAct::relu);
            for (int j = 0; j < sp.out_slices; ++j) {
                dm[static_cast<std::size_t>(j)] = weight * dmeans(j, c);
                ds[static_cast<std::size_t>(j)] = weight * dstds(j, c);
            }
            mlp_backward(sp.mean_model, mtr, FinalAct::identity, dm,
                         grads.mean_grads[static_cast<std::size_t>(i)]);
            mlp_backward(sp.std_model, str, FinalAct::relu, ds,
                         grads.std_grads[static_cast<std::size_t>(i)]);
        }
    }
    return loss;
}

double end_to_end_backbone_grad(const Models& models, const ForecastBundle& bundle,
                                const Mat& truth, double weight, BackboneParams& grad) {
    Mat g;
    const double loss = forecast_mse(bundle.final, truth, g);
    const int H = truth.rows;
    const int C = truth.cols;

    for (int i = 0; i < models.bank.size(); ++i) {
        const int p = models.bank.scales[static_cast<std::size_t>(i)].period;
        Mat dout(H, C);
        for (int t = 0; t < H; ++t) {
            const int j = t / p;
            for (int c = 0; c < C; ++c)
                dout(t, c) = weight * g(t, c) * bundle.weights(i, c) *
                             (bundle.pred_stds[static_cast<std::size_t>(i)](j, c) + models.eps);
        }
        backbone_backward(models.backbone, bundle.inputs.normalized[static_cast<std::size_t>(i)],
                          dout, grad);
    }
    return loss;
}

}  // namespace evomsn
