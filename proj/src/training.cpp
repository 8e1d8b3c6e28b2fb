#include "evomsn/training.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>

#include <json.hpp>

#include "evomsn/common.hpp"
#include "evomsn/parallel.hpp"

namespace evomsn {

namespace {

void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
    for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[uniform_index(rng, i)]);
}

const Mat& horizon_of(const WindowPair& w) {
    if (!w.horizon) throw NoData("training window is missing its horizon");
    return *w.horizon;
}

// Mini-batch loop shared by the pretraining stages: seeded shuffling, AdamW,
// early stopping on the validation metric with best-parameter restore.
// `batch_grad` fills a zeroed flat gradient and returns the batch mean loss;
// `eval_val` may be empty, in which case the epoch training loss stands in.
PretrainResult drive_epochs(
    std::vector<double>& params, std::size_t train_count, const TrainSchedule& sched, double lr,
    const std::function<double(const std::vector<std::size_t>&, std::vector<double>&)>& batch_grad,
    const std::function<double()>& eval_val, const std::function<void()>& params_changed,
    std::uint64_t shuffle_salt) {
    PretrainResult result;
    if (sched.epochs <= 0 || train_count == 0) return result;

    AdamWConfig cfg = sched.adamw;
    cfg.lr = lr;
    AdamWState opt = make_adamw(params.size(), cfg);
    std::mt19937_64 rng(mix_seed(sched.seed, shuffle_salt));

    std::vector<std::size_t> order(train_count);
    for (std::size_t i = 0; i < train_count; ++i) order[i] = i;

    const std::size_t batch = sched.batch_size > 0 ? static_cast<std::size_t>(sched.batch_size) : 1;
    std::vector<double> grad(params.size());
    std::vector<double> best_params = params;
    double best_val = std::numeric_limits<double>::infinity();
    int stale = 0;

    for (int epoch = 1; epoch <= sched.epochs; ++epoch) {
        shuffle_indices(order, rng);
        double loss_acc = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < train_count; start += batch) {
            const std::size_t stop = std::min(train_count, start + batch);
            const std::vector<std::size_t> members(order.begin() + static_cast<long>(start),
                                                   order.begin() + static_cast<long>(stop));
            std::fill(grad.begin(), grad.end(), 0.0);
            const double batch_loss = batch_grad(members, grad);
            adamw_step(opt, params, grad);
            params_changed();
            loss_acc += batch_loss * static_cast<double>(members.size());
            seen += members.size();
        }
        const double train_loss = loss_acc / static_cast<double>(seen);
        const double val_loss = eval_val ? eval_val() : train_loss;
        result.history.push_back({epoch, train_loss, val_loss});

        if (val_loss < best_val) {
            best_val = val_loss;
            best_params = params;
            result.best_epoch = epoch;
            stale = 0;
        } else if (sched.patience > 0 && ++stale >= sched.patience) {
            break;
        }
    }

    params = best_params;
    params_changed();
    result.best_val = best_val;
    return result;
}

// Per-window inputs for stats pretraining, all shapes precomputed once.
struct StatBatchData {
    std::vector<Mat> windows;
    // [scale][window]
    std::vector<std::vector<SliceStats>> in_stats;
    std::vector<std::vector<SliceStats>> out_stats;
};

StatBatchData prepare_stat_data(const StatPredictorBank& bank,
                                const std::vector<WindowPair>& set) {
    StatBatchData d;
    d.windows.reserve(set.size());
    std::vector<Mat> horizons;
    horizons.reserve(set.size());
    for (const auto& w : set) {
        d.windows.push_back(w.input);
        horizons.push_back(horizon_of(w));
    }
    for (const auto& sp : bank.scales) {
        d.in_stats.push_back(kernels::batch_slice_stats(d.windows, sp.period));
        d.out_stats.push_back(kernels::batch_slice_stats(horizons, sp.period));
    }
    return d;
}

double stat_set_loss(const StatPredictorBank& bank, const StatBatchData& d) {
    std::vector<double> per_window(d.windows.size());
    parallel_for(d.windows.size(), [&](std::size_t w) {
        double acc = 0.0;
        for (int s = 0; s < bank.size(); ++s) {
            const auto su = static_cast<std::size_t>(s);
            const Mat pm = predict_means(bank, s, d.in_stats[su][w].means, d.windows[w]);
            const Mat ps = predict_stds(bank, s, d.in_stats[su][w].stds, d.windows[w]);
            acc += stat_loss(pm, ps, d.out_stats[su][w].means, d.out_stats[su][w].stds);
        }
        per_window[w] = acc / bank.size();
    });
    double total = 0.0;
    for (double v : per_window) total += v;
    return total / static_cast<double>(per_window.size());
}

// Frozen-pipeline view of one window for backbone training: normalized
// inputs plus the affine recovery and ensemble weights, all constant while
// only the backbone moves.
struct PipeCache {
    std::vector<Mat> norm_in;  // k of L x C
    std::vector<Mat> sigma;    // k of J_out x C, predicted std + eps
    std::vector<Mat> mu;       // k of J_out x C
    std::vector<int> periods;
    Mat weights;  // k x C
    Mat truth;    // H x C
};

PipeCache build_pipe_cache(const StatPredictorBank& bank, const PeriodSet& periods, double eps,
                           const WindowPair& w) {
    PipeCache pc;
    const Mat& window = w.input;
    NormalizedSet ns = normalize(window, periods, eps);
    pc.norm_in = std::move(ns.normalized);
    pc.periods = periods.periods;
    for (int i = 0; i < bank.size(); ++i) {
        const auto iu = static_cast<std::size_t>(i);
        Mat mu = predict_means(bank, i, ns.stats[iu].means, window);
        Mat sg = predict_stds(bank, i, ns.stats[iu].stds, window);
        for (auto& v : sg.data) v += eps;
        pc.mu.push_back(std::move(mu));
        pc.sigma.push_back(std::move(sg));
    }
    pc.weights = amplitude_weights(local_amplitudes(window, periods).amplitudes);
    pc.truth = horizon_of(w);
    return pc;
}

// Forecast through the cached frozen pipeline; fills `final` and returns the
// per-scale normalized outputs for the backward pass.
double cached_forward(const BackboneParams& backbone, const PipeCache& pc,
                      std::vector<Mat>* normalized_out, Mat* final_out) {
    const int H = pc.truth.rows;
    const int C = pc.truth.cols;
    const int k = static_cast<int>(pc.norm_in.size());
    Mat final(H, C);
    std::vector<Mat> outs;
    outs.reserve(pc.norm_in.size());
    for (int i = 0; i < k; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        Mat y = backbone_forward(backbone, pc.norm_in[iu]);
        const int p = pc.periods[iu];
        for (int t = 0; t < H; ++t) {
            const int j = t / p;
            for (int c = 0; c < C; ++c)
                final(t, c) += pc.weights(i, c) * (y(t, c) * pc.sigma[iu](j, c) + pc.mu[iu](j, c));
        }
        outs.push_back(std::move(y));
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < final.data.size(); ++i) {
        const double e = final.data[i] - pc.truth.data[i];
        loss += e * e;
    }
    loss /= static_cast<double>(final.data.size());
    if (normalized_out) *normalized_out = std::move(outs);
    if (final_out) *final_out = std::move(final);
    return loss;
}

double mean_cached_loss(const BackboneParams& backbone, const std::vector<PipeCache>& caches) {
    std::vector<double> per(caches.size());
    parallel_for(caches.size(), [&](std::size_t i) {
        per[i] = cached_forward(backbone, caches[i], nullptr, nullptr);
    });
    double total = 0.0;
    for (double v : per) total += v;
    return total / static_cast<double>(per.size());
}

void mse_grad(const Mat& pred, const Mat& truth, double scale, Mat& g, double& loss) {
    g = Mat(pred.rows, pred.cols);
    const double n = static_cast<double>(pred.data.size());
    loss = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double e = pred.data[i] - truth.data[i];
        loss += e * e;
        g.data[i] = scale * 2.0 * e / n;
    }
    loss /= n;
}

}  // namespace

PretrainResult pretrain_stats(StatPredictorBank& bank, const std::vector<WindowPair>& train,
                              const std::vector<WindowPair>& val, const TrainSchedule& sched) {
    if (train.empty()) throw NoData("pretrain_stats: empty training set");

    const StatBatchData tr = prepare_stat_data(bank, train);
    const StatBatchData va = prepare_stat_data(bank, val);

    std::vector<double> params = bank_flatten(bank);
    auto batch_grad = [&](const std::vector<std::size_t>& members, std::vector<double>& grad) {
        BankGrads g = zero_grads(bank);
        const double weight = 1.0 / static_cast<double>(members.size());
        double loss = 0.0;
        for (std::size_t w : members) {
            for (int s = 0; s < bank.size(); ++s) {
                const auto su = static_cast<std::size_t>(s);
                loss += stat_loss_grad(bank.scales[su], tr.in_stats[su][w].means,
                                       tr.in_stats[su][w].stds, tr.windows[w],
                                       tr.out_stats[su][w].means, tr.out_stats[su][w].stds, weight,
                                       g.mean_grads[su], g.std_grads[su]);
            }
        }
        grad = grads_flatten(g);
        return loss / (static_cast<double>(members.size()) * bank.size());
    };
    std::function<double()> eval_val;
    if (!val.empty()) eval_val = [&] { return stat_set_loss(bank, va); };

    return drive_epochs(params, train.size(), sched, sched.stats_lr, batch_grad, eval_val,
                        [&] { bank_unflatten(bank, params); }, 0x73746174u);
}

PretrainResult pretrain_backbone(BackboneParams& backbone, const StatPredictorBank& bank,
                                 const PeriodSet& periods, double eps,
                                 const std::vector<WindowPair>& train,
                                 const std::vector<WindowPair>& val,
                                 const TrainSchedule& sched) {
    if (train.empty()) throw NoData("pretrain_backbone: empty training set");

    std::vector<PipeCache> tr(train.size());
    parallel_for(train.size(), [&](std::size_t i) {
        tr[i] = build_pipe_cache(bank, periods, eps, train[i]);
    });
    std::vector<PipeCache> va(val.size());
    parallel_for(val.size(), [&](std::size_t i) {
        va[i] = build_pipe_cache(bank, periods, eps, val[i]);
    });

    std::vector<double> params = backbone_flatten(backbone);
    auto batch_grad = [&](const std::vector<std::size_t>& members, std::vector<double>& grad) {
        BackboneParams holder = zero_like(backbone);
        const double weight = 1.0 / static_cast<double>(members.size());
        double loss = 0.0;
        for (std::size_t w : members) {
            const PipeCache& pc = tr[w];
            std::vector<Mat> outs;
            Mat final;
            loss += cached_forward(backbone, pc, &outs, &final);
            const int H = pc.truth.rows;
            const int C = pc.truth.cols;
            const double n = static_cast<double>(H) * C;
            for (std::size_t i = 0; i < pc.norm_in.size(); ++i) {
                const int p = pc.periods[i];
                Mat dout(H, C);
                for (int t = 0; t < H; ++t) {
                    const int j = t / p;
                    for (int c = 0; c < C; ++c) {
                        const double e = final(t, c) - pc.truth(t, c);
                        dout(t, c) = weight * (2.0 * e / n) * pc.weights(static_cast<int>(i), c) *
                                     pc.sigma[i](j, c);
                    }
                }
                backbone_backward(backbone, pc.norm_in[i], dout, holder);
            }
        }
        grad = backbone_flatten(holder);
        return loss / static_cast<double>(members.size());
    };
    std::function<double()> eval_val;
    if (!val.empty()) eval_val = [&] { return mean_cached_loss(backbone, va); };

    return drive_epochs(params, train.size(), sched, sched.backbone_lr, batch_grad, eval_val,
                        [&] { backbone_unflatten(backbone, params); }, 0x6261636bu);
}

PretrainResult pretrain_backbone_raw(BackboneParams& backbone,
                                     const std::vector<WindowPair>& train,
                                     const std::vector<WindowPair>& val,
                                     const TrainSchedule& sched) {
    if (train.empty()) throw NoData("pretrain_backbone_raw: empty training set");
    for (const auto& w : train) horizon_of(w);

    std::vector<double> params = backbone_flatten(backbone);
    auto batch_grad = [&](const std::vector<std::size_t>& members, std::vector<double>& grad) {
        BackboneParams holder = zero_like(backbone);
        const double weight = 1.0 / static_cast<double>(members.size());
        double loss = 0.0;
        for (std::size_t w : members) {
            const Mat out = backbone_forward(backbone, train[w].input);
            Mat g;
            double l = 0.0;
            mse_grad(out, horizon_of(train[w]), weight, g, l);
            loss += l;
            backbone_backward(backbone, train[w].input, g, holder);
        }
        grad = backbone_flatten(holder);
        return loss / static_cast<double>(members.size());
    };
    std::function<double()> eval_val;
    if (!val.empty())
        eval_val = [&] {
            std::vector<double> per(val.size());
            parallel_for(val.size(), [&](std::size_t i) {
                const Mat out = backbone_forward(backbone, val[i].input);
                const Mat& y = horizon_of(val[i]);
                double acc = 0.0;
                for (std::size_t j = 0; j < out.data.size(); ++j) {
                    const double e = out.data[j] - y.data[j];
                    acc += e * e;
                }
                per[i] = acc / static_cast<double>(out.data.size());
            });
            double total = 0.0;
            for (double v : per) total += v;
            return total / static_cast<double>(per.size());
        };

    return drive_epochs(params, train.size(), sched, sched.backbone_lr, batch_grad, eval_val,
                        [&] { backbone_unflatten(backbone, params); }, 0x72617720u);
}

const char* variant_label(OnlineVariant v) {
    switch (v) {
        case OnlineVariant::full: return "EvoMSN";
        case OnlineVariant::no_online: return "W/O online";
        case OnlineVariant::freeze_stats: return "W/O stat";
        case OnlineVariant::freeze_backbone: return "W/O backbone";
        case OnlineVariant::vanilla: return "vanilla";
    }
    return "unknown";
}

OnlineLearner::OnlineLearner(Models models, const TrainSchedule& sched, OnlineVariant variant)
    : models_(std::move(models)), variant_(variant) {
    AdamWConfig sc = sched.adamw;
    sc.lr = sched.stats_lr;
    stats_opt_ = make_adamw(bank_flatten(models_.bank).size(), sc);
    AdamWConfig bc = sched.adamw;
    bc.lr = sched.backbone_lr;
    backbone_opt_ = make_adamw(models_.backbone.param_count(), bc);
}

ForecastBundle OnlineLearner::forecast(const Mat& window) const {
    if (variant_ == OnlineVariant::vanilla) {
        ForecastBundle b;
        b.final = backbone_forward(models_.backbone, window);
        return b;
    }
    return msn_forward(models_, window);
}

StepResult OnlineLearner::online_step(const WindowPair& incoming, long step_index) {
    const Mat& truth = horizon_of(incoming);
    if (seen_any_ && incoming.origin <= last_origin_)
        throw OrderViolation("online_step: window at origin " + std::to_string(incoming.origin) +
                             " arrived after origin " + std::to_string(last_origin_));
    seen_any_ = true;
    last_origin_ = incoming.origin;

    StepResult res;
    res.bundle = forecast(incoming.input);

    if (!res.bundle.final.same_shape(truth))
        throw ShapeError("online_step: forecast/truth shapes disagree");
    double se = 0.0, ae = 0.0;
    for (std::size_t i = 0; i < truth.data.size(); ++i) {
        const double e = res.bundle.final.data[i] - truth.data[i];
        se += e * e;
        ae += std::abs(e);
    }
    res.mse = se / static_cast<double>(truth.data.size());
    res.mae = ae / static_cast<double>(truth.data.size());

    switch (variant_) {
        case OnlineVariant::no_online:
            res.updated = "none";
            break;
        case OnlineVariant::full:
            if (step_index % 2 == 0) {
                update_stats(res.bundle, incoming.input, truth);
                res.updated = "stats";
            } else {
                update_backbone(res.bundle, truth);
                res.updated = "backbone";
            }
            break;
        // The freeze variants keep the full method's parity schedule and turn
        // the ablated half into no-ops, so the surviving component updates at
        // the same steps as in the full method.
        case OnlineVariant::freeze_stats:
            if (step_index % 2 == 0) {
                res.updated = "none";
            } else {
                update_backbone(res.bundle, truth);
                res.updated = "backbone";
            }
            break;
        case OnlineVariant::freeze_backbone:
            if (step_index % 2 == 0) {
                update_stats(res.bundle, incoming.input, truth);
                res.updated = "stats";
            } else {
                res.updated = "none";
            }
            break;
        case OnlineVariant::vanilla:
            update_vanilla(res.bundle, incoming.input, truth);
            res.updated = "backbone";
            break;
    }
    return res;
}

void OnlineLearner::update_stats(const ForecastBundle& bundle, const Mat& window,
                                 const Mat& truth) {
    BankGrads g = zero_grads(models_.bank);
    end_to_end_stat_grads(models_, bundle, window, truth, 1.0, g);
    std::vector<double> flat = bank_flatten(models_.bank);
    adamw_step(stats_opt_, flat, grads_flatten(g));
    bank_unflatten(models_.bank, flat);
}

void OnlineLearner::update_backbone(const ForecastBundle& bundle, const Mat& truth) {
    BackboneParams holder = zero_like(models_.backbone);
    end_to_end_backbone_grad(models_, bundle, truth, 1.0, holder);
    std::vector<double> flat = backbone_flatten(models_.backbone);
    adamw_step(backbone_opt_, flat, backbone_flatten(holder));
    backbone_unflatten(models_.backbone, flat);
}

void OnlineLearner::update_vanilla(const ForecastBundle& bundle, const Mat& window,
                                   const Mat& truth) {
    Mat g;
    double loss = 0.0;
    mse_grad(bundle.final, truth, 1.0, g, loss);
    BackboneParams holder = zero_like(models_.backbone);
    backbone_backward(models_.backbone, window, g, holder);
    std::vector<double> flat = backbone_flatten(models_.backbone);
    adamw_step(backbone_opt_, flat, backbone_flatten(holder));
    backbone_unflatten(models_.backbone, flat);
}

OnlineReport run_online(const Models& models, const std::vector<WindowPair>& stream,
                        const TrainSchedule& sched, OnlineVariant variant, std::ostream* log) {
    if (stream.empty()) throw NoData("run_online: empty stream");

    OnlineLearner learner(models, sched, variant);
    OnlineReport report;
    double mse_sum = 0.0, mae_sum = 0.0;
    for (std::size_t n = 0; n < stream.size(); ++n) {
        StepResult res = learner.online_step(stream[n], static_cast<long>(n));
        mse_sum += res.mse;
        mae_sum += res.mae;
        report.step_mse.push_back(res.mse);
        report.step_mae.push_back(res.mae);
        report.cum_mse.push_back(mse_sum / static_cast<double>(n + 1));
        report.cum_mae.push_back(mae_sum / static_cast<double>(n + 1));
        if (log) {
            nlohmann::json rec{{"step", n},
                               {"stage", res.updated},
                               {"loss", res.mse},
                               {"cum_mse", report.cum_mse.back()},
                               {"cum_mae", report.cum_mae.back()}};
            *log << rec.dump() << "\n";
        }
    }
    report.mean_mse = report.cum_mse.back();
    report.mean_mae = report.cum_mae.back();
    report.final_models = learner.models();
    return report;
}

}  // namespace evomsn
