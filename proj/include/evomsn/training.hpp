#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "evomsn/optimizer.hpp"
#include "evomsn/pipeline.hpp"
#include "evomsn/series.hpp"

namespace evomsn {

struct TrainSchedule {
    int epochs = 100;
    int batch_size = 32;
    double stats_lr = 1e-3;
    double backbone_lr = 1e-3;
    int patience = 5;
    std::uint64_t seed = 1;
    AdamWConfig adamw;  // lr is replaced per component; the rest applies as-is
};

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
};

struct PretrainResult {
    std::vector<EpochLog> history;
    int best_epoch = 0;
    double best_val = 0.0;
};

// Stage one of offline pretraining: fit every scale's statistic forecasters
// to the true horizon slice statistics. Early-stops on validation loss
// (training loss when no validation windows are given) and restores the best
// parameters seen.
PretrainResult pretrain_stats(StatPredictorBank& bank, const std::vector<WindowPair>& train,
                              const std::vector<WindowPair>& val, const TrainSchedule& sched);

// Stage two: fit the backbone end to end through the frozen normalization
// and statistic predictors.
PretrainResult pretrain_backbone(BackboneParams& backbone, const StatPredictorBank& bank,
                                 const PeriodSet& periods, double eps,
                                 const std::vector<WindowPair>& train,
                                 const std::vector<WindowPair>& val, const TrainSchedule& sched);

// Plain supervised fit of the backbone on raw windows; the baseline path
// with no normalization in front.
PretrainResult pretrain_backbone_raw(BackboneParams& backbone,
                                     const std::vector<WindowPair>& train,
                                     const std::vector<WindowPair>& val,
                                     const TrainSchedule& sched);

enum class OnlineVariant { full, no_online, freeze_stats, freeze_backbone, vanilla };

const char* variant_label(OnlineVariant v);

struct StepResult {
    ForecastBundle bundle;  // vanilla populates only `final`
    double mse = 0.0;
    double mae = 0.0;
    const char* updated = "none";  // "stats", "backbone", or "none"
};

// Prequential online learner: each step forecasts first, scores against the
// arriving truth, then updates exactly one component. The full variant
// alternates stats (even step index) and backbone (odd); freeze variants
// update their live component every step; no_online never updates.
class OnlineLearner {
public:
    OnlineLearner(Models models, const TrainSchedule& sched, OnlineVariant variant);

    ForecastBundle forecast(const Mat& window) const;
    StepResult online_step(const WindowPair& incoming, long step_index);

    const Models& models() const { return models_; }
    OnlineVariant variant() const { return variant_; }

private:
    void update_stats(const ForecastBundle& bundle, const Mat& window, const Mat& truth);
    void update_backbone(const ForecastBundle& bundle, const Mat& truth);
    void update_vanilla(const ForecastBundle& bundle, const Mat& window, const Mat& truth);

    Models models_;
    OnlineVariant variant_;
    AdamWState stats_opt_;
    AdamWState backbone_opt_;
    bool seen_any_ = false;
    long last_origin_ = 0;
};

struct OnlineReport {
    std::vector<double> step_mse;
    std::vector<double> step_mae;
    std::vector<double> cum_mse;
    std::vector<double> cum_mae;
    double mean_mse = 0.0;
    double mean_mae = 0.0;
    Models final_models;
};

// Runs the learner over a chronological stream. When `log` is given, one
// JSON record {step, stage, loss, cum_mse, cum_mae} is written per line.
OnlineReport run_online(const Models& models, const std::vector<WindowPair>& stream,
                        const TrainSchedule& sched, OnlineVariant variant,
                        std::ostream* log = nullptr);

}  // namespace evomsn
