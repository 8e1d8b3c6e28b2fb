#pragma once

#include <cstdint>
#include <vector>

#include "evomsn/mlp.hpp"
#include "evomsn/spectral.hpp"

namespace evomsn {

// One pair of statistic forecasters for a single scale. Weights are shared
// across channels; in_slices/out_slices are the padded slice counts of the
// look-back and horizon at this scale's period.
struct ScalePredictor {
    MlpParams mean_model;
    MlpParams std_model;
    int period = 0;
    int in_slices = 0;
    int out_slices = 0;
};

struct StatPredictorBank {
    std::vector<ScalePredictor> scales;
    int lookback = 0;
    int horizon = 0;

    int size() const { return static_cast<int>(scales.size()); }
};

// Gradient holder mirroring a bank's parameter shapes.
struct BankGrads {
    std::vector<MlpParams> mean_grads;
    std::vector<MlpParams> std_grads;
};

BankGrads zero_grads(const StatPredictorBank& bank);

// Builds one predictor pair per scale in `periods`. Input dimension is the
// slice count plus one window-summary slot; hidden width grows with it.
StatPredictorBank make_stat_bank(const PeriodSet& periods, int lookback, int horizon,
                                 std::uint64_t seed);

// Feature vectors fed to the models for one channel: the channel's slice
// statistics followed by a window-level summary (mean for the mean model,
// population std for the std model).
std::vector<double> mean_features(const Mat& input_means, const Mat& window, int channel);
std::vector<double> std_features(const Mat& input_stds, const Mat& window, int channel);

Mat predict_means(const StatPredictorBank& bank, int scale_index, const Mat& input_means,
                  const Mat& window);
Mat predict_stds(const StatPredictorBank& bank, int scale_index, const Mat& input_stds,
                 const Mat& window);

// Mean squared error pooled over both statistics, all slices, all channels.
double stat_loss(const Mat& pred_means, const Mat& pred_stds, const Mat& true_means,
                 const Mat& true_stds);

// Returns the window's stat_loss and accumulates `weight` times its gradient
// into the per-scale holders. Used by pretraining with weight = 1/batch.
double stat_loss_grad(const ScalePredictor& sp, const Mat& input_means, const Mat& input_stds,
                      const Mat& window, const Mat& true_means, const Mat& true_stds,
                      double weight, MlpParams& mean_grad, MlpParams& std_grad);

std::vector<double> bank_flatten(const StatPredictorBank& bank);
void bank_unflatten(StatPredictorBank& bank, const std::vector<double>& flat);

// Same flat layout as bank_flatten, so optimizer steps can pair them.
std::vector<double> grads_flatten(const BankGrads& grads);

}  // namespace evomsn
