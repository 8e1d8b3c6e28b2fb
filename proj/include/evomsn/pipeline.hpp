#pragma once

#include <vector>

#include "evomsn/backbone.hpp"
#include "evomsn/slicing.hpp"
#include "evomsn/spectral.hpp"
#include "evomsn/stat_predictor.hpp"

namespace evomsn {

// A window standardized independently at every scale, with the slice
// statistics that did it (needed both to predict future statistics and to
// audit the affine round trip).
struct NormalizedSet {
    std::vector<Mat> normalized;     // k windows, each L x C
    std::vector<SliceStats> stats;   // per scale, padded input slice counts
    std::vector<int> periods;        // slice length per scale
    double eps = 0.0;
};

// Everything one forward pass produces. Intermediate artifacts are kept so
// gradient passes and diagnostics can replay the computation.
struct ForecastBundle {
    NormalizedSet inputs;
    std::vector<Mat> pred_means;          // per scale, horizon slice counts x C
    std::vector<Mat> pred_stds;
    std::vector<Mat> normalized_outputs;  // per scale, H x C (backbone output)
    std::vector<Mat> per_scale;           // per scale, H x C (denormalized)
    Mat local_amps;                       // k x C
    Mat weights;                          // k x C, per-channel simplex
    Mat final;                            // H x C
};

// The complete trainable state plus the frozen analysis artifacts.
struct Models {
    StatPredictorBank bank;
    BackboneParams backbone;
    PeriodSet periods;
    double eps = 1e-5;
};

NormalizedSet normalize(const Mat& window, const PeriodSet& periods, double eps);

// Affine recovery of per-scale normalized horizons using predicted slice
// statistics; rows past the horizon would land in padding and are skipped.
std::vector<Mat> denormalize(const std::vector<Mat>& outputs, const std::vector<Mat>& pred_means,
                             const std::vector<Mat>& pred_stds, const PeriodSet& periods,
                             double eps, int horizon);

// Amplitude-proportional per-channel weights over the k scales and the
// weighted sum of forecasts. Channels with no amplitude fall back to 1/k.
struct EnsembleResult {
    Mat weights;  // k x C
    Mat final;    // H x C
};
// Per-channel simplex weights from an amplitude matrix alone.
Mat amplitude_weights(const Mat& local_amps);

EnsembleResult ensemble(const std::vector<Mat>& per_scale, const Mat& local_amps);
EnsembleResult ensemble(const std::vector<Mat>& per_scale, const Mat& window,
                        const PeriodSet& periods);

ForecastBundle msn_forward(const Models& models, const Mat& window);

// Gradient of the end-to-end MSE with respect to the statistic predictors,
// holding the backbone, normalization statistics, and ensemble weights
// fixed. Accumulates `weight` times the gradient; returns the loss.
double end_to_end_stat_grads(const Models& models, const ForecastBundle& bundle,
                             const Mat& window, const Mat& truth, double weight,
                             BankGrads& grads);

// Same loss, gradient with respect to the backbone; statistics and weights
// are constants here.
double end_to_end_backbone_grad(const Models& models, const ForecastBundle& bundle,
                                const Mat& truth, double weight, BackboneParams& grad);

}  // namespace evomsn
