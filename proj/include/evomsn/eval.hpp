#pragma once

#include <string>
#include <utility>
#include <vector>

#include "evomsn/config.hpp"
#include "evomsn/series.hpp"
#include "evomsn/training.hpp"

namespace evomsn {

// Chronological three-way split. Online protocol: 20% warm-up pretraining,
// 75% online stream, trailing 5% validation. Offline protocol: 70% train,
// 10% validation, 20% test. Boundaries at floor(T * fraction).
struct SplitSpec {
    enum class Mode { online, offline };
    Mode mode = Mode::online;
    int lookback = 96;
    int horizon = 24;
};

struct SplitResult {
    MultiSeries first;   // warmup / train
    MultiSeries second;  // online / validation
    MultiSeries third;   // validation / test
    long cut1 = 0;
    long cut2 = 0;
};

SplitResult split(const MultiSeries& series, const SplitSpec& spec);

// Means over all horizon-by-channel elements.
std::pair<double, double> mse_mae(const Mat& pred, const Mat& truth);

std::vector<double> cumulative_average(const std::vector<double>& losses);

// Plot data for window-statistics drift: one table per requested window
// length with per-window mean and mean +/- std columns per channel.
struct StatsTable {
    int window_len = 0;
    std::string tsv;
};
std::vector<StatsTable> stats_dynamics_dump(const MultiSeries& series,
                                            const std::vector<int>& window_lengths);

struct ExperimentReport {
    RunConfig config;
    std::string variant_name;
    std::vector<int> periods_used;
    long steps = 0;
    double mse = 0.0;
    double mae = 0.0;
    std::vector<double> step_mse;
    std::vector<double> cum_mse;
    std::vector<double> step_mae;
    std::vector<double> cum_mae;
    std::vector<EpochLog> stats_history;
    std::vector<EpochLog> backbone_history;
    double runtime_seconds = 0.0;
};

// Full protocol on an already-loaded series: split, pretrain, then either
// the online stream or a frozen test sweep depending on config.mode.
// Training-log records go to `log` when given.
ExperimentReport run_experiment_on(const MultiSeries& series, const RunConfig& config,
                                   std::ostream* log = nullptr);

OnlineVariant variant_from_name(const std::string& name);
BackboneKind backbone_from_name(const std::string& name);
TrainSchedule schedule_from_config(const RunConfig& config);

// Loads config.dataset, runs the experiment, and writes report.json,
// report.tsv, and train_log.jsonl under config.out_dir.
ExperimentReport run_experiment(const RunConfig& config);

// Deterministic serializations; runtime_seconds sits on its own line in the
// JSON so reproducibility checks can ignore it.
std::string report_json(const ExperimentReport& report);
std::string report_tsv(const ExperimentReport& report);
void write_report_files(const ExperimentReport& report, const std::string& out_dir,
                        const std::string& stem);

}  // namespace evomsn
