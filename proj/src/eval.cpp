#include "evomsn/eval.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "evomsn/common.hpp"
#include "evomsn/csv.hpp"
#include "evomsn/slicing.hpp"

namespace evomsn {

namespace {

MultiSeries segment(const MultiSeries& series, long start, long stop) {
    MultiSeries out;
    out.values = row_block(series.values, static_cast<int>(start), static_cast<int>(stop - start));
    out.channel_names = series.channel_names;
    out.step_index_origin = series.step_index_origin + start;
    return out;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

SplitResult split(const MultiSeries& series, const SplitSpec& spec) {
    const long T = series.length();
    const double f1 = spec.mode == SplitSpec::Mode::online ? 0.20 : 0.70;
    const double f2 = spec.mode == SplitSpec::Mode::online ? 0.95 : 0.80;
    const long cut1 = static_cast<long>(std::floor(static_cast<double>(T) * f1));
    const long cut2 = static_cast<long>(std::floor(static_cast<double>(T) * f2));

    const long need = static_cast<long>(spec.lookback) + spec.horizon;
    // The training segment and the evaluated segment carry the protocol and
    // must each hold a window. That is the middle segment online (the stream)
    // but the trailing one offline (the test set); the remaining validation
    // slice may legitimately be too short to window.
    const long evaluated = spec.mode == SplitSpec::Mode::online ? cut2 - cut1 : T - cut2;
    if (cut1 < need || evaluated < need)
        throw SeriesTooShort("split: segments of " + std::to_string(cut1) + " and " +
                             std::to_string(evaluated) + " rows cannot hold a " +
                             std::to_string(need) + "-step window");

    SplitResult out;
    out.cut1 = cut1;
    out.cut2 = cut2;
    out.first = segment(series, 0, cut1);
    out.second = segment(series, cut1, cut2);
    out.third = segment(series, cut2, T);
    return out;
}

std::pair<double, double> mse_mae(const Mat& pred, const Mat& truth) {
    if (!pred.same_shape(truth)) throw ShapeError("mse_mae: shapes disagree");
    double se = 0.0, ae = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        const double e = pred.data[i] - truth.data[i];
        se += e * e;
        ae += std::abs(e);
    }
    const double n = static_cast<double>(pred.data.size());
    return {se / n, ae / n};
}

std::vector<double> cumulative_average(const std::vector<double>& losses) {
    if (losses.empty()) throw NoData("cumulative_average: empty sequence");
    std::vector<double> out(losses.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < losses.size(); ++i) {
        acc += losses[i];
        out[i] = acc / static_cast<double>(i + 1);
    }
    return out;
}

std::vector<StatsTable> stats_dynamics_dump(const MultiSeries& series,
                                            const std::vector<int>& window_lengths) {
    std::vector<StatsTable> tables;
    for (int len : window_lengths) {
        if (len < 1) throw RangeError("stats_dynamics_dump: window length must be >= 1");
        if (len > series.length())
            throw SeriesTooShort("stats_dynamics_dump: window length " + std::to_string(len) +
                                 " exceeds series length " + std::to_string(series.length()));
        const long count = series.length() / len;
        std::ostringstream tsv;
        tsv << "window";
        for (const auto& name : series.channel_names)
            tsv << "\tmean_" << name << "\tlower_" << name << "\tupper_" << name;
        tsv << "\n";
        for (long w = 0; w < count; ++w) {
            const Mat block = row_block(series.values, static_cast<int>(w * len), len);
            const SliceStats stats = compute_slice_stats(pad_and_slice(block, len));
            tsv << w;
            for (int c = 0; c < series.channels(); ++c) {
                const double m = stats.means(0, c);
                const double s = stats.stds(0, c);
                tsv << '\t' << format_g17(m) << '\t' << format_g17(m - s) << '\t'
                    << format_g17(m + s);
            }
            tsv << "\n";
        }
        tables.push_back({len, tsv.str()});
    }
    return tables;
}

OnlineVariant variant_from_name(const std::string& name) {
    if (name == "full") return OnlineVariant::full;
    if (name == "no_online") return OnlineVariant::no_online;
    if (name == "freeze_stats") return OnlineVariant::freeze_stats;
    if (name == "freeze_backbone") return OnlineVariant::freeze_backbone;
    if (name == "vanilla") return OnlineVariant::vanilla;
    throw RangeError("unknown variant '" + name + "'");
}

BackboneKind backbone_from_name(const std::string& name) {
    if (name == "linear") return BackboneKind::linear;
    if (name == "dlinear") return BackboneKind::dlinear;
    throw RangeError("unknown backbone '" + name + "'");
}

TrainSchedule schedule_from_config(const RunConfig& config) {
    TrainSchedule sched;
    sched.epochs = config.epochs;
    sched.batch_size = config.batch;
    sched.stats_lr = config.stats_lr;
    sched.backbone_lr = config.backbone_lr;
    sched.patience = config.patience;
    sched.seed = config.seed;
    sched.adamw.weight_decay = config.weight_decay;
    return sched;
}

namespace {

std::vector<WindowPair> windows_or_empty(const MultiSeries& series, int L, int H) {
    if (series.length() < static_cast<long>(L) + H) return {};
    return make_windows(series, L, H, 1);
}

std::vector<Mat> inputs_of(const std::vector<WindowPair>& windows) {
    std::vector<Mat> out;
    out.reserve(windows.size());
    for (const auto& w : windows) out.push_back(w.input);
    return out;
}

}  // namespace

ExperimentReport run_experiment_on(const MultiSeries& series, const RunConfig& config,
                                   std::ostream* log) {
    validate_config(config);
    const auto start_time = std::chrono::steady_clock::now();

    ExperimentReport report;
    report.config = config;

    const OnlineVariant variant = variant_from_name(config.variant);
    const BackboneKind kind = backbone_from_name(config.backbone);
    const TrainSchedule sched = schedule_from_config(config);
    report.variant_name = variant_label(variant);

    SplitSpec spec;
    spec.mode = config.mode == "online" ? SplitSpec::Mode::online : SplitSpec::Mode::offline;
    spec.lookback = config.lookback;
    spec.horizon = config.horizon;
    const SplitResult parts = split(series, spec);

    // Online runs validate on the tail behind the stream; offline runs keep
    // the middle slice for validation and sweep the tail as the test set.
    const bool online_mode = spec.mode == SplitSpec::Mode::online;
    const auto pretrain_windows = make_windows(parts.first, config.lookback, config.horizon, 1);
    const auto val_windows = windows_or_empty(online_mode ? parts.third : parts.second,
                                              config.lookback, config.horizon);

    Models models;
    models.eps = config.eps;
    if (variant == OnlineVariant::vanilla) {
        models.backbone =
            make_backbone(kind, config.lookback, config.horizon, mix_seed(config.seed, 2),
                          config.ma_kernel);
        report.backbone_history =
            pretrain_backbone_raw(models.backbone, pretrain_windows, val_windows, sched).history;
    } else {
        models.periods = extract_global_periods(inputs_of(pretrain_windows), config.scales);
        models.bank = make_stat_bank(models.periods, config.lookback, config.horizon,
                                     mix_seed(config.seed, 1));
        report.stats_history =
            pretrain_stats(models.bank, pretrain_windows, val_windows, sched).history;
        models.backbone =
            make_backbone(kind, config.lookback, config.horizon, mix_seed(config.seed, 2),
                          config.ma_kernel);
        report.backbone_history =
            pretrain_backbone(models.backbone, models.bank, models.periods, models.eps,
                              pretrain_windows, val_windows, sched)
                .history;
        report.periods_used = models.periods.periods;
    }

    if (online_mode) {
        const auto stream = make_windows(parts.second, config.lookback, config.horizon, 1);
        const OnlineReport online = run_online(models, stream, sched, variant, log);
        report.steps = static_cast<long>(online.step_mse.size());
        report.mse = online.mean_mse;
        report.mae = online.mean_mae;
        report.step_mse = online.step_mse;
        report.step_mae = online.step_mae;
        report.cum_mse = online.cum_mse;
        report.cum_mae = online.cum_mae;
    } else {
        // Frozen sweep over the test segment: forecasts only, no updates.
        const auto tests = make_windows(parts.third, config.lookback, config.horizon, 1);
        double mse_sum = 0.0, mae_sum = 0.0;
        for (std::size_t n = 0; n < tests.size(); ++n) {
            const Mat forecast = variant == OnlineVariant::vanilla
                                     ? backbone_forward(models.backbone, tests[n].input)
                                     : msn_forward(models, tests[n].input).final;
            if (!tests[n].horizon) throw NoData("test window is missing its horizon");
            const auto [m, a] = mse_mae(forecast, *tests[n].horizon);
            mse_sum += m;
            mae_sum += a;
            report.step_mse.push_back(m);
            report.step_mae.push_back(a);
            report.cum_mse.push_back(mse_sum / static_cast<double>(n + 1));
            report.cum_mae.push_back(mae_sum / static_cast<double>(n + 1));
            if (log) {
                nlohmann::json rec{{"step", n},
                                   {"stage", "none"},
                                   {"loss", m},
                                   {"cum_mse", report.cum_mse.back()},
                                   {"cum_mae", report.cum_mae.back()}};
                *log << rec.dump() << "\n";
            }
        }
        report.steps = static_cast<long>(tests.size());
        report.mse = report.steps ? report.cum_mse.back() : 0.0;
        report.mae = report.steps ? report.cum_mae.back() : 0.0;
    }

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return report;
}

ExperimentReport run_experiment(const RunConfig& config) {
    RunConfig cfg = config;
    if (const char* env = std::getenv("EVOMSN_OUT_DIR"); env && *env) cfg.out_dir = env;
    validate_config(cfg);
    if (cfg.dataset.empty()) throw RangeError("config key 'dataset' is required");

    CsvOptions opts;
    opts.channels = cfg.channels;
    const MultiSeries series = load_csv(cfg.dataset, opts);

    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream log(cfg.out_dir + "/train_log.jsonl");
    if (!log) throw IoError("cannot open " + cfg.out_dir + "/train_log.jsonl");

    ExperimentReport report = run_experiment_on(series, cfg, &log);
    write_report_files(report, cfg.out_dir, "report");
    return report;
}

std::string report_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["variant"] = report.variant_name;
    j["periods"] = report.periods_used;
    j["steps"] = report.steps;
    j["metrics"] = {{"mse", report.mse},
                    {"mae", report.mae},
                    {"final_cum_mse", report.steps ? report.cum_mse.back() : 0.0},
                    {"final_cum_mae", report.steps ? report.cum_mae.back() : 0.0}};
    j["pretrain"] = {
        {"stats_epochs", report.stats_history.size()},
        {"backbone_epochs", report.backbone_history.size()},
        {"stats_final_val",
         report.stats_history.empty() ? 0.0 : report.stats_history.back().val_loss},
        {"backbone_final_val",
         report.backbone_history.empty() ? 0.0 : report.backbone_history.back().val_loss}};
    const RunConfig& c = report.config;
    j["config"] = {{"dataset", c.dataset},
                   {"channels", c.channels},
                   {"lookback", c.lookback},
                   {"horizon", c.horizon},
                   {"scales", c.scales},
                   {"eps", c.eps},
                   {"mode", c.mode},
                   {"variant", c.variant},
                   {"backbone", c.backbone},
                   {"ma_kernel", c.ma_kernel},
                   {"epochs", c.epochs},
                   {"batch", c.batch},
                   {"patience", c.patience},
                   {"stats_lr", c.stats_lr},
                   {"backbone_lr", c.backbone_lr},
                   {"weight_decay", c.weight_decay},
                   {"seed", c.seed},
                   {"out_dir", c.out_dir}};
    j["runtime_seconds"] = report.runtime_seconds;
    return j.dump(2) + "\n";
}

std::string report_tsv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "step\tmse\tcum_mse\n";
    for (std::size_t i = 0; i < report.step_mse.size(); ++i)
        out << i << '\t' << format_g17(report.step_mse[i]) << '\t'
            << format_g17(report.cum_mse[i]) << "\n";
    return out.str();
}

void write_report_files(const ExperimentReport& report, const std::string& out_dir,
                        const std::string& stem) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream js(out_dir + "/" + stem + ".json");
        if (!js) throw IoError("cannot open " + out_dir + "/" + stem + ".json");
        js << report_json(report);
    }
    {
        std::ofstream ts(out_dir + "/" + stem + ".tsv");
        if (!ts) throw IoError("cannot open " + out_dir + "/" + stem + ".tsv");
        ts << report_tsv(report);
    }
}

}  // namespace evomsn
