#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evomsn/common.hpp"
#include "evomsn/csv.hpp"
#include "evomsn/eval.hpp"
#include "evomsn/synthetic.hpp"

namespace {

using evomsn::RunConfig;

std::vector<int> parse_int_list(const std::string& text, const char* what) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw evomsn::RangeError(std::string(what) + ": '" + item + "' is not an integer");
        }
    }
    if (out.empty()) throw evomsn::RangeError(std::string(what) + ": empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw evomsn::RangeError(std::string(what) + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw evomsn::RangeError(std::string(what) + ": empty list");
    return out;
}

// Registers one --flag per config key on `app`; returns the storage that
// remembers which flags the user actually set, so file values lose to them.
struct ConfigFlags {
    std::map<std::string, std::string> values;  // config key -> raw value
    std::map<std::string, CLI::Option*> options;

    void attach(CLI::App& app) {
        static const std::pair<const char*, const char*> keys[] = {
            {"dataset", "--dataset"},         {"channels", "--channels"},
            {"lookback", "--lookback"},       {"horizon", "--horizon"},
            {"scales", "--scales"},           {"eps", "--eps"},
            {"mode", "--mode"},               {"variant", "--variant"},
            {"backbone", "--backbone"},       {"ma_kernel", "--ma-kernel"},
            {"epochs", "--epochs"},           {"batch", "--batch"},
            {"patience", "--patience"},       {"stats_lr", "--stats-lr"},
            {"backbone_lr", "--backbone-lr"}, {"weight_decay", "--weight-decay"},
            {"seed", "--seed"},               {"out_dir", "--out-dir"},
        };
        for (const auto& [key, flag] : keys)
            options[key] = app.add_option(flag, values[key], std::string("config key ") + key);
    }

    void apply(RunConfig& cfg) const {
        for (const auto& [key, opt] : options)
            if (opt->count() > 0) evomsn::apply_config_key(cfg, key, values.at(key));
    }
};

RunConfig build_config(const std::string& config_path, const ConfigFlags& flags) {
    RunConfig cfg;
    if (!config_path.empty()) cfg = evomsn::parse_config_file(config_path, cfg);
    flags.apply(cfg);
    evomsn::validate_config(cfg);
    return cfg;
}

int cmd_run(const std::string& config_path, const ConfigFlags& flags) {
    const RunConfig cfg = build_config(config_path, flags);
    const auto report = evomsn::run_experiment(cfg);
    std::cout << "variant " << report.variant_name << ", steps " << report.steps << ", mse "
              << report.mse << ", mae " << report.mae << "\n";
    return 0;
}

int cmd_sweep(const std::string& config_path, const ConfigFlags& flags,
              const std::string& scale_grid, const std::string& horizon_grid) {
    RunConfig base = build_config(config_path, flags);
    if (const char* env = std::getenv("EVOMSN_OUT_DIR"); env && *env) base.out_dir = env;
    if (base.dataset.empty()) throw evomsn::RangeError("config key 'dataset' is required");

    const std::vector<int> scales =
        scale_grid.empty() ? std::vector<int>{base.scales} : parse_int_list(scale_grid, "--scale-grid");
    const std::vector<int> horizons = horizon_grid.empty()
                                          ? std::vector<int>{base.horizon}
                                          : parse_int_list(horizon_grid, "--horizon-grid");

    evomsn::CsvOptions opts;
    opts.channels = base.channels;
    const evomsn::MultiSeries series = evomsn::load_csv(base.dataset, opts);

    std::filesystem::create_directories(base.out_dir);
    for (int k : scales) {
        for (int h : horizons) {
            RunConfig cfg = base;
            cfg.scales = k;
            cfg.horizon = h;
            evomsn::validate_config(cfg);
            const std::string stem =
                "report_k" + std::to_string(k) + "_h" + std::to_string(h);
            std::ofstream log(base.out_dir + "/train_log_k" + std::to_string(k) + "_h" +
                              std::to_string(h) + ".jsonl");
            const auto report = evomsn::run_experiment_on(series, cfg, &log);
            evomsn::write_report_files(report, base.out_dir, stem);
            std::cout << stem << ": mse " << report.mse << ", mae " << report.mae << "\n";
        }
    }
    return 0;
}

int cmd_dump_stats(const std::string& dataset, const std::string& lengths_text,
                   std::string out_dir, const std::string& channels) {
    if (const char* env = std::getenv("EVOMSN_OUT_DIR"); env && *env) out_dir = env;
    evomsn::CsvOptions opts;
    if (!channels.empty()) {
        std::stringstream ss(channels);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) opts.channels.push_back(item);
    }
    const auto series = evomsn::load_csv(dataset, opts);
    const auto lengths = parse_int_list(lengths_text, "--window-lengths");
    const auto tables = evomsn::stats_dynamics_dump(series, lengths);
    std::filesystem::create_directories(out_dir);
    for (const auto& table : tables) {
        const std::string path = out_dir + "/stats_w" + std::to_string(table.window_len) + ".tsv";
        std::ofstream out(path);
        if (!out) throw evomsn::IoError("cannot open " + path);
        out << table.tsv;
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

int cmd_inspect_periods(const std::string& dataset, int lookback, int scales,
                        const std::string& channels) {
    evomsn::CsvOptions opts;
    if (!channels.empty()) {
        std::stringstream ss(channels);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) opts.channels.push_back(item);
    }
    const auto series = evomsn::load_csv(dataset, opts);
    if (series.length() < lookback)
        throw evomsn::SeriesTooShort("series shorter than the analysis window");
    // Non-overlapping windows keep this snappy on long files.
    std::vector<evomsn::Mat> windows;
    for (long start = 0; start + lookback <= series.length(); start += lookback)
        windows.push_back(row_block(series.values, static_cast<int>(start), lookback));
    const auto periods = evomsn::extract_global_periods(windows, scales);
    std::printf("rank\tfrequency\tperiod\tmean_amplitude\n");
    for (int i = 0; i < periods.size(); ++i)
        std::printf("%d\t%d\t%d\t%.6g\n", i + 1, periods.frequencies[static_cast<std::size_t>(i)],
                    periods.periods[static_cast<std::size_t>(i)],
                    periods.mean_amplitudes[static_cast<std::size_t>(i)]);
    return 0;
}

int cmd_gen(const std::string& out_path, long length, int channels, const std::string& periods,
            const std::string& amplitudes, const std::string& shifts, double noise_start,
            double noise_end, double ar_start, double ar_end, double base_level,
            std::uint64_t seed) {
    evomsn::SyntheticSpec spec;
    spec.length = length;
    spec.channels = channels;
    spec.periods = parse_double_list(periods, "--periods");
    spec.amplitudes = parse_double_list(amplitudes, "--amplitudes");
    spec.noise_std_start = noise_start;
    spec.noise_std_end = noise_end;
    spec.ar_start = ar_start;
    spec.ar_end = ar_end;
    spec.base_level = base_level;
    spec.seed = seed;
    spec.level_shifts.clear();
    if (!shifts.empty()) {
        std::stringstream ss(shifts);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw evomsn::RangeError("--shifts entries look like STEP:DELTA, got '" + item + "'");
            try {
                spec.level_shifts.emplace_back(std::stol(item.substr(0, colon)),
                                               std::stod(item.substr(colon + 1)));
            } catch (const std::exception&) {
                throw evomsn::RangeError("--shifts: cannot parse '" + item + "'");
            }
        }
    }
    const auto series = evomsn::generate_stream(spec);
    evomsn::write_csv(out_path, series);
    std::cout << "wrote " << out_path << " (" << series.length() << " rows, "
              << series.channels() << " channels)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EvoMSN: evolving multi-scale normalization for online forecasting"};
    app.require_subcommand(1);

    std::string run_config;
    ConfigFlags run_flags;
    auto* run = app.add_subcommand("run", "run one experiment and write its report");
    run->add_option("--config", run_config, "key = value config file");
    run_flags.attach(*run);

    std::string sweep_config, scale_grid, horizon_grid;
    ConfigFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "run a grid over scale counts and horizons");
    sweep->add_option("--config", sweep_config, "key = value config file");
    sweep->add_option("--scale-grid", scale_grid, "comma-separated scale counts, e.g. 1,2,3,4");
    sweep->add_option("--horizon-grid", horizon_grid, "comma-separated horizons, e.g. 24,48");
    sweep_flags.attach(*sweep);

    std::string ds_dataset, ds_lengths = "96,48,24", ds_out = "out", ds_channels;
    auto* dump = app.add_subcommand("dump-stats", "emit per-window statistics tables");
    dump->add_option("--dataset", ds_dataset, "CSV file")->required();
    dump->add_option("--window-lengths", ds_lengths, "comma-separated window lengths");
    dump->add_option("--out-dir", ds_out, "output directory");
    dump->add_option("--channels", ds_channels, "comma-separated channel names to keep");

    std::string ip_dataset, ip_channels;
    int ip_lookback = 96, ip_scales = 4;
    auto* inspect = app.add_subcommand("inspect-periods", "print the dominant periods of a dataset");
    inspect->add_option("--dataset", ip_dataset, "CSV file")->required();
    inspect->add_option("--lookback", ip_lookback, "analysis window length");
    inspect->add_option("--scales", ip_scales, "how many periods to report");
    inspect->add_option("--channels", ip_channels, "comma-separated channel names to keep");

    std::string gen_out, gen_periods = "24,12", gen_amplitudes = "2,1", gen_shifts;
    long gen_length = 4000;
    int gen_channels = 1;
    double gen_noise_start = 0.1, gen_noise_end = 0.5, gen_base = 0.0;
    double gen_ar_start = 0.0, gen_ar_end = 0.0;
    std::uint64_t gen_seed = 1;
    auto* gen = app.add_subcommand("gen", "generate a synthetic benchmark stream as CSV");
    gen->add_option("--out", gen_out, "output CSV path")->required();
    gen->add_option("--length", gen_length, "number of steps");
    gen->add_option("--channels", gen_channels, "channel count");
    gen->add_option("--periods", gen_periods, "comma-separated seasonal periods");
    gen->add_option("--amplitudes", gen_amplitudes, "comma-separated seasonal amplitudes");
    gen->add_option("--shifts", gen_shifts, "level shifts as STEP:DELTA,STEP:DELTA");
    gen->add_option("--noise-start", gen_noise_start, "noise std at the first step");
    gen->add_option("--noise-end", gen_noise_end, "noise std at the last step");
    gen->add_option("--ar-start", gen_ar_start, "noise autocorrelation at the first step");
    gen->add_option("--ar-end", gen_ar_end, "noise autocorrelation at the last step");
    gen->add_option("--base", gen_base, "constant base level");
    gen->add_option("--seed", gen_seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_config, run_flags);
        if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_flags, scale_grid, horizon_grid);
        if (dump->parsed()) return cmd_dump_stats(ds_dataset, ds_lengths, ds_out, ds_channels);
        if (inspect->parsed())
            return cmd_inspect_periods(ip_dataset, ip_lookback, ip_scales, ip_channels);
        if (gen->parsed())
            return cmd_gen(gen_out, gen_length, gen_channels, gen_periods, gen_amplitudes,
                           gen_shifts, gen_noise_start, gen_noise_end, gen_ar_start, gen_ar_end,
                           gen_base, gen_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
