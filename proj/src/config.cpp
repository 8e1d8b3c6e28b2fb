#include "evomsn/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "evomsn/common.hpp"

namespace evomsn {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

long long parse_int(const std::string& key, const std::string& value) {
    long long out = 0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end)
        throw RangeError("config key '" + key + "': expected an integer, got '" + value + "'");
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end)
        throw RangeError("config key '" + key + "': expected a number, got '" + value + "'");
    return out;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void require_one_of(const std::string& key, const std::string& value,
                    std::initializer_list<const char*> allowed) {
    for (const char* a : allowed)
        if (value == a) return;
    std::string msg = "config key '" + key + "': '" + value + "' is not one of {";
    bool first = true;
    for (const char* a : allowed) {
        if (!first) msg += ", ";
        msg += a;
        first = false;
    }
    throw RangeError(msg + "}");
}

}  // namespace

void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "dataset") cfg.dataset = value;
    else if (key == "channels") cfg.channels = split_list(value);
    else if (key == "lookback") cfg.lookback = static_cast<int>(parse_int(key, value));
    else if (key == "horizon") cfg.horizon = static_cast<int>(parse_int(key, value));
    else if (key == "scales") cfg.scales = static_cast<int>(parse_int(key, value));
    else if (key == "eps") cfg.eps = parse_double(key, value);
    else if (key == "mode") cfg.mode = value;
    else if (key == "variant") cfg.variant = value;
    else if (key == "backbone") cfg.backbone = value;
    else if (key == "ma_kernel") cfg.ma_kernel = static_cast<int>(parse_int(key, value));
    else if (key == "epochs") cfg.epochs = static_cast<int>(parse_int(key, value));
    else if (key == "batch") cfg.batch = static_cast<int>(parse_int(key, value));
    else if (key == "patience") cfg.patience = static_cast<int>(parse_int(key, value));
    else if (key == "stats_lr") cfg.stats_lr = parse_double(key, value);
    else if (key == "backbone_lr") cfg.backbone_lr = parse_double(key, value);
    else if (key == "weight_decay") cfg.weight_decay = parse_double(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "out_dir") cfg.out_dir = value;
    else throw UnknownKey("config key '" + key + "' is not recognized");
}

RunConfig parse_config_text(const std::string& text, const RunConfig& base) {
    RunConfig cfg = base;
    std::stringstream ss(text);
    std::string line;
    long line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw RangeError("config line " + std::to_string(line_no) +
                             ": expected 'key = value', got '" + line + "'");
        apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path, const RunConfig& base) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("config file not found: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), base);
}

void validate_config(const RunConfig& cfg) {
    if (cfg.lookback < 1) throw RangeError("config key 'lookback' must be >= 1");
    if (cfg.horizon < 1) throw RangeError("config key 'horizon' must be >= 1");
    if (cfg.scales < 1) throw RangeError("config key 'scales' must be >= 1");
    if (!(cfg.eps > 0.0)) throw RangeError("config key 'eps' must be positive");
    require_one_of("mode", cfg.mode, {"online", "offline"});
    require_one_of("variant", cfg.variant,
                   {"full", "no_online", "freeze_stats", "freeze_backbone", "vanilla"});
    require_one_of("backbone", cfg.backbone, {"linear", "dlinear"});
    if (cfg.ma_kernel < 1 || cfg.ma_kernel % 2 == 0)
        throw RangeError("config key 'ma_kernel' must be odd and >= 1");
    if (cfg.epochs < 0) throw RangeError("config key 'epochs' must be >= 0");
    if (cfg.batch < 1) throw RangeError("config key 'batch' must be >= 1");
    if (cfg.patience < 0) throw RangeError("config key 'patience' must be >= 0");
    if (cfg.stats_lr < 0.0) throw RangeError("config key 'stats_lr' must be >= 0");
    if (cfg.backbone_lr < 0.0) throw RangeError("config key 'backbone_lr' must be >= 0");
    if (cfg.weight_decay < 0.0) throw RangeError("config key 'weight_decay' must be >= 0");
}

}  // namespace evomsn
