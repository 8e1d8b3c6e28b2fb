#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace evomsn {

// Everything one experiment needs, with the documented defaults baked in.
struct RunConfig {
    std::string dataset;
    std::vector<std::string> channels;  // empty keeps every channel
    int lookback = 96;
    int horizon = 24;
    int scales = 4;
    double eps = 1e-5;
    std::string mode = "online";        // online | offline
    std::string variant = "full";       // full | no_online | freeze_stats | freeze_backbone | vanilla
    std::string backbone = "dlinear";   // linear | dlinear
    int ma_kernel = 25;
    int epochs = 100;
    int batch = 32;
    int patience = 5;
    double stats_lr = 1e-3;
    double backbone_lr = 1e-3;
    double weight_decay = 1e-2;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
};

// Applies one key=value assignment. Unrecognized keys raise UnknownKey;
// unparsable or out-of-range values raise RangeError naming the key.
void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Flat `key = value` text, one per line, `#` comments. Values land on top of
// `base` so flags can be layered afterwards.
RunConfig parse_config_text(const std::string& text, const RunConfig& base = {});
RunConfig parse_config_file(const std::string& path, const RunConfig& base = {});

// Cross-field checks; throws RangeError naming the offending key.
void validate_config(const RunConfig& cfg);

}  // namespace evomsn
