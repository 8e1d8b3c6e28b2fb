#pragma once

#include <string>

#include "evomsn/pipeline.hpp"

namespace evomsn {

// Checkpoints are a raw little-endian float64 stream (`<base>.bin`, bank
// parameters then backbone parameters in flat order) plus a JSON sidecar
// (`<base>.json`) describing shapes and the scale layout.
void save_checkpoint(const std::string& path_base, const Models& models);
Models load_checkpoint(const std::string& path_base);

}  // namespace evomsn
