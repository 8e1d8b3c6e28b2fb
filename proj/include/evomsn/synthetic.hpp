#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "evomsn/series.hpp"

namespace evomsn {

// Benchmark stream: a sum of sinusoids with per-channel phase offsets,
// step-function mean shifts, and Gaussian noise whose scale ramps linearly
// from noise_std_start to noise_std_end over the stream. The noise can also
// carry first-order autocorrelation whose coefficient ramps from ar_start to
// ar_end, which slowly changes how much of the noise is predictable from the
// recent past; zero keeps the noise independent across steps.
struct SyntheticSpec {
    long length = 4000;
    int channels = 1;
    std::vector<double> periods{24.0, 12.0};
    std::vector<double> amplitudes{2.0, 1.0};
    std::vector<std::pair<long, double>> level_shifts;  // (first step, added offset)
    double base_level = 0.0;
    double noise_std_start = 0.1;
    double noise_std_end = 0.5;
    double ar_start = 0.0;  // noise autocorrelation at the first step, in (-1, 1)
    double ar_end = 0.0;    // and at the last step; ramps linearly between them
    std::uint64_t seed = 1;
};

MultiSeries generate_stream(const SyntheticSpec& spec);

}  // namespace evomsn
