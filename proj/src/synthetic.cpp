#include "evomsn/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "evomsn/common.hpp"

namespace evomsn {

namespace {

// Box-Muller from the repository's own uniform, so draw counts and values
// are pinned by the seed alone.
double gaussian(std::mt19937_64& rng) {
    double u1 = uniform(rng, 0.0, 1.0);
    const double u2 = uniform(rng, 0.0, 1.0);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

MultiSeries generate_stream(const SyntheticSpec& spec) {
    if (spec.length < 1) throw RangeError("generate_stream: length must be >= 1");
    if (spec.channels < 1) throw RangeError("generate_stream: channels must be >= 1");
    if (spec.periods.size() != spec.amplitudes.size())
        throw LengthMismatch("generate_stream: periods and amplitudes differ in count");
    for (double p : spec.periods)
        if (p <= 0.0) throw InvalidPeriod("generate_stream: periods must be positive");
    if (std::abs(spec.ar_start) >= 1.0 || std::abs(spec.ar_end) >= 1.0)
        throw RangeError("generate_stream: noise autocorrelation must stay inside (-1, 1)");

    std::mt19937_64 rng(mix_seed(spec.seed, 0x73796e74));

    // Fixed per-channel phase offsets keep channels correlated but distinct.
    std::vector<double> phases(spec.periods.size() * static_cast<std::size_t>(spec.channels));
    for (auto& ph : phases) ph = uniform(rng, 0.0, 2.0 * std::numbers::pi);

    MultiSeries out;
    out.values = Mat(static_cast<int>(spec.length), spec.channels);
    out.channel_names.reserve(static_cast<std::size_t>(spec.channels));
    for (int c = 0; c < spec.channels; ++c) out.channel_names.push_back("ch" + std::to_string(c));

    const double ramp_span = spec.length > 1 ? static_cast<double>(spec.length - 1) : 1.0;
    std::vector<double> prev_noise(static_cast<std::size_t>(spec.channels), 0.0);
    for (long t = 0; t < spec.length; ++t) {
        double level = spec.base_level;
        for (const auto& [at, delta] : spec.level_shifts)
            if (t >= at) level += delta;
        const double frac = static_cast<double>(t) / ramp_span;
        const double noise_std =
            spec.noise_std_start + frac * (spec.noise_std_end - spec.noise_std_start);
        const double ar = spec.ar_start + frac * (spec.ar_end - spec.ar_start);
        for (int c = 0; c < spec.channels; ++c) {
            double v = level;
            for (std::size_t j = 0; j < spec.periods.size(); ++j) {
                const double ph = phases[j * static_cast<std::size_t>(spec.channels) +
                                         static_cast<std::size_t>(c)];
                v += spec.amplitudes[j] *
                     std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / spec.periods[j] + ph);
            }
            const auto cu = static_cast<std::size_t>(c);
            const double noise = ar * prev_noise[cu] + noise_std * gaussian(rng);
            prev_noise[cu] = noise;
            out.values(static_cast<int>(t), c) = v + noise;
        }
    }
    return out;
}

}  // namespace evomsn
