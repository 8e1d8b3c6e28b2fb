#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "evomsn/mat.hpp"
#include "evomsn/parallel.hpp"
#include "evomsn/slicing.hpp"
#include "evomsn/spectral.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

std::vector<evomsn::Mat> random_windows(int count, int len, int channels, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<evomsn::Mat> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        evomsn::Mat w(len, channels);
        for (auto& v : w.data) v = evomsn::uniform(rng, -3.0, 3.0);
        out.push_back(std::move(w));
    }
    return out;
}

bool stats_equal(const std::vector<evomsn::SliceStats>& a,
                 const std::vector<evomsn::SliceStats>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].means.data != b[i].means.data || a[i].stds.data != b[i].stds.data) return false;
    return true;
}

}  // namespace

int main() {
    const int reps = 20;
    const auto windows = random_windows(512, 96, 8, 42);

    std::printf("kernel benchmark, %d worker thread(s) available\n", evomsn::worker_count());
    std::printf("%-24s %12s %12s %9s %s\n", "kernel", "serial_ms", "openmp_ms", "speedup",
                "identical");

    {
        auto t0 = clock_type::now();
        std::vector<evomsn::SliceStats> ref;
        for (int r = 0; r < reps; ++r) ref = evomsn::kernels::batch_slice_stats_serial(windows, 24);
        const double ts = seconds_since(t0) / reps * 1e3;

        t0 = clock_type::now();
        std::vector<evomsn::SliceStats> par;
        for (int r = 0; r < reps; ++r) par = evomsn::kernels::batch_slice_stats_openmp(windows, 24);
        const double tp = seconds_since(t0) / reps * 1e3;

        std::printf("%-24s %12.3f %12.3f %8.2fx %s\n", "batch_slice_stats", ts, tp, ts / tp,
                    stats_equal(ref, par) ? "yes" : "NO");
    }
    {
        auto t0 = clock_type::now();
        std::vector<double> ref;
        for (int r = 0; r < reps; ++r) ref = evomsn::kernels::batch_mean_spectrum_serial(windows);
        const double ts = seconds_since(t0) / reps * 1e3;

        t0 = clock_type::now();
        std::vector<double> par;
        for (int r = 0; r < reps; ++r) par = evomsn::kernels::batch_mean_spectrum_openmp(windows);
        const double tp = seconds_since(t0) / reps * 1e3;

        std::printf("%-24s %12.3f %12.3f %8.2fx %s\n", "batch_mean_spectrum", ts, tp, ts / tp,
                    ref == par ? "yes" : "NO");
    }
    return 0;
}
