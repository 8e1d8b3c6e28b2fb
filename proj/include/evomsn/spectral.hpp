#pragma once

#include <vector>

#include "evomsn/mat.hpp"

namespace evomsn {

// Global periodicity found on the training windows: frequencies are integer
// cycle counts over analysis_len, periods the matching slice lengths. Entries
// are sorted by descending mean amplitude and the periods are distinct.
struct PeriodSet {
    std::vector<int> periods;
    std::vector<int> frequencies;
    std::vector<double> mean_amplitudes;
    int analysis_len = 0;

    int size() const { return static_cast<int>(periods.size()); }
};

// Per-channel amplitudes of one window evaluated at the global frequencies.
struct LocalAmplitudes {
    Mat amplitudes;  // scales x channels
};

// Amplitude spectrum of a real signal at bins 1..floor(t/2). The DC bin is
// excluded: a constant offset is not a periodicity.
std::vector<double> dft_amplitudes(const std::vector<double>& signal);

// Averages amplitude spectra over every window and channel, then picks the
// top-k bins. Ties go to the lower frequency; bins mapping to an
// already-taken period are dropped, so the result can hold fewer than k
// scales when the series is spectrally poor.
PeriodSet extract_global_periods(const std::vector<Mat>& training_windows, int k);

LocalAmplitudes local_amplitudes(const Mat& window, const PeriodSet& periods);

namespace kernels {

// Mean amplitude spectrum over all windows and channels. Both variants form
// one partial spectrum per window and reduce the partials in index order, so
// their outputs are bit-identical.
std::vector<double> batch_mean_spectrum(const std::vector<Mat>& windows);
std::vector<double> batch_mean_spectrum_serial(const std::vector<Mat>& windows);
std::vector<double> batch_mean_spectrum_openmp(const std::vector<Mat>& windows);

}  // namespace kernels

}  // namespace evomsn
