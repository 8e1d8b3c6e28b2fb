#include "evomsn/series.hpp"

namespace evomsn {

std::vector<WindowPair> make_windows(const MultiSeries& series, int lookback, int horizon,
                                     int stride) {
    if (lookback < 1 || horizon < 1) throw RangeError("make_windows: lookback and horizon must be >= 1");
    if (stride < 1) throw RangeError("make_windows: stride must be >= 1");
    const long total = series.length();
    if (lookback + horizon > total)
        throw SeriesTooShort("make_windows: need at least " + std::to_string(lookback + horizon) +
                             " steps, series has " + std::to_string(total));

    const long count = (total - lookback - horizon) / stride + 1;
    std::vector<WindowPair> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long n = 0; n < count; ++n) {
        const long start = n * stride;
        WindowPair w;
        w.input = row_block(series.values, static_cast<int>(start), lookback);
        w.horizon = row_block(series.values, static_cast<int>(start) + lookback, horizon);
        w.origin = series.step_index_origin + start;
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace evomsn
