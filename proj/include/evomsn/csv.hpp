#pragma once

#include <string>
#include <vector>

#include "evomsn/series.hpp"

namespace evomsn {

struct CsvOptions {
    // Keep only these channels (by name, file order preserved); empty keeps
    // all. Asking for a channel the file lacks raises UnknownKey.
    std::vector<std::string> channels;
};

// Comma-separated numeric table. A first line whose fields are all
// non-numeric is a header; a leading "date" header or an unparsable first
// cell marks column one as a timestamp, which is skipped. Bad cells raise
// ParseError with 1-based file coordinates.
MultiSeries load_csv(const std::string& path, const CsvOptions& options = {});

void write_csv(const std::string& path, const MultiSeries& series);

}  // namespace evomsn
