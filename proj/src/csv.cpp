#include "evomsn/csv.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "evomsn/common.hpp"

namespace evomsn {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

bool try_parse(const std::string& field, double& out) {
    if (field.empty()) return false;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool equals_ci(const std::string& a, const char* b) {
    std::size_t i = 0;
    for (; i < a.size() && b[i] != '\0'; ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) != b[i]) return false;
    return i == a.size() && b[i] == '\0';
}

}  // namespace

MultiSeries load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open " + path);

    struct Line {
        long number;
        std::vector<std::string> fields;
    };
    std::vector<Line> rows;
    std::string raw;
    long line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (trim(raw).empty()) continue;
        rows.push_back({line_no, split_fields(raw)});
    }
    if (rows.empty()) throw EmptyFile(path + " has no data");

    // Header line: every field fails to parse as a number.
    bool has_header = true;
    for (const auto& f : rows[0].fields) {
        double v;
        if (try_parse(f, v)) {
            has_header = false;
            break;
        }
    }

    std::vector<std::string> names;
    std::size_t first_data = 0;
    bool skip_first_col = false;
    if (has_header) {
        names = rows[0].fields;
        first_data = 1;
        if (!names.empty() && equals_ci(names[0], "date")) {
            skip_first_col = true;
            names.erase(names.begin());
        }
        if (rows.size() == 1) throw EmptyFile(path + " has a header but no data rows");
    } else {
        double v;
        if (!try_parse(rows[0].fields[0], v)) skip_first_col = true;
    }

    const std::size_t width = rows[first_data].fields.size();
    const std::size_t offset = skip_first_col ? 1 : 0;
    if (width <= offset)
        throw ParseError(path + ": no numeric columns", rows[first_data].number, 1);
    const int C = static_cast<int>(width - offset);
    if (!has_header)
        for (int c = 0; c < C; ++c) names.push_back("ch" + std::to_string(c));
    if (static_cast<int>(names.size()) != C)
        throw ParseError(path + ": header names " + std::to_string(names.size()) +
                             " columns, data has " + std::to_string(C),
                         rows[first_data].number, 1);

    MultiSeries series;
    series.values = Mat(static_cast<int>(rows.size() - first_data), C);
    series.channel_names = names;
    for (std::size_t r = first_data; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != width)
            throw ParseError(path + ": row has " + std::to_string(row.fields.size()) +
                                 " fields, expected " + std::to_string(width),
                             row.number, 1);
        for (std::size_t f = offset; f < width; ++f) {
            double v;
            if (!try_parse(row.fields[f], v))
                throw ParseError(path + ": '" + row.fields[f] + "' is not a number", row.number,
                                 static_cast<long>(f) + 1);
            series.values(static_cast<int>(r - first_data), static_cast<int>(f - offset)) = v;
        }
    }

    if (!options.channels.empty()) {
        for (const auto& want : options.channels) {
            bool found = false;
            for (const auto& name : series.channel_names) found = found || name == want;
            if (!found) throw UnknownKey("channel '" + want + "' is not in " + path);
        }
        // Selection is a filter: kept columns stay in file order, so the
        // order of the requested list cannot change the resulting series.
        std::vector<int> keep;
        for (int c = 0; c < C; ++c) {
            const auto& name = series.channel_names[static_cast<std::size_t>(c)];
            for (const auto& want : options.channels)
                if (name == want) {
                    keep.push_back(c);
                    break;
                }
        }
        MultiSeries filtered;
        filtered.values = Mat(series.values.rows, static_cast<int>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j) {
            filtered.channel_names.push_back(series.channel_names[static_cast<std::size_t>(keep[j])]);
            for (int r = 0; r < series.values.rows; ++r)
                filtered.values(r, static_cast<int>(j)) = series.values(r, keep[j]);
        }
        return filtered;
    }
    return series;
}

void write_csv(const std::string& path, const MultiSeries& series) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");

    for (int c = 0; c < series.channels(); ++c) {
        if (c) out << ',';
        out << series.channel_names[static_cast<std::size_t>(c)];
    }
    out << '\n';

    char buf[64];
    for (int r = 0; r < series.values.rows; ++r) {
        for (int c = 0; c < series.channels(); ++c) {
            if (c) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", series.values(r, c));
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace evomsn
