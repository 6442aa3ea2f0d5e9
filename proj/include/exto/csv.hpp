#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "exto/errors.hpp"
#include "exto/series.hpp"

namespace exto {

/// Column mapping and conventions for CSV ingestion. AEMO files label
/// settlement intervals by interval end, so the default shifts labels back
/// one step to interval-beginning internally; set label_offset_steps = 0
/// for interval-beginning sources.
struct CsvSchema {
    std::string timestamp_column = "timestamp";
    std::string value_column = "price";
    char delimiter = ',';
    int label_offset_steps = -1; // applied to file labels: interval-ending default
};

namespace detail {

inline std::vector<std::string> split_row(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, delim)) out.push_back(cell);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

inline std::string strip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
        s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(i);
}

} // namespace detail

/// Reads a CSV of (timestamp, price) rows onto a regular grid. Rows absent
/// from the grid become missing entries; off-grid or duplicate timestamps
/// are errors, with line numbers in the diagnostics.
inline PriceSeries ingest_csv(const std::string& path, const CsvSchema& schema,
                              Duration step, std::string series_id = "") {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw data_error("empty file: " + path);

    const auto header = detail::split_row(line, schema.delimiter);
    int ts_col = -1, val_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto name = detail::strip(header[i]);
        if (name == schema.timestamp_column) ts_col = static_cast<int>(i);
        if (name == schema.value_column) val_col = static_cast<int>(i);
    }
    if (ts_col < 0)
        throw data_error(path + ": timestamp column '" +
                         schema.timestamp_column + "' not found in header");
    if (val_col < 0)
        throw data_error(path + ": value column '" + schema.value_column +
                         "' not found in header");

    std::map<Timestamp, double> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::strip(line).empty()) continue;
        const auto cells = detail::split_row(line, schema.delimiter);
        if (static_cast<int>(cells.size()) <= std::max(ts_col, val_col))
            throw data_error(path + ":" + std::to_string(lineno) +
                             ": too few columns");
        Timestamp t;
        try {
            t = parse_timestamp(detail::strip(cells[ts_col]));
        } catch (const data_error& e) {
            throw data_error(path + ":" + std::to_string(lineno) + ": " +
                             e.what());
        }
        t += schema.label_offset_steps * step;
        const auto vcell = detail::strip(cells[val_col]);
        double v = 0.0;
        const auto [ptr, ec] =
            std::from_chars(vcell.data(), vcell.data() + vcell.size(), v);
        if (ec != std::errc{} || ptr != vcell.data() + vcell.size())
            throw data_error(path + ":" + std::to_string(lineno) +
                             ": malformed value '" + vcell + "'");
        if (!rows.emplace(t, v).second)
            throw data_error(path + ":" + std::to_string(lineno) +
                             ": duplicate timestamp " + format_timestamp(t));
    }
    if (rows.empty()) throw data_error(path + ": no data rows");

    const Timestamp start = rows.begin()->first;
    const Timestamp last = rows.rbegin()->first;
    const auto n = static_cast<std::size_t>((last - start) / step) + 1;
    std::vector<double> values(n, 0.0);
    std::vector<bool> missing(n, true);
    for (const auto& [t, v] : rows) {
        if ((t - start) % step != 0)
            throw data_error(path + ": timestamp " + format_timestamp(t) +
                             " not on the declared " + std::to_string(step) +
                             "s grid");
        const auto i = static_cast<std::size_t>((t - start) / step);
        values[i] = v;
        missing[i] = false;
    }
    if (series_id.empty()) series_id = path;
    return PriceSeries(std::move(series_id), start, step, std::move(values),
                       std::move(missing));
}

/// Mirrors the ingestion format; a round trip through ingest_csv with the
/// same schema reproduces values and missing pattern bit-exactly.
inline void export_csv(const PriceSeries& s, const std::string& path,
                       const CsvSchema& schema = {}) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write file: " + path);
    out << schema.timestamp_column << schema.delimiter << schema.value_column
        << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.is_missing(i)) continue;
        const Timestamp label =
            s.time_at(i) - schema.label_offset_steps * s.step();
        out << format_timestamp(label) << schema.delimiter << s.value(i)
            << "\n";
    }
}

} // namespace exto
