#pragma once

// CSV ingestion and emission of paired series.
//
// Schema: header row naming `location_id`, `observed`, `predicted`, with an
// optional `timestamp` column. Rows are grouped by location in order of first
// appearance; values keep file order within each location.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "objsel/data.hpp"
#include "objsel/error.hpp"

namespace objsel {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::optional<double> parse_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace detail

/// Shortest decimal text that reads back to exactly `v`.
inline std::string format_exact(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline Dataset parse_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string_view> header;
    std::string header_line;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (!detail::trim(line).empty()) {
            header_line = line;
            header = detail::split_fields(header_line);
            break;
        }
    }
    detail::require(!header.empty(), ErrorCode::EmptyFile, "input has no header row");

    const auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    };
    const auto required = [&](std::string_view name) {
        const auto c = column(name);
        detail::require(c.has_value(), ErrorCode::MissingColumn, "header lacks a '" + std::string(name) + "' column");
        return *c;
    };
    const std::size_t c_loc = required("location_id");
    const std::size_t c_obs = required("observed");
    const std::size_t c_pred = required("predicted");
    const auto c_time = column("timestamp");
    const std::size_t width = header.size();

    std::vector<PairedSeries> series;
    std::unordered_map<std::string, std::size_t> slot;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split_fields(line);
        detail::require(f.size() == width, ErrorCode::UnparseableNumber,
                        "line " + std::to_string(line_no) + ": expected " + std::to_string(width) + " fields, found " +
                            std::to_string(f.size()));
        const auto number = [&](std::size_t c, std::string_view what) {
            const auto v = detail::parse_double(f[c]);
            detail::require(v.has_value(), ErrorCode::UnparseableNumber,
                            "line " + std::to_string(line_no) + ": cannot parse " + std::string(what) + " value '" +
                                std::string(f[c]) + "'");
            return *v;
        };
        const double obs = number(c_obs, "observed");
        const double pred = number(c_pred, "predicted");
        std::string id(f[c_loc]);
        auto [it, inserted] = slot.try_emplace(id, series.size());
        if (inserted) series.push_back(PairedSeries{id, {}, {}, {}});
        auto& s = series[it->second];
        s.observed.push_back(obs);
        s.predicted.push_back(pred);
        if (c_time) s.timestamps.emplace_back(f[*c_time]);
        ++rows;
    }
    detail::require(rows > 0, ErrorCode::EmptyFile, "input has a header but no data rows");
    return validate_dataset(std::move(series));
}

inline Dataset load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    detail::require(in.good(), ErrorCode::IoError, "cannot open '" + path + "'");
    return parse_csv(in);
}

inline void write_csv(std::ostream& out, const Dataset& data) {
    const bool ts = data.has_timestamps();
    out << (ts ? "timestamp,location_id,observed,predicted\n" : "location_id,observed,predicted\n");
    const auto obs = data.observed();
    const auto pred = data.predicted();
    const auto stamps = data.timestamps();
    for (std::size_t l = 0; l < data.location_count(); ++l) {
        const auto s = data.series(l);
        for (std::size_t i = 0; i < s.observed.size(); ++i) {
            const std::size_t g = s.offset + i;
            if (ts) out << stamps[g] << ',';
            out << s.location_id << ',' << format_exact(obs[g]) << ',' << format_exact(pred[g]) << '\n';
        }
    }
}

inline std::string to_csv(const Dataset& data) {
    std::ostringstream os;
    write_csv(os, data);
    return os.str();
}

}  // namespace objsel
