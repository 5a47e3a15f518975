#pragma once

// CSV / JSON serialization of scan records.
//
// Both formats carry the same nine columns. Exact values are written as
// "num/den" strings (plain integers when the denominator is 1), floats with
// 17 significant digits; in JSON exact values stay strings and floats are
// numbers, so a re-parse restores the variant alternative.

#include "hsum/records.hpp"
#include "hsum/scan.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsum {

inline constexpr const char* report_columns[] = {
    "target", "p", "p_mod_8", "brute_or_mean", "closed_or_main", "ratio", "normalized_residual", "verdict",
    "runtime_ms",
};

struct ReportRow {
    std::string target;
    std::uint64_t p = 0;
    unsigned p_mod_8 = 0;
    ReportValue brute_or_mean = ExactRational(0);
    ReportValue closed_or_main = ExactRational(0);
    ReportValue ratio = ExactRational(0);
    std::optional<double> normalized_residual;
    Verdict verdict = Verdict::match;
    std::int64_t runtime_ms = 0;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

inline ReportRow to_row(const MomentReport& r) {
    return {std::string(to_string(r.lemma)), r.p, static_cast<unsigned>(r.p % 8), r.brute, r.closed, r.ratio(),
            r.normalized_residual, r.verdict, r.runtime_ms};
}

inline ReportRow to_row(const ResidualRecord& r) {
    return {std::string(to_string(r.target)), r.p, r.residue_class, r.mean_value, r.main_term, r.ratio,
            r.normalized_residual, r.verdict, r.runtime_ms};
}

inline ReportRow to_row(const ScanRecord& r) {
    return std::visit([](const auto& x) { return to_row(x); }, r);
}

inline std::vector<ReportRow> to_rows(const std::vector<ScanRecord>& records) {
    std::vector<ReportRow> rows;
    rows.reserve(records.size());
    for (const auto& r : records) rows.push_back(to_row(r));
    return rows;
}

enum class ReportFormat { csv, json };

inline ReportFormat parse_report_format(std::string_view s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    throw std::invalid_argument("unknown format '" + std::string(s) + "'");
}

inline void write_csv(std::ostream& os, const std::vector<ReportRow>& rows) {
    for (std::size_t i = 0; i < std::size(report_columns); ++i) os << (i ? "," : "") << report_columns[i];
    os << '\n';
    for (const auto& r : rows) {
        os << r.target << ',' << r.p << ',' << r.p_mod_8 << ',' << format_value(r.brute_or_mean) << ','
           << format_value(r.closed_or_main) << ',' << format_value(r.ratio) << ','
           << (r.normalized_residual ? format_double(*r.normalized_residual) : "") << ',' << to_string(r.verdict)
           << ',' << r.runtime_ms << '\n';
    }
}

namespace detail {

inline nlohmann::json value_to_json(const ReportValue& v) {
    if (const auto* r = std::get_if<ExactRational>(&v)) return r->to_string();
    const double d = std::get<double>(v);
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    return d;
}

inline ReportValue value_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        // JSON has no inf/nan; those floats travel as strings
        const auto s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        return ExactRational::parse(s);
    }
    if (j.is_number()) return j.get<double>();
    throw std::invalid_argument("report value must be a string or a number");
}

} // namespace detail

inline nlohmann::json rows_to_json(const std::vector<ReportRow>& rows) {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json o;
        o["target"] = r.target;
        o["p"] = r.p;
        o["p_mod_8"] = r.p_mod_8;
        o["brute_or_mean"] = detail::value_to_json(r.brute_or_mean);
        o["closed_or_main"] = detail::value_to_json(r.closed_or_main);
        o["ratio"] = detail::value_to_json(r.ratio);
        o["normalized_residual"] = r.normalized_residual && std::isfinite(*r.normalized_residual)
                                       ? nlohmann::json(*r.normalized_residual)
                                       : nlohmann::json(nullptr);
        o["verdict"] = std::string(to_string(r.verdict));
        o["runtime_ms"] = r.runtime_ms;
        arr.push_back(std::move(o));
    }
    return arr;
}

inline void write_json(std::ostream& os, const std::vector<ReportRow>& rows) { os << rows_to_json(rows).dump(2) << '\n'; }

inline std::vector<ReportRow> parse_json_report(std::string_view text) {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) throw std::invalid_argument("report JSON must be an array");
    std::vector<ReportRow> rows;
    for (const auto& o : arr) {
        ReportRow r;
        r.target = o.at("target").get<std::string>();
        r.p = o.at("p").get<std::uint64_t>();
        r.p_mod_8 = o.at("p_mod_8").get<unsigned>();
        r.brute_or_mean = detail::value_from_json(o.at("brute_or_mean"));
        r.closed_or_main = detail::value_from_json(o.at("closed_or_main"));
        r.ratio = detail::value_from_json(o.at("ratio"));
        if (!o.at("normalized_residual").is_null()) r.normalized_residual = o.at("normalized_residual").get<double>();
        r.verdict = parse_verdict(o.at("verdict").get<std::string>());
        r.runtime_ms = o.at("runtime_ms").get<std::int64_t>();
        rows.push_back(std::move(r));
    }
    return rows;
}

inline void write_report(std::ostream& os, const std::vector<ReportRow>& rows, ReportFormat format) {
    if (format == ReportFormat::csv) {
        write_csv(os, rows);
    } else {
        write_json(os, rows);
    }
}

/// Writes to `path`, or to stdout when `path` is empty or "-".
inline void emit_report(const std::vector<ReportRow>& rows, ReportFormat format, const std::string& path) {
    if (path.empty() || path == "-") {
        write_report(std::cout, rows, format);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_report(out, rows, format);
    out.flush();
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline std::string report_string(const std::vector<ReportRow>& rows, ReportFormat format) {
    std::ostringstream os;
    write_report(os, rows, format);
    return os.str();
}

} // namespace hsum
