#pragma once

// Golden files: recorded scan values under version control.
//
// <dir>/<target>.csv  key,target,p,params,brute_or_mean,closed_or_main,verdict
// <dir>/constants.csv name,value
//
// key is the FNV-1a hash of "target|p|params". Constants are empirical
// envelope bounds: the largest |normalized residual| seen at record time
// times a fixed margin.

#include "hsum/records.hpp"
#include "hsum/report.hpp"
#include "hsum/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsum {

inline std::uint64_t fnv1a_64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Parameters that pin down what a target computes.
inline std::string target_params(ScanTarget t) {
    switch (t) {
    case ScanTarget::lemma21:
    case ScanTarget::eq2:
    case ScanTarget::calibration: return "k=4;h=2";
    case ScanTarget::lemma22: return "k=5;h=1";
    case ScanTarget::lemma23: return "k=4;h=2;chars=odd";
    case ScanTarget::lemma24: return "k=5;h=1;chars=odd";
    case ScanTarget::lemma25: return "a=all";
    case ScanTarget::lemma26: return "chars=odd;power=4";
    case ScanTarget::lemma27: return "k=4;h=2;chi=legendre";
    case ScanTarget::t11: return "k=4;h=2;c=4;r=1";
    case ScanTarget::t12: return "k=5;h=1;c=4;r=1";
    case ScanTarget::wangpan31: return "k=3;h=1;c=2;r=1";
    case ScanTarget::wangpan42: return "k=4;h=2;c=2;r=1";
    }
    return "";
}

inline std::string golden_key(ScanTarget t, std::uint64_t p) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a_64(std::string(to_string(t)) + "|" + std::to_string(p) + "|" + target_params(t))));
    return buf;
}

struct GoldenRange {
    ScanTarget target;
    std::uint64_t p_min;
    std::uint64_t p_max;
};

/// The ranges recorded into the golden store by default.
inline std::vector<GoldenRange> default_golden_ranges() {
    return {
        {ScanTarget::lemma21, 5, 151},   {ScanTarget::eq2, 5, 61},         {ScanTarget::lemma22, 5, 61},
        {ScanTarget::lemma23, 7, 23},    {ScanTarget::lemma24, 7, 23},     {ScanTarget::lemma25, 5, 101},
        {ScanTarget::lemma26, 101, 997}, {ScanTarget::lemma27, 5, 61},     {ScanTarget::calibration, 5, 151},
        {ScanTarget::t11, 5, 499},       {ScanTarget::t12, 5, 499},        {ScanTarget::wangpan31, 5, 499},
        {ScanTarget::wangpan42, 5, 499},
    };
}

inline std::optional<GoldenRange> default_range(ScanTarget t) {
    for (const auto& r : default_golden_ranges()) {
        if (r.target == t) return r;
    }
    return std::nullopt;
}

inline std::string default_golden_dir() {
    if (const char* env = std::getenv("HSUM_GOLDEN_DIR"); env != nullptr && *env != '\0') return env;
    return "tests/golden";
}

struct GoldenEntry {
    std::string key;
    std::string target;
    std::uint64_t p = 0;
    std::string params;
    std::string brute_or_mean;
    std::string closed_or_main;
    std::string verdict;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace detail

/// Constant names: lemma22.bound, lemma26.normres, lemma27.norm, t11.mod4_3.normres,
/// t11.mod4_1.normres, t12.normres, wangpan31.normres, wangpan42.normres.
using GoldenConstants = std::map<std::string, double>;

inline constexpr double golden_margin = 1.25;

class GoldenStore {
public:
    explicit GoldenStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

    const std::filesystem::path& dir() const { return dir_; }

    std::filesystem::path table_path(ScanTarget t) const { return dir_ / (std::string(to_string(t)) + ".csv"); }
    std::filesystem::path constants_path() const { return dir_ / "constants.csv"; }

    void write_table(ScanTarget t, const std::vector<ScanRecord>& records) const {
        std::filesystem::create_directories(dir_);
        auto out = detail::open_for_write(table_path(t));
        out << "key,target,p,params,brute_or_mean,closed_or_main,verdict\n";
        for (const auto& rec : records) {
            const auto row = to_row(rec);
            out << golden_key(t, row.p) << ',' << row.target << ',' << row.p << ',' << target_params(t) << ','
                << format_value(row.brute_or_mean) << ',' << format_value(row.closed_or_main) << ','
                << to_string(row.verdict) << '\n';
        }
    }

    std::vector<GoldenEntry> read_table(ScanTarget t) const {
        std::ifstream in(table_path(t));
        if (!in) throw std::runtime_error("missing golden file '" + table_path(t).string() + "'");
        std::vector<GoldenEntry> out;
        std::string line;
        std::getline(in, line);  // header
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto cells = detail::split_csv_line(line);
            if (cells.size() != 7) throw std::runtime_error("malformed golden row: " + line);
            out.push_back({cells[0], cells[1], std::stoull(cells[2]), cells[3], cells[4], cells[5], cells[6]});
        }
        return out;
    }

    void write_constants(const GoldenConstants& constants) const {
        std::filesystem::create_directories(dir_);
        auto out = detail::open_for_write(constants_path());
        out << "name,value\n";
        for (const auto& [name, value] : constants) out << name << ',' << format_double(value) << '\n';
    }

    GoldenConstants read_constants() const {
        GoldenConstants out;
        std::ifstream in(constants_path());
        if (!in) return out;
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            const auto cells = detail::split_csv_line(line);
            if (cells.size() == 2) out[cells[0]] = std::stod(cells[1]);
        }
        return out;
    }

private:
    std::filesystem::path dir_;
};

/// Name of the envelope constant governing `target` at prime p, if any.
inline std::optional<std::string> constant_name(ScanTarget t, std::uint64_t p) {
    switch (t) {
    case ScanTarget::lemma22: return "lemma22.bound";
    case ScanTarget::lemma26: return "lemma26.normres";
    case ScanTarget::lemma27: return "lemma27.norm";
    case ScanTarget::t11: return p % 4 == 3 ? "t11.mod4_3.normres" : "t11.mod4_1.normres";
    case ScanTarget::t12: return "t12.normres";
    case ScanTarget::wangpan31: return "wangpan31.normres";
    case ScanTarget::wangpan42: return "wangpan42.normres";
    default: return std::nullopt;
    }
}

/// Folds the scan's normalized residuals into `constants` (max |value| times the margin).
inline void calibrate_constants(ScanTarget t, const std::vector<ScanRecord>& records, GoldenConstants& constants) {
    for (const auto& rec : records) {
        const auto row = to_row(rec);
        const auto name = constant_name(t, row.p);
        if (!name || !row.normalized_residual) continue;
        const double v = std::abs(*row.normalized_residual) * golden_margin;
        auto [it, inserted] = constants.emplace(*name, v);
        if (!inserted) it->second = std::max(it->second, v);
    }
}

/// Runs a scan with the envelope constant from `constants` applied per prime.
inline std::vector<ScanRecord> scan_with_constants(std::uint64_t p_min, std::uint64_t p_max, ScanTarget target,
                                                   unsigned workers, ScanOptions options,
                                                   const GoldenConstants& constants) {
    options.bound_for = [target, constants](std::uint64_t p) -> std::optional<double> {
        const auto name = constant_name(target, p);
        if (!name) return std::nullopt;
        const auto it = constants.find(*name);
        return it == constants.end() ? std::nullopt : std::optional<double>(it->second);
    };
    return prime_scan(p_min, p_max, target, workers, options);
}

struct GoldenDiff {
    ScanTarget target;
    std::uint64_t p = 0;
    std::string what;
};

inline bool golden_values_agree(const std::string& recorded, const ReportValue& now) {
    if (const auto* r = std::get_if<ExactRational>(&now)) {
        return recorded == r->to_string();
    }
    double rec = 0;
    try {
        rec = std::stod(recorded);
    } catch (const std::exception&) {
        return false;
    }
    const double v = std::get<double>(now);
    const double scale = std::max({std::abs(rec), std::abs(v), 1e-300});
    return std::abs(rec - v) / scale <= 1e-9;
}

/// Compares fresh records with the stored table for `target`.
inline std::vector<GoldenDiff> compare_with_golden(ScanTarget target, const std::vector<ScanRecord>& records,
                                                   const std::vector<GoldenEntry>& stored) {
    std::map<std::string, const GoldenEntry*> by_key;
    for (const auto& e : stored) by_key[e.key] = &e;
    std::vector<GoldenDiff> diffs;
    for (const auto& rec : records) {
        const auto row = to_row(rec);
        const auto it = by_key.find(golden_key(target, row.p));
        if (it == by_key.end()) {
            diffs.push_back({target, row.p, "no golden entry"});
            continue;
        }
        const auto& e = *it->second;
        if (!golden_values_agree(e.brute_or_mean, row.brute_or_mean)) {
            diffs.push_back({target, row.p, "brute_or_mean " + format_value(row.brute_or_mean) + " != " + e.brute_or_mean});
        }
        if (!golden_values_agree(e.closed_or_main, row.closed_or_main)) {
            diffs.push_back(
                {target, row.p, "closed_or_main " + format_value(row.closed_or_main) + " != " + e.closed_or_main});
        }
        if (e.verdict != to_string(row.verdict)) {
            diffs.push_back({target, row.p, "verdict " + std::string(to_string(row.verdict)) + " != " + e.verdict});
        }
    }
    return diffs;
}

} // namespace hsum
