#pragma once

// Prime-range scans for every check in the library.

#include "hsum/core_arith.hpp"
#include "hsum/hybrid_means.hpp"
#include "hsum/moment_engine.hpp"
#include "hsum/records.hpp"
#include "hsum/summation.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hsum {

enum class ScanTarget {
    lemma21,
    eq2,
    lemma22,
    lemma23,
    lemma24,
    lemma25,
    lemma26,
    lemma27,
    calibration,
    t11,
    t12,
    wangpan31,
    wangpan42,
};

inline constexpr ScanTarget all_scan_targets[] = {
    ScanTarget::lemma21, ScanTarget::eq2,         ScanTarget::lemma22, ScanTarget::lemma23, ScanTarget::lemma24,
    ScanTarget::lemma25, ScanTarget::lemma26,     ScanTarget::lemma27, ScanTarget::calibration, ScanTarget::t11,
    ScanTarget::t12,     ScanTarget::wangpan31,   ScanTarget::wangpan42,
};

inline std::string_view to_string(ScanTarget t) {
    switch (t) {
    case ScanTarget::lemma21: return "lemma21";
    case ScanTarget::eq2: return "eq2";
    case ScanTarget::lemma22: return "lemma22";
    case ScanTarget::lemma23: return "lemma23";
    case ScanTarget::lemma24: return "lemma24";
    case ScanTarget::lemma25: return "lemma25";
    case ScanTarget::lemma26: return "lemma26";
    case ScanTarget::lemma27: return "lemma27";
    case ScanTarget::calibration: return "calibration";
    case ScanTarget::t11: return "t11";
    case ScanTarget::t12: return "t12";
    case ScanTarget::wangpan31: return "wangpan31";
    case ScanTarget::wangpan42: return "wangpan42";
    }
    return "?";
}

inline ScanTarget parse_scan_target(std::string_view s) {
    for (auto t : all_scan_targets) {
        if (to_string(t) == s) return t;
    }
    throw std::invalid_argument("unknown scan target '" + std::string(s) + "'");
}

/// Whether `p` is in the domain of `target` (some checks exist only for p = 3 mod 4).
inline bool target_accepts(ScanTarget target, std::uint64_t p) {
    switch (target) {
    case ScanTarget::lemma23:
    case ScanTarget::lemma24:
    case ScanTarget::t12:
        return p % 4 == 3;
    default:
        return true;
    }
}

struct ScanOptions {
    bool record_timing = true;
    std::optional<double> bound;  // envelope constant for BOUND_* verdicts
    std::function<std::optional<double>(std::uint64_t)> bound_for;  // per-prime override of `bound`
    double tolerance = 1e-6;      // vanishing sums
    double relative_tolerance = 1e-8;  // float vs exact
    std::uint64_t naive_cap = 61;
};

using ScanRecord = std::variant<MomentReport, ResidualRecord>;

inline std::uint64_t record_p(const ScanRecord& r) {
    return std::visit([](const auto& x) { return x.p; }, r);
}

inline Verdict record_verdict(const ScanRecord& r) {
    return std::visit([](const auto& x) { return x.verdict; }, r);
}

/// One check at one prime; `inner_workers` parallelizes inside the hybrid means.
inline ScanRecord run_check(ScanTarget target, std::uint64_t p, const ScanOptions& options,
                            unsigned inner_workers = 1) {
    switch (target) {
    case ScanTarget::lemma21: return lemma21_report(p);
    case ScanTarget::eq2: return eq2_report(p);
    case ScanTarget::lemma22: return fourth_moment_51_report(p, options.bound);
    case ScanTarget::lemma23: return vanishing_report(p, ExponentPair::k4h2, options.tolerance);
    case ScanTarget::lemma24: return vanishing_report(p, ExponentPair::k5h1, options.tolerance);
    case ScanTarget::lemma25: return lemma25_report(p);
    case ScanTarget::lemma26: return lemma26_record(p, options.bound);
    case ScanTarget::lemma27: return lemma27_report(p, options.bound, options.naive_cap);
    case ScanTarget::calibration: return calibration_report(p, 4, 2, options.relative_tolerance, inner_workers);
    case ScanTarget::t11: return theorem_residual_report(p, Theorem::t11, inner_workers, options.bound);
    case ScanTarget::t12: return theorem_residual_report(p, Theorem::t12, inner_workers, options.bound);
    case ScanTarget::wangpan31: return wangpan_record(p, WangPanVariant::k3h1, inner_workers, options.bound);
    case ScanTarget::wangpan42: return wangpan_record(p, WangPanVariant::k4h2, inner_workers, options.bound);
    }
    throw std::logic_error("run_check: unhandled target");
}

/**
 * Runs `target` on every prime in [p_min, p_max] inside its domain, one prime
 * per job on up to `workers` threads. Output is sorted by p and does not
 * depend on `workers` (timing aside; disable it for byte-identical output).
 */
inline std::vector<ScanRecord> prime_scan(std::uint64_t p_min, std::uint64_t p_max, ScanTarget target,
                                          unsigned workers = 1, const ScanOptions& options = {}) {
    if (p_min > p_max) return {};
    if (p_min < 5) throw std::invalid_argument("prime_scan: p_min must be >= 5");
    std::vector<std::uint64_t> primes;
    for (auto p : primes_in_range(p_min, p_max)) {
        if (target_accepts(target, p)) primes.push_back(p);
    }
    // largest primes first so the long jobs do not straggle at the end
    std::vector<std::size_t> order(primes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;

    std::vector<std::optional<ScanRecord>> slots(primes.size());
    parallel_for(primes.size(), workers, [&](std::size_t j) {
        const std::size_t i = order[j];
        const auto start = std::chrono::steady_clock::now();
        ScanRecord rec = [&] {
            if (!options.bound_for) return run_check(target, primes[i], options);
            ScanOptions local = options;
            local.bound = options.bound_for(primes[i]);
            return run_check(target, primes[i], local);
        }();
        if (options.record_timing) {
            const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
            std::visit([ms](auto& x) { x.runtime_ms = ms; }, rec);
        }
        slots[i] = std::move(rec);
    });

    std::vector<ScanRecord> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    std::stable_sort(out.begin(), out.end(),
                     [](const ScanRecord& a, const ScanRecord& b) { return record_p(a) < record_p(b); });
    return out;
}

} // namespace hsum
