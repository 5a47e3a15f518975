#pragma once

/**
 * @file hybrid_means.hpp
 * @brief Hybrid power means sum |C(m,n,k,h;p)|^c S(m n^-1, p)^(2r) and the
 *        residual records comparing them with their asymptotic main terms.
 */

#include "hsum/characters.hpp"
#include "hsum/core_arith.hpp"
#include "hsum/moment_engine.hpp"
#include "hsum/records.hpp"
#include "hsum/special_sums.hpp"
#include "hsum/summation.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsum {

struct HybridParams {
    unsigned k = 4;
    unsigned h = 2;
    unsigned c_power = 4;  // 2 or 4
    unsigned r = 1;        // S^(2r)
    bool unit_weight = false;  // replace the Dedekind factor by 1

    void validate() const {
        if (k < 1 || h < 1) throw std::invalid_argument("HybridParams: exponents must be >= 1");
        if (c_power != 2 && c_power != 4) throw std::invalid_argument("HybridParams: c_power must be 2 or 4");
        if (r < 1) throw std::invalid_argument("HybridParams: r must be >= 1");
    }
};

/**
 * sum_{m=1}^{p-1} sum_{n=1}^{p-1} |C(m,n,k,h;p)|^c * S(m n^-1, p)^(2r).
 *
 * Row p-m is row m read backwards in n (|C(-m,-n)| = |C(m,n)| and the
 * Dedekind factor is even), so only m <= (p-1)/2 is evaluated and the total
 * doubled. Rows are filled by `workers` threads; each row sum is a
 * DoubleDouble and the rows are combined by a fixed pairwise tree.
 */
inline DoubleDouble hybrid_power_mean(std::uint64_t p, const HybridParams& params, unsigned workers = 1) {
    params.validate();
    if (p <= 3 || !is_prime(p)) throw std::invalid_argument("hybrid_power_mean: p must be a prime > 3");
    const TwoTermSumTable table(p, params.k, params.h);
    const PrimeModulus mod(p);

    std::vector<double> weight(p, 1.0);
    if (!params.unit_weight) {
        const DedekindTable dedekind(p);
        for (std::uint64_t x = 1; x < p; ++x) weight[x] = std::pow(dedekind.value(x), 2.0 * params.r);
    }
    std::vector<std::uint64_t> inverse(p, 0);
    for (std::uint64_t n = 1; n < p; ++n) inverse[n] = mod_inverse(static_cast<std::int64_t>(n), mod);

    const std::uint64_t half = (p - 1) / 2;
    std::vector<DoubleDouble> rows(half);
    parallel_for(half, workers, [&](std::size_t i) {
        const std::uint64_t m = i + 1;
        std::vector<double> abs2(p);
        table.row_abs2(static_cast<std::int64_t>(m), abs2);
        DoubleDouble acc;
        for (std::uint64_t n = 1; n < p; ++n) {
            const double c = params.c_power == 4 ? abs2[n] * abs2[n] : abs2[n];
            acc += c * weight[m * inverse[n] % p];
        }
        rows[i] = acc;
    });
    return pairwise_sum(rows).scaled(2.0);
}

enum class Theorem { t11, t12 };
enum class WangPanVariant { k3h1, k4h2 };

namespace detail {

inline void require_hybrid_prime(std::uint64_t p, const char* who) {
    if (p <= 3 || !is_prime(p)) throw std::invalid_argument(std::string(who) + ": p must be a prime > 3");
}

inline ResidualRecord make_record(ResidualTarget target, std::uint64_t p, double mean, double main, double envelope) {
    ResidualRecord rec;
    rec.target = target;
    rec.p = p;
    rec.residue_class = static_cast<unsigned>(p % 8);
    rec.mean_value = mean;
    rec.main_term = main;
    rec.ratio = mean / main;
    rec.normalized_residual = (mean - main) / envelope;
    return rec;
}

} // namespace detail

/**
 * Applies the envelope verdict: the ratio must lie in [0.5, 1.5] once
 * p >= 100, and |normalized_residual| must not exceed `bound` when given.
 */
inline void apply_envelope_verdict(ResidualRecord& rec, std::optional<double> bound) {
    const bool ratio_ok = rec.p < 100 || (rec.ratio >= 0.5 && rec.ratio <= 1.5);
    const bool bound_ok = !bound || std::abs(rec.normalized_residual) <= *bound;
    rec.verdict = ratio_ok && bound_ok ? Verdict::bound_ok : Verdict::bound_fail;
}

struct WangPanResult {
    double mean = 0;
    double main_term = 0;
};

/// sum |C|^2 S^2 for (k, h) = (3, 1) or (4, 2), with main term (5/144)p^4 or (5/72)p^4.
inline WangPanResult squared_mean_wangpan(std::uint64_t p, WangPanVariant variant, unsigned workers = 1) {
    detail::require_hybrid_prime(p, "squared_mean_wangpan");
    HybridParams params;
    params.c_power = 2;
    if (variant == WangPanVariant::k3h1) {
        params.k = 3;
        params.h = 1;
    }
    const double p4 = std::pow(static_cast<double>(p), 4);
    const double main = variant == WangPanVariant::k3h1 ? 5.0 / 144.0 * p4 : 5.0 / 72.0 * p4;
    return {hybrid_power_mean(p, params, workers).value(), main};
}

inline ResidualRecord wangpan_record(std::uint64_t p, WangPanVariant variant, unsigned workers = 1,
                                     std::optional<double> bound = std::nullopt) {
    const auto res = squared_mean_wangpan(p, variant, workers);
    const double envelope = std::pow(static_cast<double>(p), 3) * log_envelope(static_cast<double>(p));
    auto rec = detail::make_record(
        variant == WangPanVariant::k3h1 ? ResidualTarget::wangpan31 : ResidualTarget::wangpan42, p, res.mean,
        res.main_term, envelope);
    apply_envelope_verdict(rec, bound);
    return rec;
}

/**
 * t11: sum |C(m,n,4,2;p)|^4 S^2 against (35/144)p^5, envelope
 * p^4 exp(3 ln p / ln ln p) for p = 3 (mod 4) and p^(9/2) exp(...) otherwise.
 * t12: sum |C(m,n,5,1;p)|^4 S^2 against (5/48)p^5, p = 3 (mod 4) only.
 */
inline ResidualRecord theorem_residual_report(std::uint64_t p, Theorem theorem, unsigned workers = 1,
                                              std::optional<double> bound = std::nullopt) {
    detail::require_hybrid_prime(p, "theorem_residual_report");
    if (theorem == Theorem::t12 && p % 4 != 3) {
        throw std::domain_error("theorem_residual_report: T12 requires p = 3 (mod 4), got p = " + std::to_string(p));
    }
    HybridParams params;
    if (theorem == Theorem::t12) {
        params.k = 5;
        params.h = 1;
    }
    const double mean = hybrid_power_mean(p, params, workers).value();
    const double P = static_cast<double>(p);
    const double p5 = std::pow(P, 5);
    const double main = theorem == Theorem::t11 ? 35.0 / 144.0 * p5 : 5.0 / 48.0 * p5;
    const double envelope = (p % 4 == 3 ? std::pow(P, 4) : std::pow(P, 4.5)) * log_envelope(P);
    auto rec = detail::make_record(theorem == Theorem::t11 ? ResidualTarget::t11 : ResidualTarget::t12, p, mean,
                                   main, envelope);
    apply_envelope_verdict(rec, bound);
    return rec;
}

/// The odd-character fourth moment of L(1, chi) as a residual record.
inline ResidualRecord lemma26_record(std::uint64_t p, std::optional<double> bound = std::nullopt) {
    if (p < 3 || !is_prime(p)) throw std::invalid_argument("lemma26_record: p must be an odd prime");
    const auto res = l_fourth_moment(p);
    ResidualRecord rec;
    rec.target = ResidualTarget::lemma26;
    rec.p = p;
    rec.residue_class = static_cast<unsigned>(p % 8);
    rec.mean_value = res.exact_sum;
    rec.main_term = res.main_term;
    rec.ratio = res.ratio;
    rec.normalized_residual = res.normalized_residual;
    apply_envelope_verdict(rec, bound);
    return rec;
}

/// Float marginal sum |C|^4 (Dedekind factor forced to 1) against the exact counting value.
inline MomentReport calibration_report(std::uint64_t p, unsigned k = 4, unsigned h = 2, double tolerance = 1e-8,
                                       unsigned workers = 1) {
    detail::require_hybrid_prime(p, "calibration_report");
    HybridParams params;
    params.k = k;
    params.h = h;
    params.unit_weight = true;
    const double marginal = hybrid_power_mean(p, params, workers).value();
    const std::int64_t exact = exact_fourth_moment(p, k, h);
    MomentReport r;
    r.p = p;
    r.lemma = LemmaId::calibration;
    r.brute = ExactRational(exact);
    r.closed = marginal;
    const double rel = std::abs(marginal - static_cast<double>(exact)) / static_cast<double>(exact);
    r.normalized_residual = rel;
    r.verdict = rel < tolerance ? Verdict::match : Verdict::mismatch;
    r.witness = "k=" + std::to_string(k) + ";h=" + std::to_string(h);
    return r;
}

} // namespace hsum
