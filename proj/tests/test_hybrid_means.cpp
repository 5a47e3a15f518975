#include "hsum/hybrid_means.hpp"
#include "hsum/scan.hpp"

#include <gtest/gtest.h>

using namespace hsum;

namespace {

// full m, n double loop with no row folding and plain long double accumulation
long double direct_hybrid(std::uint64_t p, unsigned k, unsigned h, unsigned c_power, unsigned r) {
    const TwoTermSumTable t(p, k, h);
    const PrimeModulus mod(p);
    long double acc = 0;
    for (std::int64_t m = 1; m < static_cast<std::int64_t>(p); ++m) {
        for (std::int64_t n = 1; n < static_cast<std::int64_t>(p); ++n) {
            const double a2 = std::norm(t.value(m, n));
            const auto idx = static_cast<std::int64_t>((m * mod_inverse(n, mod)) % p);
            const long double s = dedekind_sum(idx, static_cast<std::int64_t>(p)).to_long_double();
            acc += (c_power == 4 ? a2 * a2 : a2) * std::pow(s, 2.0L * r);
        }
    }
    return acc;
}

} // namespace

TEST(HybridMean, MatchesDirectDoubleLoop) {
    for (std::uint64_t p : {5ULL, 7ULL, 11ULL, 13ULL, 23ULL}) {
        for (unsigned r : {1U, 2U}) {
            HybridParams params;
            params.r = r;
            const double expected = static_cast<double>(direct_hybrid(p, 4, 2, 4, r));
            EXPECT_NEAR(hybrid_power_mean(p, params).value(), expected, 1e-10 * expected) << "p=" << p;
        }
    }
}

TEST(HybridMean, UnitWeightIsExactMoment) {
    HybridParams params;
    params.unit_weight = true;
    EXPECT_NEAR(hybrid_power_mean(7, params).value(), 11172.0, 1e-8 * 11172.0);
    params.c_power = 2;
    for (std::uint64_t p : {7ULL, 13ULL, 31ULL}) {
        const double exact = static_cast<double>(exact_second_moment(p, 4, 2));
        EXPECT_NEAR(hybrid_power_mean(p, params).value(), exact, 1e-10 * exact);
    }
}

TEST(HybridMean, NegationSymmetry) {
    // (m, n) -> (p-m, p-n) keeps every term, so the halves m <= (p-1)/2 and m > (p-1)/2 agree
    const std::uint64_t p = 11;
    const TwoTermSumTable t(p, 4, 2);
    const DedekindTable d(p);
    const PrimeModulus mod(p);
    long double lower = 0, upper = 0;
    for (std::int64_t m = 1; m < 11; ++m) {
        for (std::int64_t n = 1; n < 11; ++n) {
            const double a2 = std::norm(t.value(m, n));
            const double w = std::pow(d.value(m * mod_inverse(n, mod) % 11), 2);
            (m <= 5 ? lower : upper) += a2 * a2 * w;
        }
    }
    EXPECT_NEAR(static_cast<double>(lower), static_cast<double>(upper), 1e-9 * static_cast<double>(lower));
}

TEST(HybridMean, WorkerCountInvariant) {
    const HybridParams params;
    const auto one = hybrid_power_mean(97, params, 1);
    for (unsigned w : {2U, 4U, 8U}) {
        const auto many = hybrid_power_mean(97, params, w);
        EXPECT_EQ(one.hi, many.hi);
        EXPECT_EQ(one.lo, many.lo);
    }
}

TEST(HybridMean, Preconditions) {
    EXPECT_THROW(hybrid_power_mean(3, HybridParams{}), std::invalid_argument);
    EXPECT_THROW(hybrid_power_mean(9, HybridParams{}), std::invalid_argument);
    HybridParams bad;
    bad.c_power = 3;
    EXPECT_THROW(hybrid_power_mean(7, bad), std::invalid_argument);
}

TEST(HybridResidualReport, RatioDefinition) {
    const auto r7 = theorem_residual_report(7, Theorem::t11);
    EXPECT_DOUBLE_EQ(r7.ratio, r7.mean_value / (35.0 / 144.0 * 16807.0));
    EXPECT_EQ(r7.residue_class, 7U);
    const auto r11 = theorem_residual_report(11, Theorem::t12);
    EXPECT_DOUBLE_EQ(r11.ratio, r11.mean_value / (5.0 / 48.0 * 161051.0));
    HybridParams p51;
    p51.k = 5;
    p51.h = 1;
    EXPECT_DOUBLE_EQ(r11.mean_value, hybrid_power_mean(11, p51).value());
    EXPECT_THROW(theorem_residual_report(13, Theorem::t12), std::domain_error);
}

TEST(HybridResidualReport, EnvelopeVerdict) {
    auto rec = theorem_residual_report(103, Theorem::t11);
    EXPECT_EQ(rec.verdict, Verdict::bound_ok);
    apply_envelope_verdict(rec, 1e-9);
    EXPECT_EQ(rec.verdict, Verdict::bound_fail);
}

TEST(WangPan, MainTermsAndMarginal) {
    const auto a = squared_mean_wangpan(7, WangPanVariant::k3h1);
    EXPECT_DOUBLE_EQ(a.main_term, 5.0 / 144.0 * 2401.0);
    const auto b = squared_mean_wangpan(7, WangPanVariant::k4h2);
    EXPECT_DOUBLE_EQ(b.main_term, 5.0 / 72.0 * 2401.0);
    EXPECT_NEAR(a.mean, static_cast<double>(direct_hybrid(7, 3, 1, 2, 1)), 1e-9 * a.mean);
}

TEST(Calibration, FloatMatchesExact) {
    for (std::uint64_t p : {5ULL, 31ULL, 61ULL}) EXPECT_EQ(calibration_report(p).verdict, Verdict::match);
}

TEST(PrimeScan, EmptyAndOrdering) {
    EXPECT_TRUE(prime_scan(5, 4, ScanTarget::t11).empty());
    EXPECT_THROW(prime_scan(3, 11, ScanTarget::lemma21), std::invalid_argument);
    const auto recs = prime_scan(5, 60, ScanTarget::t12, 3);
    ASSERT_FALSE(recs.empty());
    std::uint64_t last = 0;
    for (const auto& r : recs) {
        EXPECT_EQ(record_p(r) % 4, 3U);
        EXPECT_GT(record_p(r), last);
        last = record_p(r);
    }
}

TEST(PrimeScan, Lemma21CountsBranches) {
    const auto recs = prime_scan(5, 151, ScanTarget::lemma21, 2);
    EXPECT_EQ(recs.size(), 34U);
    for (const auto& r : recs) {
        const auto p = record_p(r);
        EXPECT_EQ(is_passing(record_verdict(r)), p % 4 == 3) << "p=" << p;
    }
}
