#include "hsum/special_sums.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

using namespace hsum;

namespace {

// e(x/q) summed term by term, no tables
std::complex<double> naive_c(std::int64_t m, std::int64_t n, unsigned k, unsigned h, std::uint64_t q) {
    std::complex<long double> acc{0, 0};
    for (std::uint64_t a = 0; a < q; ++a) {
        long double x = static_cast<long double>(m) * power_mod(a, k, q) + static_cast<long double>(n) * power_mod(a, h, q);
        const long double angle = 2.0L * std::numbers::pi_v<long double> * x / q;
        acc += std::complex<long double>(std::cos(angle), std::sin(angle));
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

// (1/(2p^2)) sum_b b (2 (ab mod p) - p)
ExactRational collapsed_dedekind(std::int64_t a, std::int64_t p) {
    std::int64_t acc = 0;
    for (std::int64_t b = 1; b < p; ++b) acc += b * (2 * ((a * b) % p) - p);
    return ExactRational(acc, 2 * p * p);
}

} // namespace

TEST(TwoTermSum, SpecExamples) {
    EXPECT_NEAR(std::abs(two_term_exponential_sum({0, 0, 4, 2, 7}) - std::complex<double>(7, 0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(two_term_exponential_sum({1, 1, 1, 1, 5})), 0.0, 1e-12);
    const auto g = two_term_exponential_sum({1, 0, 2, 1, 5});
    EXPECT_NEAR(g.real(), std::sqrt(5.0), 1e-12);
    EXPECT_NEAR(g.imag(), 0.0, 1e-12);
}

TEST(TwoTermSum, RejectsBadParams) {
    EXPECT_THROW(two_term_exponential_sum({1, 1, 0, 1, 7}), std::invalid_argument);
    EXPECT_THROW(two_term_exponential_sum({1, 1, 1, 1, 2}), std::invalid_argument);
}

TEST(TwoTermSum, MatchesNaiveAndRowPath) {
    for (std::uint64_t q : {7ULL, 9ULL, 13ULL, 15ULL}) {
        const TwoTermSumTable table(q, 4, 2);
        std::vector<double> row(q);
        for (std::int64_t m = -2; m < static_cast<std::int64_t>(q); ++m) {
            table.row_abs2(m, row);
            for (std::int64_t n = 0; n < static_cast<std::int64_t>(q); ++n) {
                const auto c = table.value(m, n);
                ASSERT_NEAR(std::abs(c - naive_c(m, n, 4, 2, q)), 0.0, 1e-10 * q);
                ASSERT_NEAR(row[n], std::norm(c), 1e-9 * q * q);
            }
        }
    }
}

TEST(TwoTermSum, ConjugateSymmetry) {
    for (std::uint64_t q = 3; q <= 31; ++q) {
        const TwoTermSumTable table(q, 3, 1);
        const auto Q = static_cast<std::int64_t>(q);
        for (std::int64_t m = 0; m < Q; ++m) {
            for (std::int64_t n = 0; n < Q; ++n) {
                ASSERT_NEAR(std::abs(table.value(Q - m, Q - n) - std::conj(table.value(m, n))), 0.0, 1e-9);
            }
        }
    }
}

TEST(TwoTermSum, ParsevalCount) {
    for (std::uint64_t q : {7ULL, 12ULL, 17ULL, 25ULL, 31ULL}) {
        for (auto [k, h] : {std::pair{4U, 2U}, std::pair{5U, 1U}, std::pair{3U, 1U}}) {
            const TwoTermSumTable table(q, k, h);
            std::vector<double> row(q);
            long double total = 0;
            for (std::uint64_t m = 0; m < q; ++m) {
                table.row_abs2(static_cast<std::int64_t>(m), row);
                for (double v : row) total += v;
            }
            std::uint64_t count = 0;
            for (std::uint64_t a = 0; a < q; ++a) {
                for (std::uint64_t b = 0; b < q; ++b) {
                    if (power_mod(a, k, q) == power_mod(b, k, q) && power_mod(a, h, q) == power_mod(b, h, q)) ++count;
                }
            }
            const double expected = static_cast<double>(q * q * count);
            EXPECT_NEAR(static_cast<double>(total), expected, 1e-8 * expected) << "q=" << q;
        }
    }
}

TEST(Dedekind, SpecExamples) {
    EXPECT_EQ(dedekind_sum(1, 2), ExactRational(0));
    EXPECT_EQ(dedekind_sum(1, 3), ExactRational(1, 18));
    EXPECT_EQ(dedekind_sum(2, 5), ExactRational(0));
    EXPECT_EQ(dedekind_sum(1, 5), ExactRational(1, 5));
    for (auto m : {DedekindMethod::direct, DedekindMethod::reciprocity}) {
        EXPECT_EQ(dedekind_sum(1, 3, m), ExactRational(1, 18));
    }
}

TEST(Dedekind, RejectsNonCoprime) {
    EXPECT_THROW(dedekind_sum(2, 4), std::invalid_argument);
    EXPECT_THROW(dedekind_sum(6, 9, DedekindMethod::direct), std::invalid_argument);
    EXPECT_THROW(dedekind_sum(1, 1), std::invalid_argument);
}

TEST(Dedekind, ClosedFormAtOne) {
    for (std::int64_t q = 2; q <= 200; ++q) {
        EXPECT_EQ(dedekind_sum(1, q, DedekindMethod::direct), ExactRational((q - 1) * (q - 2), 12 * q));
    }
}

TEST(Dedekind, ReciprocityEqualsDirect) {
    for (std::int64_t q = 2; q <= 200; ++q) {
        for (std::int64_t h = 1; h < q; ++h) {
            if (std::gcd(h, q) != 1) continue;
            const auto d = dedekind_sum(h, q, DedekindMethod::direct);
            ASSERT_EQ(dedekind_sum(h, q, DedekindMethod::reciprocity), d) << "h=" << h << " q=" << q;
            ASSERT_TRUE((d * ExactRational(4 * q * q)).is_integer());
        }
    }
}

TEST(Dedekind, Symmetries) {
    for (std::int64_t q = 3; q <= 50; ++q) {
        for (std::int64_t h = 1; h < q; ++h) {
            if (std::gcd(h, q) != 1) continue;
            const auto s = dedekind_sum(h, q);
            EXPECT_EQ(dedekind_sum(q - h, q), -s);
            std::int64_t inv = 1;
            while ((inv * h) % q != 1) ++inv;
            EXPECT_EQ(dedekind_sum(inv, q), s);
            EXPECT_EQ(dedekind_sum(h + 5 * q, q), s);
            EXPECT_EQ(dedekind_sum(h - 3 * q, q), s);
        }
    }
}

TEST(DedekindTable, MatchesPointwise) {
    const DedekindTable t(31);
    for (std::uint64_t h = 1; h < 31; ++h) {
        EXPECT_EQ(t.exact(h), dedekind_sum(static_cast<std::int64_t>(h), 31));
        EXPECT_DOUBLE_EQ(t.value(h), t.exact(h).to_double());
    }
}

TEST(DedekindFromL, SpecExamples) {
    EXPECT_EQ(dedekind_from_l_functions(1, 5), ExactRational(1, 5));
    for (std::uint64_t p : {7ULL, 11ULL, 13ULL}) {
        const auto P = static_cast<std::int64_t>(p);
        EXPECT_EQ(dedekind_from_l_functions(P - 1, p), -dedekind_sum(1, P));
    }
    EXPECT_THROW(dedekind_from_l_functions(5, 5), std::domain_error);
}

TEST(DedekindFromL, ExhaustiveAtP101) {
    const OddLValues lv(101);
    for (std::int64_t a = 1; a < 101; ++a) {
        const auto via_l = dedekind_from_l_functions(a, lv);
        ASSERT_EQ(via_l, dedekind_sum(a, 101, DedekindMethod::direct)) << "a=" << a;
        ASSERT_EQ(via_l, collapsed_dedekind(a, 101));
    }
}

TEST(Alpha, SpecExamples) {
    EXPECT_EQ(alpha_constant(5), -1);
    EXPECT_EQ(alpha_constant(13), 3);
    EXPECT_EQ(alpha_constant(17), -1);
    EXPECT_EQ(alpha_constant(29), -5);
}

TEST(Alpha, SumOfTwoSquares) {
    // recorded property: alpha^2 + beta^2 = p for some integer beta
    for (std::uint64_t p : primes_in_range(5, 1000)) {
        if (p % 4 != 1) continue;
        const std::int64_t a = alpha_constant(p);
        const std::int64_t rest = static_cast<std::int64_t>(p) - a * a;
        ASSERT_GE(rest, 0) << "p=" << p;
        const auto b = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(rest))));
        EXPECT_EQ(b * b, rest) << "p=" << p;
    }
}
