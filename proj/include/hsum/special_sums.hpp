#pragma once

/**
 * @file special_sums.hpp
 * @brief Two-term exponential sums C(m,n,k,h;q), Dedekind sums S(h,q), and
 *        the alpha constant sum_{a <= (p-1)/2} ((a + a^-1)/p).
 */

#include "hsum/characters.hpp"
#include "hsum/core_arith.hpp"
#include "hsum/rational.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsum {

struct ExpSumParams {
    std::int64_t m = 0;
    std::int64_t n = 0;
    unsigned k = 1;
    unsigned h = 1;
    std::uint64_t q = 3;

    void validate() const {
        if (k < 1 || h < 1) throw std::invalid_argument("ExpSumParams: exponents must be >= 1");
        if (q < 3) throw std::invalid_argument("ExpSumParams: modulus must be >= 3");
    }
};

/**
 * Precomputed tables for every C(m, n, k, h; q) at fixed (k, h, q):
 * s_a = a^k mod q, t_a = a^h mod q and the q-th roots of unity.
 */
class TwoTermSumTable {
public:
    TwoTermSumTable(std::uint64_t q, unsigned k, unsigned h) : q_(q), k_(k), h_(h) {
        ExpSumParams{0, 0, k, h, q}.validate();
        s_.resize(q);
        t_.resize(q);
        for (std::uint64_t a = 0; a < q; ++a) {
            s_[a] = static_cast<std::uint32_t>(power_mod(a, k, q));
            t_[a] = static_cast<std::uint32_t>(power_mod(a, h, q));
        }
        cos_.resize(q);
        sin_.resize(q);
        for (std::uint64_t j = 0; j < q; ++j) {
            const long double angle = 2.0L * std::numbers::pi_v<long double> * j / q;
            cos_[j] = static_cast<double>(std::cos(angle));
            sin_[j] = static_cast<double>(std::sin(angle));
        }
    }

    std::uint64_t q() const { return q_; }
    unsigned k() const { return k_; }
    unsigned h() const { return h_; }

    std::complex<double> value(std::int64_t m, std::int64_t n) const {
        const std::uint64_t mr = reduce_mod(m, q_);
        const std::uint64_t nr = reduce_mod(n, q_);
        long double re = 0;
        long double im = 0;
        for (std::uint64_t a = 0; a < q_; ++a) {
            const std::uint64_t idx = (mr * s_[a] + nr * t_[a]) % q_;
            re += cos_[idx];
            im += sin_[idx];
        }
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    /**
     * out[n] = |C(m, n)|^2 for n = 0..q-1. O(q^2), with the per-a phase index
     * advanced by t_a at each step instead of recomputed.
     */
    void row_abs2(std::int64_t m, std::span<double> out) const {
        if (out.size() < q_) throw std::invalid_argument("row_abs2: output too small");
        const std::uint64_t mr = reduce_mod(m, q_);
        std::vector<std::uint32_t> idx(q_);
        for (std::uint64_t a = 0; a < q_; ++a) {
            idx[a] = static_cast<std::uint32_t>((mr * s_[a]) % q_);
        }
        const auto q = static_cast<std::uint32_t>(q_);
        for (std::uint64_t n = 0; n < q_; ++n) {
            double re = 0;
            double im = 0;
            for (std::uint64_t a = 0; a < q_; ++a) {
                std::uint32_t i = idx[a];
                re += cos_[i];
                im += sin_[i];
                i += t_[a];
                idx[a] = i >= q ? i - q : i;
            }
            out[n] = re * re + im * im;
        }
    }

private:
    std::uint64_t q_;
    unsigned k_;
    unsigned h_;
    std::vector<std::uint32_t> s_;
    std::vector<std::uint32_t> t_;
    std::vector<double> cos_;
    std::vector<double> sin_;
};

inline std::complex<double> two_term_exponential_sum(const ExpSumParams& params) {
    params.validate();
    return TwoTermSumTable(params.q, params.k, params.h).value(params.m, params.n);
}

enum class DedekindMethod { direct, reciprocity };

namespace detail {

inline std::uint64_t checked_dedekind_argument(std::int64_t h, std::int64_t q) {
    if (q < 2) throw std::invalid_argument("dedekind_sum: modulus must be >= 2");
    const auto hr = reduce_mod(h, static_cast<std::uint64_t>(q));
    if (std::gcd(hr, static_cast<std::uint64_t>(q)) != 1) {
        throw std::invalid_argument("dedekind_sum: gcd(" + std::to_string(h) + ", " + std::to_string(q) +
                                    ") > 1");
    }
    return hr;
}

} // namespace detail

/// The definitional sum over a = 0..q-1 of ((a/q))((ah/q)).
inline ExactRational dedekind_sum_direct(std::int64_t h, std::int64_t q) {
    const auto hr = detail::checked_dedekind_argument(h, q);
    ExactRational acc(0);
    for (std::int64_t a = 0; a < q; ++a) {
        const ExactRational x = sawtooth(ExactRational(a, q));
        if (x == ExactRational(0)) continue;
        acc += x * sawtooth(ExactRational(static_cast<std::int64_t>((a * hr) % q), q));
    }
    return acc;
}

/**
 * Euclidean recursion on S(h,k) + S(k,h) = -1/4 + (h^2 + k^2 + 1)/(12hk),
 * with S(h,k) periodic in h mod k and S(1,k) = (k-1)(k-2)/(12k).
 */
inline ExactRational dedekind_sum_reciprocity(std::int64_t h, std::int64_t q) {
    BigInt hh = detail::checked_dedekind_argument(h, q);
    BigInt kk = q;
    ExactRational acc(0);
    int sign = 1;
    while (true) {
        hh %= kk;
        if (hh == 0) break;  // only reachable for k = 1, where S = 0
        if (hh == 1) {
            acc += ExactRational(sign * (kk - 1) * (kk - 2), 12 * kk);
            break;
        }
        acc += ExactRational(sign) *
               (ExactRational(-1, 4) + ExactRational(hh * hh + kk * kk + 1, 12 * hh * kk));
        sign = -sign;
        BigInt next = kk % hh;
        kk = hh;
        hh = next;
    }
    return acc;
}

inline ExactRational dedekind_sum(std::int64_t h, std::int64_t q,
                                  DedekindMethod method = DedekindMethod::reciprocity) {
    return method == DedekindMethod::direct ? dedekind_sum_direct(h, q) : dedekind_sum_reciprocity(h, q);
}

/// S(h, p) for every unit h, built once per prime by the reciprocity path.
class DedekindTable {
public:
    explicit DedekindTable(std::uint64_t p) : p_(p) {
        if (p < 3 || !is_prime(p)) throw std::invalid_argument("DedekindTable: p must be an odd prime");
        exact_.assign(p, ExactRational(0));
        values_.assign(p, 0.0);
        for (std::uint64_t h = 1; h < p; ++h) {
            exact_[h] = dedekind_sum_reciprocity(static_cast<std::int64_t>(h), static_cast<std::int64_t>(p));
            values_[h] = exact_[h].to_double();
        }
    }

    std::uint64_t p() const { return p_; }
    const ExactRational& exact(std::uint64_t h) const { return exact_[h % p_]; }
    double value(std::uint64_t h) const { return values_[h % p_]; }
    std::span<const double> values() const { return values_; }

private:
    std::uint64_t p_;
    std::vector<ExactRational> exact_;
    std::vector<double> values_;
};

/**
 * S(a, p) through the odd-character L-values:
 *   S(a, p) = (1/pi^2) (p/(p-1)) sum_{chi odd} chi(a) |L(1, chi)|^2
 *           = sum_{chi odd} chi(a) Lambda(chi) / (p^2 (p-1)).
 */
inline ExactRational dedekind_from_l_functions(std::int64_t a, const OddLValues& values) {
    const auto p = static_cast<std::int64_t>(values.p());
    if (reduce_mod(a, values.p()) == 0) {
        throw std::domain_error("dedekind_from_l_functions: a is divisible by p");
    }
    const std::int64_t weighted = values.odd_weighted_sum(a);
    return ExactRational(BigInt(weighted), BigInt(p) * p * (p - 1));
}

inline ExactRational dedekind_from_l_functions(std::int64_t a, std::uint64_t p) {
    return dedekind_from_l_functions(a, OddLValues(p));
}

/// alpha = sum_{a=1}^{(p-1)/2} ((a + a^-1) / p).
inline std::int64_t alpha_constant(const PrimeModulus& mod) {
    const auto p = static_cast<std::int64_t>(mod.p());
    std::int64_t acc = 0;
    for (std::int64_t a = 1; a <= (p - 1) / 2; ++a) {
        acc += legendre_symbol(a + static_cast<std::int64_t>(mod_inverse(a, mod)), mod);
    }
    return acc;
}

inline std::int64_t alpha_constant(std::uint64_t p) { return alpha_constant(PrimeModulus(p)); }

} // namespace hsum
