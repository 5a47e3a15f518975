#pragma once

/**
 * @file cyclotomic.hpp
 * @brief Exact elements of Z[zeta_n], zeta_n = e(1/n).
 *
 * Values are kept in the canonical power basis {1, zeta, ..., zeta^(phi(n)-1)},
 * i.e. reduced modulo the n-th cyclotomic polynomial, so equality is
 * coefficient-wise and rationality is "only the constant term survives".
 */

#include "hsum/rational.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace hsum {

namespace detail {

// Exact division of integer polynomials by a monic divisor (low-order first).
inline std::vector<std::int64_t> divide_monic(std::vector<std::int64_t> num,
                                              const std::vector<std::int64_t>& den) {
    const std::size_t dn = den.size() - 1;
    if (num.size() <= dn) return {0};
    std::vector<std::int64_t> quot(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
        const std::int64_t c = num[i];
        quot[i - dn] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dn; ++j) {
            num[i - dn + j] -= c * den[j];
        }
    }
    for (std::size_t i = 0; i < dn; ++i) {
        if (num[i] != 0) throw std::logic_error("divide_monic: inexact division");
    }
    return quot;
}

} // namespace detail

/// Coefficients of Phi_n, low-order first. Memoized; thread-safe.
inline const std::vector<std::int64_t>& cyclotomic_polynomial(std::uint32_t n) {
    static std::mutex mutex;
    static std::map<std::uint32_t, std::vector<std::int64_t>> cache;
    if (n == 0) throw std::invalid_argument("cyclotomic_polynomial: n must be positive");
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    // x^n - 1 = prod_{d | n} Phi_d
    std::vector<std::int64_t> poly(n + 1, 0);
    poly[0] = -1;
    poly[n] = 1;
    for (std::uint32_t d = 1; d < n; ++d) {
        if (n % d == 0) {
            poly = detail::divide_monic(std::move(poly), cyclotomic_polynomial(d));
        }
    }
    std::lock_guard lock(mutex);
    return cache.emplace(n, std::move(poly)).first->second;
}

class CyclotomicInteger {
public:
    /// Reduces sum_j coeffs[j] * zeta_n^j, j taken mod n.
    template <typename Int>
    static CyclotomicInteger from_powers(std::uint32_t n, std::span<const Int> coeffs) {
        std::vector<BigInt> full(n, BigInt(0));
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            full[j % n] += BigInt(coeffs[j]);
        }
        return CyclotomicInteger(n, std::move(full));
    }

    std::uint32_t order() const { return n_; }
    const std::vector<BigInt>& coefficients() const { return coeffs_; }

    bool is_rational() const {
        for (std::size_t j = 1; j < coeffs_.size(); ++j) {
            if (coeffs_[j] != 0) return false;
        }
        return true;
    }

    std::optional<ExactRational> rational() const {
        if (!is_rational()) return std::nullopt;
        return ExactRational(coeffs_.empty() ? BigInt(0) : coeffs_[0]);
    }

    std::complex<double> to_complex() const {
        long double re = 0;
        long double im = 0;
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (coeffs_[j] == 0) continue;
            const long double c = static_cast<long double>(coeffs_[j]);
            const long double angle = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(j) / n_;
            re += c * std::cos(angle);
            im += c * std::sin(angle);
        }
        return {static_cast<double>(re), static_cast<double>(im)};
    }

    friend bool operator==(const CyclotomicInteger& a, const CyclotomicInteger& b) {
        return a.n_ == b.n_ && a.coeffs_ == b.coeffs_;
    }

private:
    CyclotomicInteger(std::uint32_t n, std::vector<BigInt> full) : n_(n) {
        const auto& phi = cyclotomic_polynomial(n);
        const std::size_t deg = phi.size() - 1;
        for (std::size_t i = full.size(); i-- > deg;) {
            if (full[i] == 0) continue;
            const BigInt c = full[i];
            for (std::size_t j = 0; j <= deg; ++j) {
                if (phi[j] != 0) full[i - deg + j] -= c * phi[j];
            }
        }
        full.resize(deg);
        coeffs_ = std::move(full);
    }

    std::uint32_t n_;
    std::vector<BigInt> coeffs_;
};

} // namespace hsum
