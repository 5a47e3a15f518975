#pragma once

/**
 * @file core_arith.hpp
 * @brief Modular arithmetic over an odd prime, quadratic residues, and the
 *        sawtooth function ((x)).
 *
 * A PrimeModulus owns the discrete-log table for its least primitive root.
 * It is immutable after construction, so one instance can be shared by every
 * worker of a scan.
 */

#include "hsum/rational.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsum {

// Desk-scale primality: trial division up to sqrt(n).
constexpr bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0 || n % 3 == 0) return false;
    for (std::uint64_t d = 5; d * d <= n; d += 6) {
        if (n % d == 0 || n % (d + 2) == 0) return false;
    }
    return true;
}

constexpr std::uint64_t power_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    if (mod == 1) return 0;
    unsigned __int128 result = 1;
    unsigned __int128 b = base % mod;
    while (exp > 0) {
        if (exp & 1U) result = (result * b) % mod;
        b = (b * b) % mod;
        exp >>= 1U;
    }
    return static_cast<std::uint64_t>(result);
}

// Nonnegative residue of a signed integer.
constexpr std::uint64_t reduce_mod(std::int64_t a, std::uint64_t mod) {
    auto m = static_cast<std::int64_t>(mod);
    std::int64_t r = a % m;
    return static_cast<std::uint64_t>(r < 0 ? r + m : r);
}

// Distinct prime factors, ascending.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

/// Least g in [2, p-1] generating (Z/pZ)^*. For p = 2 returns 1.
inline std::uint64_t primitive_root(std::uint64_t p) {
    if (!is_prime(p)) {
        throw std::invalid_argument("primitive_root: " + std::to_string(p) + " is not prime");
    }
    if (p == 2) return 1;
    const auto factors = prime_factors(p - 1);
    for (std::uint64_t g = 2; g < p; ++g) {
        bool generator = true;
        for (auto d : factors) {
            if (power_mod(g, (p - 1) / d, p) == 1) {
                generator = false;
                break;
            }
        }
        if (generator) return g;
    }
    throw std::logic_error("primitive_root: no generator found");  // unreachable for primes
}

class PrimeModulus {
public:
    explicit PrimeModulus(std::uint64_t p) : p_(p) {
        if (p < 3 || !is_prime(p)) {
            throw std::invalid_argument("PrimeModulus: " + std::to_string(p) + " is not an odd prime");
        }
        if (p >= (1ULL << 31)) {
            throw std::invalid_argument("PrimeModulus: modulus too large for table-driven arithmetic");
        }
        g_ = primitive_root(p);
        dlog_.assign(p, 0);
        exp_.assign(p - 1, 0);
        std::uint64_t x = 1;
        for (std::uint32_t t = 0; t + 1 < p; ++t) {
            exp_[t] = static_cast<std::uint32_t>(x);
            dlog_[x] = t;
            x = (x * g_) % p;
        }
    }

    std::uint64_t p() const { return p_; }
    std::uint64_t generator() const { return g_; }
    std::uint32_t group_order() const { return static_cast<std::uint32_t>(p_ - 1); }

    /// t with g^t = a (mod p). a must be a nonzero residue.
    std::uint32_t dlog(std::uint64_t a) const { return dlog_[a % p_]; }
    /// g^t mod p for t in [0, p-2].
    std::uint32_t exp(std::uint32_t t) const { return exp_[t % (p_ - 1)]; }

    std::uint64_t reduce(std::int64_t a) const { return reduce_mod(a, p_); }

    const std::vector<std::uint32_t>& dlog_table() const { return dlog_; }
    const std::vector<std::uint32_t>& exp_table() const { return exp_; }

private:
    std::uint64_t p_;
    std::uint64_t g_ = 0;
    std::vector<std::uint32_t> dlog_;  // dlog_[0] is unused
    std::vector<std::uint32_t> exp_;
};

using PrimeModulusPtr = std::shared_ptr<const PrimeModulus>;

inline PrimeModulusPtr make_prime_modulus(std::uint64_t p) {
    return std::make_shared<const PrimeModulus>(p);
}

/// Inverse of a modulo a prime via the extended Euclidean algorithm.
inline std::uint64_t mod_inverse(std::int64_t a, const PrimeModulus& mod) {
    const auto p = static_cast<std::int64_t>(mod.p());
    std::int64_t r0 = static_cast<std::int64_t>(mod.reduce(a));
    if (r0 == 0) {
        throw std::domain_error("mod_inverse: " + std::to_string(a) + " is divisible by " +
                                std::to_string(p));
    }
    std::int64_t r1 = p;
    std::int64_t s0 = 1;
    std::int64_t s1 = 0;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
    }
    return mod.reduce(s0);
}

/// (a/p) in {-1, 0, 1}, read off the parity of the discrete log.
inline int legendre_symbol(std::int64_t a, const PrimeModulus& mod) {
    const auto r = mod.reduce(a);
    if (r == 0) return 0;
    return (mod.dlog(r) % 2 == 0) ? 1 : -1;
}

/// Euler's criterion a^((p-1)/2) mod p mapped to {-1, 0, 1}. Table-free.
inline int legendre_symbol_euler(std::int64_t a, std::uint64_t p) {
    const auto r = reduce_mod(a, p);
    if (r == 0) return 0;
    return power_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// ((x)) = x - floor(x) - 1/2 off the integers, 0 on them.
inline ExactRational sawtooth(const ExactRational& x) {
    if (x.is_integer()) return ExactRational(0);
    return x - ExactRational(x.floor()) - ExactRational(1, 2);
}

// Primes in [lo, hi], ascending.
inline std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = lo; n <= hi; ++n) {
        if (is_prime(n)) out.push_back(n);
        if (n == UINT64_MAX) break;
    }
    return out;
}

} // namespace hsum
