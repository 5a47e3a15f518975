#pragma once

/**
 * @file prime_ntt.hpp
 * @brief Exact prime-length number-theoretic transforms.
 *
 * A length-p DFT over Z/QZ needs a primitive p-th root of unity, i.e. p | Q-1.
 * PrimeLengthNtt uses Rader's reduction: for a generator g of (Z/pZ)^*,
 *
 *     X_{g^r} = x_0 + sum_s x_{g^s} w^{g^{r+s}}    (r, s mod p-1),
 *
 * a cyclic convolution of length p-1, computed with a radix-2 NTT of length
 * L >= 2(p-1) - 1. The field prime Q is searched in the form c*p*L + 1 so it
 * carries both roots. Everything is exact as long as the true integer result
 * lies in [0, Q).
 */

#include "hsum/core_arith.hpp"

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hsum::ntt {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mul_mod(u64 a, u64 b, u64 q) { return static_cast<u64>(static_cast<u128>(a) * b % q); }

inline u64 pow_mod(u64 base, u64 exp, u64 q) {
    u64 result = 1 % q;
    base %= q;
    while (exp > 0) {
        if (exp & 1U) result = mul_mod(result, base, q);
        base = mul_mod(base, base, q);
        exp >>= 1U;
    }
    return result;
}

/// Deterministic Miller-Rabin for 64-bit integers.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % small == 0) return n == small;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1U) == 0) {
        d >>= 1U;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

struct NttField {
    u64 q = 0;
    u64 generator = 0;  // primitive root of Z/qZ

    /// An element of multiplicative order exactly `order` (order | q-1).
    u64 root_of_order(u64 order) const {
        if ((q - 1) % order != 0) throw std::invalid_argument("NttField: order does not divide q-1");
        return pow_mod(generator, (q - 1) / order, q);
    }
};

/// Smallest prime q = c * step + 1 with q > lower_bound.
inline NttField find_ntt_field(u64 step, u64 lower_bound) {
    constexpr u64 limit = 1ULL << 62;
    u64 c = lower_bound / step + 1;
    for (; c * step + 1 < limit; ++c) {
        const u64 q = c * step + 1;
        if (!is_prime_u64(q)) continue;
        std::vector<u64> factors = prime_factors(c);
        for (u64 f : prime_factors(step)) factors.push_back(f);
        std::sort(factors.begin(), factors.end());
        factors.erase(std::unique(factors.begin(), factors.end()), factors.end());
        for (u64 g = 2; g < q; ++g) {
            bool ok = true;
            for (u64 f : factors) {
                if (pow_mod(g, (q - 1) / f, q) == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) return {q, g};
        }
    }
    throw std::overflow_error("find_ntt_field: no suitable prime below 2^62");
}

/// In-place iterative radix-2 NTT; `root` must have order a.size().
inline void radix2_ntt(std::span<u64> a, u64 root, u64 q) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1U;
        for (; j & bit; bit >>= 1U) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1U) {
        const u64 w_len = pow_mod(root, n / len, q);
        for (std::size_t i = 0; i < n; i += len) {
            u64 w = 1;
            for (std::size_t j = 0; j < len / 2; ++j) {
                const u64 u = a[i + j];
                const u64 v = mul_mod(a[i + j + len / 2], w, q);
                a[i + j] = u + v >= q ? u + v - q : u + v;
                a[i + j + len / 2] = u >= v ? u - v : u + q - v;
                w = mul_mod(w, w_len, q);
            }
        }
    }
}

/// O(n^2) reference DFT: X_k = sum_j x_j root^(jk).
inline std::vector<u64> naive_dft(std::span<const u64> x, u64 root, u64 q) {
    const std::size_t n = x.size();
    std::vector<u64> out(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        const u64 wk = pow_mod(root, k, q);
        u64 w = 1;
        u64 acc = 0;
        for (std::size_t j = 0; j < n; ++j) {
            acc = (acc + mul_mod(x[j], w, q)) % q;
            w = mul_mod(w, wk, q);
        }
        out[k] = acc;
    }
    return out;
}

class PrimeLengthNtt {
public:
    /// Transforms of length p over a field with every exact result below `bound`.
    PrimeLengthNtt(u64 p, u64 bound) : p_(p) {
        if (p < 3 || !is_prime(p)) throw std::invalid_argument("PrimeLengthNtt: length must be an odd prime");
        const u64 n = p - 1;
        conv_len_ = 1;
        while (conv_len_ < 2 * n - 1) conv_len_ <<= 1U;
        field_ = find_ntt_field(p * conv_len_, std::max<u64>(bound, p));
        const u64 q = field_.q;
        omega_ = field_.root_of_order(p);
        omega_inv_ = pow_mod(omega_, p - 1, q);
        conv_root_ = field_.root_of_order(conv_len_);
        conv_root_inv_ = pow_mod(conv_root_, conv_len_ - 1, q);
        conv_len_inv_ = pow_mod(conv_len_ % q, q - 2, q);
        p_inv_ = pow_mod(p % q, q - 2, q);

        g_ = primitive_root(p);
        gpow_.resize(n);
        u64 x = 1;
        for (u64 t = 0; t < n; ++t) {
            gpow_[t] = x;
            x = x * g_ % p;
        }
        kernel_fwd_ = make_kernel(omega_);
        kernel_inv_ = make_kernel(omega_inv_);
    }

    u64 length() const { return p_; }
    u64 modulus() const { return field_.q; }
    u64 omega() const { return omega_; }

    std::vector<u64> forward(std::span<const u64> x) const { return transform(x, kernel_fwd_); }

    /// Inverse transform including the 1/p factor.
    std::vector<u64> inverse(std::span<const u64> x) const {
        auto out = transform(x, kernel_inv_);
        for (auto& v : out) v = mul_mod(v, p_inv_, field_.q);
        return out;
    }

private:
    // NTT of c_m = w^{g^m}, zero-padded to conv_len_.
    std::vector<u64> make_kernel(u64 w) const {
        const u64 n = p_ - 1;
        std::vector<u64> c(conv_len_, 0);
        for (u64 m = 0; m < n; ++m) c[m] = pow_mod(w, gpow_[m], field_.q);
        // linear convolution of a (length n) with c extended periodically over
        // 2n-1 entries lands the cyclic result in indices n-1 .. 2n-2
        for (u64 m = n; m < 2 * n - 1; ++m) c[m] = c[m - n];
        radix2_ntt(c, conv_root_, field_.q);
        return c;
    }

    std::vector<u64> transform(std::span<const u64> x, const std::vector<u64>& kernel) const {
        if (x.size() != p_) throw std::invalid_argument("PrimeLengthNtt: wrong input length");
        const u64 q = field_.q;
        const u64 n = p_ - 1;
        // reversed layout: linear (a * c)[n-1+r] = sum_s x_{g^s} c_{r+s}
        std::vector<u64> a(conv_len_, 0);
        for (u64 s = 0; s < n; ++s) a[n - 1 - s] = x[gpow_[s]] % q;
        radix2_ntt(a, conv_root_, q);
        for (std::size_t i = 0; i < conv_len_; ++i) a[i] = mul_mod(a[i], kernel[i], q);
        radix2_ntt(a, conv_root_inv_, q);

        u64 total = 0;
        for (u64 j = 0; j < p_; ++j) total = (total + x[j] % q) % q;
        std::vector<u64> out(p_, 0);
        out[0] = total;
        const u64 x0 = x[0] % q;
        for (u64 r = 0; r < n; ++r) {
            const u64 conv = mul_mod(a[n - 1 + r], conv_len_inv_, q);
            out[gpow_[r]] = (conv + x0) % q;
        }
        return out;
    }

    u64 p_;
    u64 conv_len_ = 1;
    NttField field_;
    u64 omega_ = 0;
    u64 omega_inv_ = 0;
    u64 conv_root_ = 0;
    u64 conv_root_inv_ = 0;
    u64 conv_len_inv_ = 0;
    u64 p_inv_ = 0;
    u64 g_ = 0;
    std::vector<u64> gpow_;
    std::vector<u64> kernel_fwd_;
    std::vector<u64> kernel_inv_;
};

/**
 * D[x][y] = sum_{u,v} grid[u+x][v+y] * grid[u][v] (indices mod p) for a
 * p-by-p grid of nonnegative integers, computed exactly through
 * D^(xi,eta) = F(xi,eta) F(-xi,-eta). `bound` must exceed every entry of D.
 */
inline std::vector<u64> cyclic_autocorrelation_2d(std::span<const u64> grid, u64 p, u64 bound) {
    if (grid.size() != p * p) throw std::invalid_argument("cyclic_autocorrelation_2d: grid must be p*p");
    PrimeLengthNtt ntt(p, bound);
    const u64 q = ntt.modulus();

    auto transform_2d = [&](std::vector<u64> m, bool inverse) {
        std::vector<u64> line(p);
        for (u64 r = 0; r < p; ++r) {
            auto row = std::span<const u64>(m).subspan(r * p, p);
            auto t = inverse ? ntt.inverse(row) : ntt.forward(row);
            std::copy(t.begin(), t.end(), m.begin() + static_cast<std::ptrdiff_t>(r * p));
        }
        for (u64 c = 0; c < p; ++c) {
            for (u64 r = 0; r < p; ++r) line[r] = m[r * p + c];
            auto t = inverse ? ntt.inverse(line) : ntt.forward(line);
            for (u64 r = 0; r < p; ++r) m[r * p + c] = t[r];
        }
        return m;
    };

    std::vector<u64> f = transform_2d(std::vector<u64>(grid.begin(), grid.end()), false);
    std::vector<u64> prod(p * p);
    for (u64 xi = 0; xi < p; ++xi) {
        for (u64 eta = 0; eta < p; ++eta) {
            const u64 mirror = ((p - xi) % p) * p + (p - eta) % p;
            prod[xi * p + eta] = mul_mod(f[xi * p + eta], f[mirror], q);
        }
    }
    return transform_2d(std::move(prod), true);
}

} // namespace hsum::ntt
