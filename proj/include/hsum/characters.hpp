#pragma once

/**
 * @file characters.hpp
 * @brief Dirichlet characters modulo an odd prime, Gauss sums, and the
 *        pi-normalized values |L(1, chi)|^2 * p^3 / pi^2 for odd chi.
 *
 * With g the least primitive root and n = p - 1, the character of index k is
 * chi_k(g^t) = zeta_n^(k t). The exponent k*t mod n is the authoritative
 * (exact) value; complex doubles are derived from a shared root table.
 *
 * For odd chi, |L(1, chi)|^2 = (pi^2 / p^3) |B(chi)|^2 with
 * B(chi) = sum_{a=1}^{p-1} a chi(a). Writing P_t = g^t mod p, one has
 * |B(chi_k)|^2 = R(zeta_n^k) where R_j = sum_t P_{t+j} P_t is the cyclic
 * autocorrelation of P. Sums over odd characters then collapse through
 *     sum_{k odd} zeta_n^(k m) = (n/2) ([m = 0] - [m = n/2])   (mod n).
 */

#include "hsum/core_arith.hpp"
#include "hsum/cyclotomic.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsum {

using ComplexValue = std::complex<double>;

/// Modulus plus a table of the (p-1)-th roots of unity.
class CharacterTable {
public:
    explicit CharacterTable(PrimeModulusPtr modulus) : modulus_(std::move(modulus)) {
        const std::uint32_t n = modulus_->group_order();
        roots_.resize(n);
        for (std::uint32_t j = 0; j < n; ++j) {
            const long double angle = 2.0L * std::numbers::pi_v<long double> * j / n;
            roots_[j] = {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle))};
        }
    }

    const PrimeModulus& modulus() const { return *modulus_; }
    const PrimeModulusPtr& modulus_ptr() const { return modulus_; }
    std::uint64_t p() const { return modulus_->p(); }
    std::uint32_t order() const { return modulus_->group_order(); }
    ComplexValue root(std::uint32_t j) const { return roots_[j % roots_.size()]; }

private:
    PrimeModulusPtr modulus_;
    std::vector<ComplexValue> roots_;
};

using CharacterTablePtr = std::shared_ptr<const CharacterTable>;

inline CharacterTablePtr make_character_table(std::uint64_t p) {
    return std::make_shared<const CharacterTable>(make_prime_modulus(p));
}

class DirichletCharacter {
public:
    DirichletCharacter(CharacterTablePtr table, std::uint32_t index) : table_(std::move(table)) {
        index_ = index % table_->order();
    }

    const CharacterTable& table() const { return *table_; }
    const CharacterTablePtr& table_ptr() const { return table_; }
    std::uint64_t p() const { return table_->p(); }
    std::uint32_t index() const { return index_; }

    bool is_principal() const { return index_ == 0; }
    // chi(-1) = zeta^(k (n/2)) = (-1)^k
    bool is_odd() const { return index_ % 2 == 1; }
    bool is_quadratic() const { return 2 * index_ == table_->order(); }

    /// Multiplicative order of chi.
    std::uint32_t order() const {
        const std::uint32_t n = table_->order();
        return n / std::gcd(n, index_ == 0 ? n : index_);
    }

    DirichletCharacter conjugate() const {
        return {table_, (table_->order() - index_) % table_->order()};
    }

    friend DirichletCharacter operator*(const DirichletCharacter& a, const DirichletCharacter& b) {
        if (a.p() != b.p()) throw std::invalid_argument("character product: moduli differ");
        return {a.table_, (a.index_ + b.index_) % a.table_->order()};
    }

    friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
        return a.p() == b.p() && a.index_ == b.index_;
    }

    /// Exact value as an exponent j with chi(a) = zeta_{p-1}^j; nullopt when p | a.
    std::optional<std::uint32_t> exponent(std::int64_t a) const {
        const auto r = table_->modulus().reduce(a);
        if (r == 0) return std::nullopt;
        const std::uint64_t t = table_->modulus().dlog(r);
        return static_cast<std::uint32_t>((t * index_) % table_->order());
    }

    ComplexValue operator()(std::int64_t a) const {
        const auto e = exponent(a);
        return e ? table_->root(*e) : ComplexValue{0.0, 0.0};
    }

private:
    CharacterTablePtr table_;
    std::uint32_t index_;
};

inline ComplexValue character_value(const DirichletCharacter& chi, std::int64_t a) { return chi(a); }

enum class CharacterFilter { all, odd, even, principal, quadratic, fourth_order };

inline std::vector<DirichletCharacter> select_characters(const CharacterTablePtr& table,
                                                         CharacterFilter filter) {
    const std::uint32_t n = table->order();
    std::vector<DirichletCharacter> out;
    switch (filter) {
    case CharacterFilter::all:
        for (std::uint32_t k = 0; k < n; ++k) out.emplace_back(table, k);
        break;
    case CharacterFilter::odd:
        for (std::uint32_t k = 1; k < n; k += 2) out.emplace_back(table, k);
        break;
    case CharacterFilter::even:
        for (std::uint32_t k = 0; k < n; k += 2) out.emplace_back(table, k);
        break;
    case CharacterFilter::principal:
        out.emplace_back(table, 0);
        break;
    case CharacterFilter::quadratic:
        out.emplace_back(table, n / 2);
        break;
    case CharacterFilter::fourth_order:
        if (n % 4 != 0) {
            throw std::domain_error("no character of order 4 modulo " + std::to_string(table->p()) +
                                    " (4 does not divide p-1)");
        }
        out.emplace_back(table, n / 4);
        out.emplace_back(table, 3 * n / 4);
        break;
    }
    return out;
}

inline std::vector<DirichletCharacter> select_characters(std::uint64_t p, CharacterFilter filter) {
    return select_characters(make_character_table(p), filter);
}

/// tau(chi) = sum_{a=1}^{p-1} chi(a) e(a/p), floating point only.
inline ComplexValue gauss_sum(const DirichletCharacter& chi) {
    if (chi.is_principal()) {
        throw std::invalid_argument("gauss_sum: principal character");
    }
    const std::uint64_t p = chi.p();
    std::complex<long double> acc{0.0L, 0.0L};
    for (std::uint64_t a = 1; a < p; ++a) {
        const auto c = chi(static_cast<std::int64_t>(a));
        const long double angle = 2.0L * std::numbers::pi_v<long double> * a / p;
        acc += std::complex<long double>(c.real(), c.imag()) *
               std::complex<long double>(std::cos(angle), std::sin(angle));
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

/**
 * Per-prime data for the odd-character L-values: the autocorrelation R of
 * the sequence g^t mod p. Built once in O(p^2), then shared read-only.
 */
class OddLValues {
public:
    explicit OddLValues(CharacterTablePtr table) : table_(std::move(table)) {
        const auto& mod = table_->modulus();
        const std::uint32_t n = mod.group_order();
        const auto& pw = mod.exp_table();
        autocorr_.assign(n, 0);
        for (std::uint32_t j = 0; j < n; ++j) {
            std::int64_t acc = 0;
            for (std::uint32_t t = 0; t < n; ++t) {
                const std::uint32_t s = (t + j < n) ? t + j : t + j - n;
                acc += static_cast<std::int64_t>(pw[s]) * pw[t];
            }
            autocorr_[j] = acc;
        }
    }

    explicit OddLValues(std::uint64_t p) : OddLValues(make_character_table(p)) {}

    const CharacterTablePtr& table() const { return table_; }
    std::uint64_t p() const { return table_->p(); }
    const std::vector<std::int64_t>& autocorrelation() const { return autocorr_; }

    /// Lambda(chi) = |sum_a a chi(a)|^2 as an exact element of Z[zeta_{p-1}].
    CyclotomicInteger lambda_exact(std::uint32_t index) const {
        const std::uint32_t n = table_->order();
        std::vector<std::int64_t> powers(n, 0);
        for (std::uint32_t j = 0; j < n; ++j) {
            powers[(static_cast<std::uint64_t>(index) * j) % n] += autocorr_[j];
        }
        return CyclotomicInteger::from_powers<std::int64_t>(n, powers);
    }

    double lambda_value(std::uint32_t index) const {
        const std::uint32_t n = table_->order();
        long double acc = 0;
        for (std::uint32_t j = 0; j < n; ++j) {
            const long double angle =
                2.0L * std::numbers::pi_v<long double> * ((static_cast<std::uint64_t>(index) * j) % n) / n;
            acc += static_cast<long double>(autocorr_[j]) * std::cos(angle);
        }
        return static_cast<double>(acc);
    }

    /// sum over odd chi of chi(a) * Lambda(chi), an exact integer. a must be a unit.
    std::int64_t odd_weighted_sum(std::int64_t a) const {
        const auto& mod = table_->modulus();
        const auto r = mod.reduce(a);
        if (r == 0) throw std::domain_error("odd_weighted_sum: argument divisible by p");
        const std::uint32_t n = mod.group_order();
        const std::uint32_t t = mod.dlog(r);
        const std::uint32_t j0 = (n - t) % n;
        const std::uint32_t j1 = (n / 2 + n - t) % n;
        return static_cast<std::int64_t>(n / 2) * (autocorr_[j0] - autocorr_[j1]);
    }

    /// sum over odd chi of Lambda(chi)^2, exact.
    BigInt odd_lambda_square_sum() const {
        const std::uint32_t n = table_->order();
        // coefficients 0 and n/2 of R * R in the group ring
        __int128 c0 = 0;
        __int128 ch = 0;
        for (std::uint32_t j = 0; j < n; ++j) {
            c0 += static_cast<__int128>(autocorr_[j]) * autocorr_[(n - j) % n];
            ch += static_cast<__int128>(autocorr_[j]) * autocorr_[(n / 2 + n - j) % n];
        }
        return to_bigint(c0 - ch) * (n / 2);
    }

private:
    static BigInt to_bigint(__int128 v) {
        const bool neg = v < 0;
        unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
        BigInt out = static_cast<std::uint64_t>(u >> 64);
        out <<= 64;
        out += static_cast<std::uint64_t>(u & ~std::uint64_t{0});
        return neg ? BigInt(-out) : out;
    }

    CharacterTablePtr table_;
    std::vector<std::int64_t> autocorr_;
};

/// Lambda(chi) = |L(1, chi)|^2 p^3 / pi^2 for odd chi, exact.
inline CyclotomicInteger l_one_sq_pi_normalized(const DirichletCharacter& chi) {
    if (!chi.is_odd()) {
        throw std::invalid_argument("l_one_sq_pi_normalized: character must be odd");
    }
    return OddLValues(chi.table_ptr()).lambda_exact(chi.index());
}

/// exp(3 ln q / ln ln q), the envelope factor shared by every asymptotic in this library.
inline double log_envelope(double q) {
    return std::exp(3.0 * std::log(q) / std::log(std::log(q)));
}

struct FourthMomentResult {
    std::uint64_t p = 0;
    BigInt lambda_square_sum;      // sum_{chi odd} Lambda(chi)^2
    ExactRational exact_value;     // sum_{chi odd} |L(1,chi)|^4 / pi^4 = lambda_square_sum / p^6
    double exact_sum = 0;          // exact_value as a double
    double main_term = 0;          // (5/144)(p-1)(p^2-1)^3 / (p^4 (p^2+1))
    double normalized_residual = 0;
    double ratio = 0;
};

inline FourthMomentResult l_fourth_moment(const OddLValues& values) {
    const std::uint64_t p = values.p();
    FourthMomentResult out;
    out.p = p;
    out.lambda_square_sum = values.odd_lambda_square_sum();
    const BigInt p6 = boost::multiprecision::pow(BigInt(p), 6);
    out.exact_value = ExactRational(out.lambda_square_sum, p6);
    out.exact_sum = out.exact_value.to_double();
    const long double q = static_cast<long double>(p);
    const long double q2m1 = q * q - 1.0L;
    const long double main = 5.0L / 144.0L * (q - 1.0L) * q2m1 * q2m1 * q2m1 / (q * q * q * q * (q * q + 1.0L));
    out.main_term = static_cast<double>(main);
    out.ratio = out.exact_sum / out.main_term;
    out.normalized_residual = static_cast<double>(
        (static_cast<long double>(out.exact_sum) - main) * q / ((q - 1.0L) * log_envelope(static_cast<double>(p))));
    return out;
}

inline FourthMomentResult l_fourth_moment(std::uint64_t p) { return l_fourth_moment(OddLValues(p)); }

} // namespace hsum
