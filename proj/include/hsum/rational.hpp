#pragma once

/**
 * @file rational.hpp
 * @brief Exact rationals in lowest terms.
 *
 * Dedekind sums and the pi-normalized L-quantities have numerators that grow
 * like q^2, so everything here sits on arbitrary-precision integers.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hsum {

using BigInt = boost::multiprecision::cpp_int;

class ExactRational {
public:
    ExactRational() = default;
    ExactRational(std::int64_t value) : v_(value) {}  // NOLINT: implicit on purpose
    ExactRational(const BigInt& value) : v_(value) {} // NOLINT
    ExactRational(const BigInt& num, const BigInt& den) {
        if (den == 0) {
            throw std::domain_error("ExactRational: zero denominator");
        }
        // cpp_rational rejects a negative denominator
        v_ = den < 0 ? boost::multiprecision::cpp_rational(-num, -den) : boost::multiprecision::cpp_rational(num, den);
    }
    ExactRational(std::int64_t num, std::int64_t den) : ExactRational(BigInt(num), BigInt(den)) {}

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    bool is_integer() const { return denominator() == 1; }

    // Largest integer <= *this.
    BigInt floor() const {
        BigInt n = numerator();
        BigInt d = denominator();
        BigInt q = n / d;  // truncates toward zero
        if (n < 0 && q * d != n) {
            q -= 1;
        }
        return q;
    }

    double to_double() const { return static_cast<double>(v_); }
    long double to_long_double() const {
        // cpp_rational -> long double goes through the numerator/denominator pair
        return static_cast<long double>(numerator()) / static_cast<long double>(denominator());
    }

    /// "num/den", or just "num" when the denominator is 1.
    std::string to_string() const {
        if (is_integer()) {
            return numerator().str();
        }
        return numerator().str() + "/" + denominator().str();
    }

    /// Parses "num/den" or "num". Throws std::invalid_argument on malformed input.
    static ExactRational parse(std::string_view text) {
        auto slash = text.find('/');
        try {
            if (slash == std::string_view::npos) {
                return ExactRational(BigInt(std::string(text)));
            }
            return ExactRational(BigInt(std::string(text.substr(0, slash))),
                                 BigInt(std::string(text.substr(slash + 1))));
        } catch (const std::runtime_error&) {
            throw std::invalid_argument("ExactRational: cannot parse '" + std::string(text) + "'");
        }
    }

    ExactRational operator-() const { return ExactRational(boost::multiprecision::cpp_rational(-v_)); }
    ExactRational& operator+=(const ExactRational& rhs) { v_ += rhs.v_; return *this; }
    ExactRational& operator-=(const ExactRational& rhs) { v_ -= rhs.v_; return *this; }
    ExactRational& operator*=(const ExactRational& rhs) { v_ *= rhs.v_; return *this; }
    ExactRational& operator/=(const ExactRational& rhs) {
        if (rhs.v_ == 0) {
            throw std::domain_error("ExactRational: division by zero");
        }
        v_ /= rhs.v_;
        return *this;
    }

    friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
    friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
    friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
    friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }

    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.v_ == b.v_; }
    friend bool operator<(const ExactRational& a, const ExactRational& b) { return a.v_ < b.v_; }
    friend bool operator>(const ExactRational& a, const ExactRational& b) { return b < a; }
    friend bool operator<=(const ExactRational& a, const ExactRational& b) { return !(b < a); }
    friend bool operator>=(const ExactRational& a, const ExactRational& b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, const ExactRational& r) {
        return os << r.to_string();
    }

private:
    explicit ExactRational(boost::multiprecision::cpp_rational v) : v_(std::move(v)) {}

    boost::multiprecision::cpp_rational v_{0};
};

} // namespace hsum
