#pragma once

// Result records shared by the moment engine, the hybrid-mean scans and the
// report writer.

#include "hsum/rational.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace hsum {

enum class Verdict { match, mismatch, bound_ok, bound_fail };

inline std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::match: return "MATCH";
    case Verdict::mismatch: return "MISMATCH";
    case Verdict::bound_ok: return "BOUND_OK";
    case Verdict::bound_fail: return "BOUND_FAIL";
    }
    return "?";
}

inline Verdict parse_verdict(std::string_view s) {
    if (s == "MATCH") return Verdict::match;
    if (s == "MISMATCH") return Verdict::mismatch;
    if (s == "BOUND_OK") return Verdict::bound_ok;
    if (s == "BOUND_FAIL") return Verdict::bound_fail;
    throw std::invalid_argument("unknown verdict '" + std::string(s) + "'");
}

inline bool is_passing(Verdict v) { return v == Verdict::match || v == Verdict::bound_ok; }

/// Either an exact rational or a float.
using ReportValue = std::variant<ExactRational, double>;

inline double to_double(const ReportValue& v) {
    return std::holds_alternative<double>(v) ? std::get<double>(v) : std::get<ExactRational>(v).to_double();
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline std::string format_value(const ReportValue& v) {
    if (const auto* r = std::get_if<ExactRational>(&v)) return r->to_string();
    return format_double(std::get<double>(v));
}

enum class LemmaId { lemma21, eq2, lemma22, lemma23, lemma24, lemma25, lemma26, lemma27, calibration };

inline std::string_view to_string(LemmaId id) {
    switch (id) {
    case LemmaId::lemma21: return "lemma21";
    case LemmaId::eq2: return "eq2";
    case LemmaId::lemma22: return "lemma22";
    case LemmaId::lemma23: return "lemma23";
    case LemmaId::lemma24: return "lemma24";
    case LemmaId::lemma25: return "lemma25";
    case LemmaId::lemma26: return "lemma26";
    case LemmaId::lemma27: return "lemma27";
    case LemmaId::calibration: return "calibration";
    }
    return "?";
}

struct MomentReport {
    std::uint64_t p = 0;
    LemmaId lemma = LemmaId::lemma21;
    ReportValue brute = ExactRational(0);
    ReportValue closed = ExactRational(0);
    Verdict verdict = Verdict::mismatch;
    std::optional<double> normalized_residual;
    std::string witness;
    std::int64_t runtime_ms = 0;

    /// brute / closed: exact when both sides are exact.
    ReportValue ratio() const {
        const auto* b = std::get_if<ExactRational>(&brute);
        const auto* c = std::get_if<ExactRational>(&closed);
        if (b && c) {
            if (*c == ExactRational(0)) {
                return *b == ExactRational(0) ? ReportValue(ExactRational(1))
                                              : ReportValue(std::numeric_limits<double>::infinity());
            }
            return ExactRational(*b / *c);
        }
        const double cd = to_double(closed);
        if (cd == 0.0) return to_double(brute) == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        return to_double(brute) / cd;
    }
};

enum class ResidualTarget { t11, t12, wangpan31, wangpan42, lemma26 };

inline std::string_view to_string(ResidualTarget t) {
    switch (t) {
    case ResidualTarget::t11: return "t11";
    case ResidualTarget::t12: return "t12";
    case ResidualTarget::wangpan31: return "wangpan31";
    case ResidualTarget::wangpan42: return "wangpan42";
    case ResidualTarget::lemma26: return "lemma26";
    }
    return "?";
}

struct ResidualRecord {
    ResidualTarget target = ResidualTarget::t11;
    std::uint64_t p = 0;
    unsigned residue_class = 0;  // p mod 8
    double mean_value = 0;
    double main_term = 0;
    double ratio = 0;
    double normalized_residual = 0;
    Verdict verdict = Verdict::bound_ok;
    std::int64_t runtime_ms = 0;
};

} // namespace hsum
