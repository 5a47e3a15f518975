#pragma once

// Command-line front end. run_command returns the process exit code:
//   0  every verdict MATCH or BOUND_OK
//   1  at least one MISMATCH or BOUND_FAIL (the report is still written)
//   2  usage, precondition or I/O error

#include "hsum/golden.hpp"
#include "hsum/report.hpp"
#include "hsum/scan.hpp"
#include "hsum/special_sums.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace hsum::cli {

struct RunConfig {
    std::string command;
    std::string target;
    std::optional<std::uint64_t> p_min;
    std::optional<std::uint64_t> p_max;
    std::string format = "csv";
    std::string out_path;
    unsigned workers = std::max(1U, std::thread::hardware_concurrency());
    double tolerance = 1e-6;
    double relative_tolerance = 1e-8;
    std::string golden_dir = default_golden_dir();
    bool use_golden_bounds = true;
    bool no_timing = false;
    bool inject_fault = false;
    std::string variant;  // wangpan: "31", "42" or both when empty
    std::string golden_target;

    // dedekind / expsum
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::int64_t h_arg = 0;
    std::int64_t q_arg = 0;
    unsigned k = 1;
    unsigned h = 1;
    std::string method = "reciprocity";
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t next_prime_at_least(std::uint64_t n) {
    while (!is_prime(n)) ++n;
    return n;
}

inline std::uint64_t prev_prime_at_most(std::uint64_t n) {
    while (n > 2 && !is_prime(n)) --n;
    return n;
}

/// Resolves the prime range for `target`, snapping non-prime bounds inward.
inline std::pair<std::uint64_t, std::uint64_t> resolve_range(const RunConfig& cfg, ScanTarget target,
                                                             std::ostream& err) {
    const auto def = default_range(target);
    std::uint64_t lo = cfg.p_min.value_or(def ? def->p_min : 5);
    std::uint64_t hi = cfg.p_max.value_or(def ? def->p_max : lo);
    if (lo < 5) throw UsageError("--pmin must be >= 5");
    if (!is_prime(lo)) {
        const auto snapped = next_prime_at_least(lo);
        err << "warning: --pmin " << lo << " is not prime, using " << snapped << '\n';
        lo = snapped;
    }
    if (hi >= 5 && !is_prime(hi)) {
        const auto snapped = prev_prime_at_most(hi);
        err << "warning: --pmax " << hi << " is not prime, using " << snapped << '\n';
        hi = snapped;
    }
    return {lo, hi};
}

inline bool all_passing(const std::vector<ScanRecord>& records) {
    return std::all_of(records.begin(), records.end(),
                       [](const ScanRecord& r) { return is_passing(record_verdict(r)); });
}

inline void print_notes(const std::vector<ScanRecord>& records, std::ostream& err) {
    for (const auto& rec : records) {
        const auto* m = std::get_if<MomentReport>(&rec);
        if (m == nullptr || m->witness.empty()) continue;
        if (m->lemma == LemmaId::lemma22 || !is_passing(m->verdict)) {
            err << "note: " << to_string(m->lemma) << " p=" << m->p << ' ' << to_string(m->verdict) << ' '
                << m->witness << '\n';
        }
    }
}

inline ScanOptions scan_options(const RunConfig& cfg) {
    ScanOptions opt;
    opt.record_timing = !cfg.no_timing;
    opt.tolerance = cfg.tolerance;
    opt.relative_tolerance = cfg.relative_tolerance;
    return opt;
}

inline std::vector<ScanRecord> run_target(const RunConfig& cfg, ScanTarget target, std::ostream& err) {
    const auto [lo, hi] = resolve_range(cfg, target, err);
    GoldenConstants constants;
    if (cfg.use_golden_bounds) constants = GoldenStore(cfg.golden_dir).read_constants();
    return scan_with_constants(lo, hi, target, cfg.workers, scan_options(cfg), constants);
}

inline int write_and_score(const RunConfig& cfg, const std::vector<ScanRecord>& records, std::ostream& out,
                           std::ostream& err) {
    const auto rows = to_rows(records);
    const auto format = parse_report_format(cfg.format);
    if (cfg.out_path.empty() || cfg.out_path == "-") {
        write_report(out, rows, format);
    } else {
        emit_report(rows, format, cfg.out_path);
    }
    print_notes(records, err);
    return all_passing(records) ? 0 : 1;
}

inline int cmd_dedekind(const RunConfig& cfg, std::ostream& out) {
    DedekindMethod method = DedekindMethod::reciprocity;
    if (cfg.method == "direct") {
        method = DedekindMethod::direct;
    } else if (cfg.method != "reciprocity") {
        throw UsageError("--method must be direct or reciprocity");
    }
    const auto s = dedekind_sum(cfg.h_arg, cfg.q_arg, method);
    if (cfg.format == "json") {
        nlohmann::json j;
        const auto num = s.numerator();
        const auto den = s.denominator();
        if (num >= INT64_MIN && num <= INT64_MAX && den <= INT64_MAX) {
            j["num"] = static_cast<std::int64_t>(num);
            j["den"] = static_cast<std::int64_t>(den);
        } else {
            j["num"] = num.str();
            j["den"] = den.str();
        }
        out << j.dump() << '\n';
    } else {
        out << s << '\n';
    }
    return 0;
}

inline int cmd_expsum(const RunConfig& cfg, std::ostream& out) {
    if (cfg.q_arg < 3) throw UsageError("q must be >= 3");
    const auto c = two_term_exponential_sum(
        ExpSumParams{cfg.m, cfg.n, cfg.k, cfg.h, static_cast<std::uint64_t>(cfg.q_arg)});
    if (cfg.format == "json") {
        nlohmann::json j;
        j["re"] = c.real();
        j["im"] = c.imag();
        j["abs"] = std::abs(c);
        out << j.dump() << '\n';
    } else {
        out << format_double(c.real()) << ' ' << format_double(c.imag()) << ' ' << format_double(std::abs(c))
            << '\n';
    }
    return 0;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto target = parse_scan_target(cfg.target);
    return write_and_score(cfg, run_target(cfg, target, err), out, err);
}

inline int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<ScanTarget> targets;
    if (cfg.target == "t11") {
        targets = {ScanTarget::t11};
    } else if (cfg.target == "t12") {
        targets = {ScanTarget::t12};
    } else if (cfg.target == "wangpan") {
        if (cfg.variant.empty() || cfg.variant == "31") targets.push_back(ScanTarget::wangpan31);
        if (cfg.variant.empty() || cfg.variant == "42") targets.push_back(ScanTarget::wangpan42);
        if (targets.empty()) throw UsageError("--variant must be 31 or 42");
    } else {
        throw UsageError("scan target must be t11, t12 or wangpan");
    }
    std::vector<ScanRecord> all;
    for (auto t : targets) {
        auto recs = run_target(cfg, t, err);
        all.insert(all.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
    }
    return write_and_score(cfg, all, out, err);
}

inline std::vector<GoldenRange> golden_ranges(const RunConfig& cfg) {
    auto ranges = default_golden_ranges();
    if (cfg.golden_target.empty()) return ranges;
    const auto t = parse_scan_target(cfg.golden_target);
    std::erase_if(ranges, [t](const GoldenRange& r) { return r.target != t; });
    return ranges;
}

inline int cmd_golden(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const GoldenStore store(cfg.golden_dir);
    ScanOptions opt = scan_options(cfg);
    opt.record_timing = false;
    if (cfg.target == "record") {
        GoldenConstants constants = store.read_constants();
        for (const auto& r : golden_ranges(cfg)) {
            const auto recs = prime_scan(r.p_min, r.p_max, r.target, cfg.workers, opt);
            store.write_table(r.target, recs);
            // drop the old constants of this target before folding in the new ones
            for (auto p : {3ULL, 1ULL}) {
                if (const auto name = constant_name(r.target, p)) constants.erase(*name);
            }
            calibrate_constants(r.target, recs, constants);
            out << "recorded " << to_string(r.target) << ": " << recs.size() << " rows\n";
        }
        store.write_constants(constants);
        return 0;
    }
    if (cfg.target != "check") throw UsageError("golden action must be record or check");
    const auto constants = store.read_constants();
    std::size_t n_diffs = 0;
    for (const auto& r : golden_ranges(cfg)) {
        const auto stored = store.read_table(r.target);
        const auto recs = scan_with_constants(r.p_min, r.p_max, r.target, cfg.workers, opt, constants);
        const auto diffs = compare_with_golden(r.target, recs, stored);
        for (const auto& d : diffs) err << "golden: " << to_string(d.target) << " p=" << d.p << ": " << d.what << '\n';
        n_diffs += diffs.size();
        out << to_string(r.target) << ": " << recs.size() << " rows, " << diffs.size() << " differences\n";
    }
    return n_diffs == 0 ? 0 : 1;
}

struct FaultGuard {
    explicit FaultGuard(bool on) : saved_(fault::closed_form_42_p3_offset()) {
        if (on) fault::closed_form_42_p3_offset() = 1;
    }
    ~FaultGuard() { fault::closed_form_42_p3_offset() = saved_; }
    FaultGuard(const FaultGuard&) = delete;
    FaultGuard& operator=(const FaultGuard&) = delete;

private:
    std::int64_t saved_;
};

inline void add_run_flags(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--pmin", cfg.p_min, "smallest prime (snapped up to a prime)");
    sub->add_option("--pmax", cfg.p_max, "largest prime (snapped down to a prime)");
    sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out_path, "output file (default stdout)");
    sub->add_option("--tolerance", cfg.tolerance, "absolute tolerance for vanishing sums");
    sub->add_flag("--no-timing", cfg.no_timing, "write 0 in the runtime_ms column");
    sub->add_flag("--inject-fault", cfg.inject_fault, "perturb the k=4,h=2 closed form (mutation testing)");
    sub->add_flag("!--no-golden-bounds", cfg.use_golden_bounds, "ignore the recorded envelope constants");
}

} // namespace detail

/// `args` excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    RunConfig cfg;
    CLI::App app{"hybrid power means of two-term exponential sums and Dedekind sums", "hsum"};
    app.require_subcommand(1);
    app.fallthrough();  // --golden-dir may follow the subcommand
    app.add_option("--golden-dir", cfg.golden_dir, "golden file directory (env HSUM_GOLDEN_DIR)");

    auto* ded = app.add_subcommand("dedekind", "exact Dedekind sum S(h,q)");
    ded->set_help_flag("--help", "print this help");  // frees -h for the positional h
    ded->add_option("h", cfg.h_arg)->required();
    ded->add_option("q", cfg.q_arg)->required();
    ded->add_option("--method", cfg.method)->check(CLI::IsMember({"direct", "reciprocity"}));
    ded->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));

    auto* exs = app.add_subcommand("expsum", "C(m,n,k,h;q) by direct summation");
    exs->set_help_flag("--help", "print this help");
    exs->add_option("m", cfg.m)->required();
    exs->add_option("n", cfg.n)->required();
    exs->add_option("k", cfg.k)->required()->check(CLI::PositiveNumber);
    exs->add_option("h", cfg.h)->required()->check(CLI::PositiveNumber);
    exs->add_option("q", cfg.q_arg)->required();
    exs->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}));

    auto* ver = app.add_subcommand("verify", "exact and bounded checks over a prime range");
    ver->add_option("target", cfg.target)
        ->required()
        ->check(CLI::IsMember(
            {"lemma21", "lemma22", "lemma23", "lemma24", "lemma25", "lemma26", "lemma27", "eq2", "calibration"}));
    detail::add_run_flags(ver, cfg);

    auto* scn = app.add_subcommand("scan", "residual scans of the hybrid means");
    scn->add_option("target", cfg.target)->required()->check(CLI::IsMember({"t11", "t12", "wangpan"}));
    scn->add_option("--variant", cfg.variant, "wangpan variant")->check(CLI::IsMember({"31", "42"}));
    detail::add_run_flags(scn, cfg);

    auto* gold = app.add_subcommand("golden", "record or check the golden files");
    gold->add_option("action", cfg.target)->required()->check(CLI::IsMember({"record", "check"}));
    gold->add_option("--target", cfg.golden_target, "restrict to one target");
    gold->add_option("--workers", cfg.workers)->check(CLI::PositiveNumber);

    if (cfg.format.empty()) cfg.format = "csv";
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        detail::FaultGuard guard(cfg.inject_fault);
        if (ded->parsed()) {
            if (cfg.format == "csv") cfg.format = "text";
            return detail::cmd_dedekind(cfg, out);
        }
        if (exs->parsed()) {
            if (cfg.format == "csv") cfg.format = "text";
            return detail::cmd_expsum(cfg, out);
        }
        if (ver->parsed()) return detail::cmd_verify(cfg, out, err);
        if (scn->parsed()) return detail::cmd_scan(cfg, out, err);
        if (gold->parsed()) return detail::cmd_golden(cfg, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

inline int run_command(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run_command(args);
}

} // namespace hsum::cli
