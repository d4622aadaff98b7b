#pragma once

// Command line front end. run() parses arguments, dispatches to the library
// and writes one JSON document or one CSV table.

#include "cube/combinatorics.hpp"
#include "cube/core.hpp"
#include "cube/error.hpp"
#include "cube/family_json.hpp"
#include "cube/hermite.hpp"
#include "cube/parallel.hpp"
#include "cube/projection.hpp"
#include "cube/sidon.hpp"
#include "cube/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cube::cli {

enum ExitCode : int {
    kOk = 0,
    kNumericFailure = 1,
    kGuardFailure = 2,
    kVerificationFailed = 3,
    kUsage = 64,
};

struct RunConfig {
    std::string subcommand;
    std::string family;
    std::optional<int> n;
    std::optional<int> d;
    std::string mode = "homogeneous";
    std::uint64_t samples = 100000;
    std::uint64_t seed = 42;
    std::optional<double> tol;
    unsigned threads = 0;  // 0: Parallelism::available()
    std::string format;
    std::string out;
    std::uint64_t max_orthants = kDefaultMaxOrthants;
    std::string suite = "all";
    int max_n = 14;
    int trials = 500;
    std::string ns = "100,400,1600";
};

inline constexpr double kDefaultTol = 1e-9;

/// What a subcommand produced: a JSON payload, an optional table for CSV
/// output, and whether every check in it passed.
struct Report {
    Json json;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool passed = true;
};

namespace detail {

inline std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline Json rational_json(const Rational& q) {
    Json j;
    j["num"] = numerator(q).str();
    j["den"] = denominator(q).str();
    return j;
}

inline Json estimate_json(const McEstimate& e) {
    Json j;
    j["float"] = e.mean;
    j["stderr"] = e.std_error;
    j["ci95"] = {e.ci95_lo, e.ci95_hi};
    j["samples"] = e.samples;
    j["seed"] = e.seed;
    return j;
}

/// Flattens nested objects into key,value rows for the generic CSV form.
inline void flatten(const Json& j, const std::string& prefix, std::vector<std::vector<std::string>>& rows) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), rows);
    } else if (j.is_string()) {
        rows.push_back({prefix, j.get<std::string>()});
    } else if (j.is_number_float()) {
        rows.push_back({prefix, num(j.get<double>())});
    } else {
        rows.push_back({prefix, j.dump()});
    }
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

inline std::string render(const Report& rep, const std::string& format) {
    if (format == "json") return rep.json.dump(2) + "\n";
    std::vector<std::string> header = rep.header;
    std::vector<std::vector<std::string>> rows = rep.rows;
    if (header.empty()) {
        header = {"key", "value"};
        flatten(rep.json, "", rows);
    }
    std::string out = "#cube-constants v1\n";
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cells[i]);
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

inline LevelMode parse_mode(const std::string& m) {
    if (m == "homogeneous" || m == "homog" || m == "exact-degree") return LevelMode::exact_degree;
    if (m == "upto" || m == "up-to-degree") return LevelMode::up_to_degree;
    throw DomainError("unknown mode '" + m + "' (homogeneous|upto)");
}

inline FamilySpec resolve_family(const RunConfig& cfg) {
    if (!cfg.family.empty()) return parse_family(cfg.family);
    if (cfg.n && cfg.d) {
        return parse_mode(cfg.mode) == LevelMode::exact_degree ? FamilySpec::homogeneous(*cfg.n, *cfg.d)
                                                                : FamilySpec::up_to(*cfg.n, *cfg.d);
    }
    throw CLI::ValidationError("--family", "a family is required (--family, or --N with --d)");
}

inline Parallelism parallelism(const RunConfig& cfg) { return cfg.threads == 0 ? Parallelism::available() : Parallelism{cfg.threads}; }

inline std::vector<int> parse_list(const std::string& s) {
    std::vector<int> out;
    for (const auto& part : ::cube::detail::split(s, ',')) {
        if (!part.empty()) out.push_back(::cube::detail::parse_int(part, "--Ns"));
    }
    if (out.empty()) throw DomainError("--Ns must list at least one N");
    return out;
}

inline Json reports_json(const std::vector<BoundsReport>& reps) {
    Json arr = Json::array();
    for (const auto& r : reps) {
        Json j;
        j["name"] = r.name;
        j["lhs"] = r.lhs;
        j["rhs"] = r.rhs;
        if (r.lhs_exact) j["lhs_exact"] = *r.lhs_exact;
        if (r.rhs_exact) j["rhs_exact"] = *r.rhs_exact;
        j["pass"] = r.pass;
        j["context"] = r.context;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline std::string context_string(const std::map<std::string, std::string>& ctx) {
    std::string s;
    for (const auto& [k, v] : ctx) {
        if (!s.empty()) s += ' ';
        s += k + "=" + v;
    }
    return s;
}

}  // namespace detail

inline Report cmd_exact(const RunConfig& cfg) {
    const FamilySpec spec = detail::resolve_family(cfg);
    Rational lambda;
    std::string method;
    switch (spec.kind) {
        case FamilyKind::homogeneous:
        case FamilyKind::up_to:
            lambda = lambda_level_exact(spec.n, spec.d,
                                        spec.kind == FamilyKind::homogeneous ? LevelMode::exact_degree : LevelMode::up_to_degree);
            method = "level";
            break;
        case FamilyKind::prime_singletons: {
            const auto count = static_cast<int>(primes_up_to(spec.n).size());
            ::cube::detail::require_domain(count >= 1, "no primes <= N");
            lambda = haagerup_lambda(count);
            method = "haagerup";
            break;
        }
        default: {
            ExactOptions opts;
            opts.parallelism = detail::parallelism(cfg);
            lambda = lambda_exact(make_family(spec), opts);
            method = "exact";
        }
    }
    Report rep;
    rep.json["lambda"] = detail::rational_json(lambda);
    rep.json["float"] = to_double(lambda);
    rep.json["family"] = family_spec_to_json(spec);
    rep.json["method"] = method;
    return rep;
}

inline Report cmd_mc(const RunConfig& cfg) {
    const FamilySpec spec = detail::resolve_family(cfg);
    McEstimate est;
    if (spec.kind == FamilyKind::square_free) {
        est = squarefree_mc(spec.n, cfg.samples, cfg.seed, detail::parallelism(cfg)).estimate;
    } else if (spec.kind == FamilyKind::prime_singletons && spec.n > kMaxDimension) {
        // only the number of singletons matters
        const auto count = static_cast<int>(primes_up_to(spec.n).size());
        ::cube::detail::require_guard(count <= kMaxDimension, "mc: more than 63 primes <= N");
        est = lambda_mc(make_family(FamilySpec::homogeneous(count, 1)), cfg.samples, cfg.seed, detail::parallelism(cfg));
    } else {
        est = lambda_mc(make_family(spec), cfg.samples, cfg.seed, detail::parallelism(cfg));
    }
    Report rep;
    rep.json = detail::estimate_json(est);
    rep.json["family"] = family_spec_to_json(spec);
    rep.json["method"] = "mc";
    return rep;
}

inline Report cmd_limit(const RunConfig& cfg) {
    const int d = cfg.d.value_or(2);
    const LevelMode mode = detail::parse_mode(cfg.mode);
    Report rep;
    const double limit = limit_constant(d);
    rep.json["d"] = d;
    rep.json["mode"] = mode == LevelMode::exact_degree ? "homogeneous" : "upto";
    rep.json["limit_constant"] = limit;
    rep.json["normalized"] = limit_constant_normalized(d);
    rep.json["larsson_cohn_ratio"] = larsson_cohn_ratio(d);
    Json series = Json::array();
    rep.header = {"d", "N", "ratio", "limit_constant"};
    for (int n : detail::parse_list(cfg.ns)) {
        const double ratio = to_double(lambda_level_exact(n, d, mode)) / std::pow(static_cast<double>(n), 0.5 * d);
        series.push_back({{"N", n}, {"ratio", ratio}});
        rep.rows.push_back({std::to_string(d), std::to_string(n), detail::num(ratio), detail::num(limit)});
    }
    rep.json["series"] = std::move(series);
    rep.json["method"] = "level";
    return rep;
}

/// Reference decimals of E|h_d(Z)| d^{1/4} / sqrt(d!) for d = 2..6.
inline constexpr double kTableReference[] = {0.814, 0.811, 0.808, 0.807, 0.806};

inline Report cmd_table(const RunConfig&) {
    Report rep;
    rep.header = {"d", "limit_constant", "normalized", "reference_value"};
    Json rows = Json::array();
    for (int d = 2; d <= 6; ++d) {
        const double lc = limit_constant(d);
        const double norm = limit_constant_normalized(d);
        const double ref = kTableReference[d - 2] / std::pow(static_cast<double>(d), 0.25);
        rows.push_back({{"d", d}, {"limit_constant", lc}, {"normalized", norm}, {"reference_value", ref}});
        rep.rows.push_back({std::to_string(d), detail::num(lc), detail::num(norm), detail::num(ref)});
    }
    rep.json["table"] = std::move(rows);
    return rep;
}

inline Report cmd_sidon(const RunConfig& cfg) {
    const FamilySpec spec = detail::resolve_family(cfg);
    const SupportFamily family = make_family(spec);
    SidonOptions opts;
    opts.tol = cfg.tol.value_or(kDefaultTol);
    opts.max_orthants = cfg.max_orthants;
    opts.parallelism = detail::parallelism(cfg);
    const auto res = sidon_exact(family, opts);
    Report rep;
    rep.json["value"] = res.value;
    Json witness = Json::array();
    for (std::size_t i = 0; i < family.size(); ++i) {
        witness.push_back({{"set", family.sets()[i].indices()}, {"coeff", res.witness.coeffs[i]}});
    }
    rep.json["witness"] = std::move(witness);
    rep.json["orthants_solved"] = res.orthants_solved;
    rep.json["witness_sup"] = res.witness_sup;
    rep.json["certified_lower"] = res.certified_lower;
    rep.json["tol"] = res.tol;
    rep.json["family"] = family_spec_to_json(spec);
    rep.json["method"] = "orthant-lp";
    return rep;
}

inline Report cmd_kappa(const RunConfig& cfg) {
    const double tol = cfg.tol.value_or(1e-6);
    Report rep;
    rep.json["kappa"] = kappa_constant(tol);
    rep.json["tol"] = tol;
    return rep;
}

inline Report cmd_families(const RunConfig& cfg) {
    const FamilySpec spec = detail::resolve_family(cfg);
    const SupportFamily family = make_family(spec);
    Report rep;
    rep.json = family_to_json(family);
    rep.json["size"] = family.size();
    rep.json["source"] = family_spec_to_json(spec);
    rep.header = {"index", "set"};
    for (std::size_t i = 0; i < family.size(); ++i) {
        std::string set;
        for (int v : family.sets()[i].indices()) set += (set.empty() ? "" : " ") + std::to_string(v);
        rep.rows.push_back({std::to_string(i), set});
    }
    return rep;
}

inline Report cmd_primes(const RunConfig& cfg) {
    if (!cfg.n) throw CLI::ValidationError("--N", "primes needs --N");
    const int n = *cfg.n;
    Report rep;
    const auto ps = prime_singleton_report(n);
    rep.json["prime_singletons"] = {{"N", ps.n},
                                    {"prime_count", ps.prime_count},
                                    {"lambda", detail::rational_json(ps.lambda)},
                                    {"float", to_double(ps.lambda)},
                                    {"ratio", ps.ratio},
                                    {"method", "haagerup"}};
    if (n >= 16) {
        const auto sf = squarefree_mc(n, cfg.samples, cfg.seed, detail::parallelism(cfg));
        Json j = detail::estimate_json(sf.estimate);
        j["N"] = sf.n;
        j["family_size"] = sf.family_size;
        j["ratio"] = sf.ratio;
        if (sf.exact) {
            j["exact"] = detail::rational_json(*sf.exact);
            j["exact_float"] = to_double(*sf.exact);
            j["within_4_stderr"] = std::abs(sf.estimate.mean - to_double(*sf.exact)) <= 4.0 * sf.estimate.std_error;
        }
        j["method"] = "mc";
        rep.json["squarefree"] = std::move(j);
    }
    return rep;
}

namespace detail {

inline std::vector<BoundsReport> suite_range(int max_n) {
    std::vector<BoundsReport> out;
    for (int n = 1; n <= max_n; ++n) {
        for (int d = 1; d <= n; ++d) {
            for (auto mode : {LevelMode::exact_degree, LevelMode::up_to_degree}) {
                auto r = check_range_bounds(n, d, mode);
                out.insert(out.end(), r.begin(), r.end());
            }
            out.push_back(check_homog_vs_upto(n, d));
        }
    }
    return out;
}

inline std::vector<BoundsReport> suite_mckay() {
    auto out = mckay_sweep(kMaxMcKayDimension, {0, 2, 4});
    for (int i = 0; i <= 500; ++i) {
        auto r = check_szarek(i / 10.0);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

inline std::vector<BoundsReport> suite_desigforo() {
    std::vector<BoundsReport> out;
    for (int n = 2; n <= 200; ++n) {
        for (int d = 1; 2 * d - 1 < n; ++d) out.push_back(check_desigforo(n, d));
    }
    return out;
}

inline std::vector<BoundsReport> suite_klimek(int trials, std::uint64_t seed) {
    return {check_klimek(8, 3, trials, seed), check_klimek(10, 2, trials, seed), check_klimek(12, 4, trials, seed)};
}

inline std::vector<BoundsReport> suite_combinatorics(int max_n, Json& extra) {
    std::vector<BoundsReport> out;
    const int top = std::min(max_n, 12);
    bool identity = true;
    for (int d = 1; d <= 5; ++d) {
        for (int n = d; n <= top; ++n) {
            const auto r = verify_power_identity(d, n);
            identity = identity && r.pass;
            BoundsReport b;
            b.name = "power_identity";
            b.lhs = to_double(Rational(r.max_discrepancy));
            b.rhs = 0.0;
            b.lhs_exact = r.max_discrepancy.str();
            b.rhs_exact = "0";
            b.pass = r.pass;
            b.context = {{"N", std::to_string(n)}, {"d", std::to_string(d)}};
            out.push_back(std::move(b));
        }
    }
    Json table = Json::array();
    for (int n = 2; n <= 50; ++n) {
        const BigInt c2 = c_coefficient(2, 1, n);
        table.push_back({{"d", 2}, {"k", 1}, {"N", n}, {"value", c2.str()}});
        BoundsReport a{"c_coefficient_d2", 0, 0, c2.str(), std::to_string(n), c2 == n, {{"N", std::to_string(n)}}};
        a.lhs = a.rhs = n;
        out.push_back(std::move(a));
        if (n >= 3) {
            const BigInt c3 = c_coefficient(3, 1, n);
            table.push_back({{"d", 3}, {"k", 1}, {"N", n}, {"value", c3.str()}});
            BoundsReport b{"c_coefficient_d3", to_double(Rational(c3)), 3.0 * n - 2, c3.str(), std::to_string(3 * n - 2),
                           c3 == 3 * n - 2, {{"N", std::to_string(n)}}};
            out.push_back(std::move(b));
        }
    }
    Json beckner = Json::array();
    for (int d = 2; d <= 5; ++d) {
        for (int n : {10, 20, 40, 80, 160}) {
            const auto fit = beckner_coefficients(d, n);
            beckner.push_back({{"d", d}, {"N", n}, {"a", fit.a}, {"residual", fit.residual}});
        }
    }
    extra["identity"] = identity ? "pass" : "fail";
    extra["c_table"] = std::move(table);
    extra["beckner"] = std::move(beckner);
    return out;
}

}  // namespace detail

inline Report cmd_verify(const RunConfig& cfg) {
    const std::string& suite = cfg.suite;
    static const std::vector<std::string> known{"range", "mckay", "desigforo", "klimek", "combinatorics", "all"};
    if (std::find(known.begin(), known.end(), suite) == known.end()) {
        throw CLI::ValidationError("--suite", "unknown suite '" + suite + "'");
    }
    const bool all = suite == "all";
    std::vector<BoundsReport> reps;
    Json extra = Json::object();
    auto add = [&](std::vector<BoundsReport> r) { reps.insert(reps.end(), r.begin(), r.end()); };
    if (all || suite == "range") add(detail::suite_range(cfg.max_n));
    if (all || suite == "mckay") add(detail::suite_mckay());
    if (all || suite == "desigforo") add(detail::suite_desigforo());
    if (all || suite == "klimek") add(detail::suite_klimek(cfg.trials, cfg.seed));
    if (all || suite == "combinatorics") add(detail::suite_combinatorics(cfg.max_n, extra));

    Report rep;
    rep.passed = std::all_of(reps.begin(), reps.end(), [](const BoundsReport& r) { return r.pass; });
    std::size_t failed = 0;
    rep.header = {"name", "lhs", "rhs", "pass", "context"};
    for (const auto& r : reps) {
        failed += r.pass ? 0 : 1;
        rep.rows.push_back({r.name, detail::num(r.lhs), detail::num(r.rhs), r.pass ? "true" : "false",
                            detail::context_string(r.context)});
    }
    rep.json["suite"] = suite;
    rep.json["pass"] = rep.passed;
    rep.json["checks"] = reps.size();
    rep.json["failed"] = failed;
    for (const auto& [k, v] : extra.items()) rep.json[k] = v;
    rep.json["reports"] = detail::reports_json(reps);
    return rep;
}

/// Runs one command line (without the program name). Output goes to `out`
/// unless --out names a file; diagnostics go to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Projection, Sidon and Hermite-limit constants of Boolean cube function spaces", "cube_constants"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    enum Flag : unsigned {
        kFamily = 1,
        kNd = 2,
        kMode = 4,
        kSamples = 8,
        kSeed = 16,
        kTol = 32,
        kOrthants = 128,
        kSuite = 256,
        kMaxN = 512,
        kTrials = 1024,
        kNs = 2048,
    };
    auto make = [&](const std::string& name, const std::string& help, unsigned flags) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->callback([&cfg, name] { cfg.subcommand = name; });
        if (flags & kFamily) sub->add_option("--family", cfg.family, "homog:N:d | upto:N:d | primes:N | sqfree:N | file:<path> | <path>");
        if (flags & kNd) {
            sub->add_option("--N", cfg.n, "Dimension N");
            sub->add_option("--d", cfg.d, "Degree d");
        }
        if (flags & kMode) sub->add_option("--mode", cfg.mode, "homogeneous | upto");
        if (flags & kSamples) sub->add_option("--samples", cfg.samples, "Monte Carlo sample count");
        if (flags & kSeed) sub->add_option("--seed", cfg.seed, "RNG seed");
        if (flags & kTol) sub->add_option("--tol", cfg.tol, "Tolerance");
        if (flags & kOrthants) sub->add_option("--max-orthants", cfg.max_orthants, "Cap on sign patterns for the Sidon LP sweep");
        if (flags & kSuite) {
            sub->add_option("suite,--suite", cfg.suite, "range | mckay | desigforo | klimek | combinatorics | all");
        }
        if (flags & kMaxN) sub->add_option("--max-n", cfg.max_n, "Largest N in exact sweeps");
        if (flags & kTrials) sub->add_option("--trials", cfg.trials, "Random trials");
        if (flags & kNs) sub->add_option("--Ns", cfg.ns, "Comma separated list of N");
        sub->add_option("--threads", cfg.threads, "Worker threads (output does not depend on it)")->check(CLI::PositiveNumber);
        sub->add_option("--format", cfg.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", cfg.out, "Write output to this file");
        return sub;
    };
    make("exact", "Exact projection constant", kFamily | kNd | kMode);
    make("mc", "Monte Carlo projection constant", kFamily | kNd | kMode | kSamples | kSeed);
    make("limit", "Hermite limit constant and convergence series", kNd | kMode | kNs);
    make("table", "Limit constants for d = 2..6", 0);
    make("sidon", "Exact Sidon constant", kFamily | kNd | kMode | kTol | kOrthants);
    make("kappa", "Prime product constant kappa", kTol);
    make("verify", "Inequality verification suites", kSuite | kMaxN | kTrials | kSeed);
    make("families", "Materialize a support family", kFamily | kNd | kMode);
    make("primes", "Prime-singleton and square-free families", kNd | kSamples | kSeed);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kUsage;
    }

    Report rep;
    try {
        if (cfg.subcommand == "exact") rep = cmd_exact(cfg);
        else if (cfg.subcommand == "mc") rep = cmd_mc(cfg);
        else if (cfg.subcommand == "limit") rep = cmd_limit(cfg);
        else if (cfg.subcommand == "table") rep = cmd_table(cfg);
        else if (cfg.subcommand == "sidon") rep = cmd_sidon(cfg);
        else if (cfg.subcommand == "kappa") rep = cmd_kappa(cfg);
        else if (cfg.subcommand == "verify") rep = cmd_verify(cfg);
        else if (cfg.subcommand == "families") rep = cmd_families(cfg);
        else if (cfg.subcommand == "primes") rep = cmd_primes(cfg);
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return kNumericFailure;
    } catch (const std::logic_error& e) {
        // guard, domain and dimension errors
        err << "error: " << e.what() << "\n";
        return kGuardFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumericFailure;
    }

    const std::string format = cfg.format.empty() ? (cfg.subcommand == "table" ? "csv" : "json") : cfg.format;
    const std::string text = detail::render(rep, format);
    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream file(cfg.out);
        if (!file || !(file << text)) {
            err << "error: cannot write '" << cfg.out << "'\n";
            return kGuardFailure;
        }
    }
    return rep.passed ? kOk : kVerificationFailed;
}

}  // namespace cube::cli
