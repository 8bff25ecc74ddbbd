#ifndef STURM_CLI_HPP
#define STURM_CLI_HPP

// Command-line front end: count, jumps, transform and verify subcommands
// writing CSV or JSON artifacts.
//
// Exit codes: 0 success / verification passed, 1 computational error,
// 2 verification failed, 64 usage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sturm/asymptotics.hpp"
#include "sturm/error.hpp"
#include "sturm/expr.hpp"
#include "sturm/jumps.hpp"
#include "sturm/liouville_green.hpp"
#include "sturm/oscillation.hpp"
#include "sturm/parallel.hpp"
#include "sturm/potential.hpp"
#include "sturm/quadrature.hpp"
#include "sturm/spectra_oracle.hpp"

namespace sturm::cli {

enum ExitCode : int {
    kOk = 0,
    kComputationError = 1,
    kVerificationFailed = 2,
    kUsage = 64,
};

struct RunConfig {
    std::string subcommand;
    std::string potential_text;
    double a = 0.0;
    double b = 1.0;
    PotentialClass potential_class = PotentialClass::Theorem;
    std::optional<double> gamma_a;
    std::optional<double> gamma_b;
    double rtol = 1e-10;
    double quad_tol = 1e-12;
    double root_tol = 1e-10;
    std::optional<std::int64_t> n_min;
    std::optional<std::int64_t> n_max;
    std::optional<double> lambda;
    std::int64_t mesh = 20000;
    std::string method = "phase";
    std::string suite;
    std::string out_path;
    std::string format;
    int grid = 512;
    int samples = 500;
    double lambda_min = 10.0;
    double lambda_max = 1000.0;
    std::uint64_t seed = 42;
    unsigned threads = 0;
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline void validate_config(const RunConfig& c) {
    const std::vector<std::string> subs{"count", "jumps", "transform", "verify"};
    if (std::find(subs.begin(), subs.end(), c.subcommand) == subs.end())
        throw UsageError("unknown subcommand '" + c.subcommand + "'");
    if (c.potential_text.empty()) throw UsageError("--potential is required");
    if (!std::isfinite(c.a) || !std::isfinite(c.b) || !(c.a < c.b)) throw UsageError("need finite --a < --b");
    if (!(c.rtol > 0) || !(c.quad_tol > 0) || !(c.root_tol > 0)) throw UsageError("tolerances must be positive");
    if (c.potential_class == PotentialClass::Conjecture && (!c.gamma_a || !c.gamma_b))
        throw UsageError("--class conjecture requires --gamma-a and --gamma-b");
    if (c.gamma_a && !(*c.gamma_a > -2.0)) throw UsageError("--gamma-a must exceed -2");
    if (c.gamma_b && !(*c.gamma_b > -2.0)) throw UsageError("--gamma-b must exceed -2");
    if (c.n_min && *c.n_min < 1) throw UsageError("--n-min must be >= 1");
    if (c.n_min && c.n_max && *c.n_min > *c.n_max) throw UsageError("--n-min must not exceed --n-max");
    if (c.subcommand == "count") {
        if (!c.lambda || !(*c.lambda > 0)) throw UsageError("count requires --lambda > 0");
        if (c.method != "phase" && c.method != "matrix") throw UsageError("--method must be phase or matrix");
        if (c.mesh < 1) throw UsageError("--mesh must be positive");
    }
    if (c.subcommand == "jumps" && !c.format.empty() && c.format != "csv" && c.format != "json")
        throw UsageError("--format must be csv or json");
    if (c.subcommand == "transform" && c.grid < 200) throw UsageError("--grid must be at least 200");
    if (c.subcommand == "verify") {
        if (c.suite != "theorem" && c.suite != "weyl" && c.suite != "bracket" && c.suite != "conjecture")
            throw UsageError("--suite must be theorem, weyl, bracket or conjecture");
        if ((c.suite == "bracket") && c.potential_class != PotentialClass::Theorem)
            throw UsageError("the bracket suite needs a theorem-class potential");
        if (!(c.lambda_min > 0) || !(c.lambda_min < c.lambda_max)) throw UsageError("need 0 < --lambda-min < --lambda-max");
        if (c.samples < 1) throw UsageError("--samples must be positive");
    }
}

/// Parses argv into a RunConfig. Returns an exit code when parsing should stop
/// the program (help or usage error); messages go to `err`.
inline std::optional<int> parse_command_line(int argc, const char* const* argv, RunConfig& cfg,
                                             std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Negative-eigenvalue counting and jump asymptotics for -d^2/dx^2 - lambda^2 V"};
    app.require_subcommand(1);

    std::string cls = "theorem";
    std::optional<unsigned> threads;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--potential", cfg.potential_text, "formula for V(x)")->required();
        sub->add_option("--a", cfg.a, "left endpoint")->required();
        sub->add_option("--b", cfg.b, "right endpoint")->required();
        sub->add_option("--class", cls, "theorem | conjecture")->check(CLI::IsMember({"theorem", "conjecture"}));
        sub->add_option("--gamma-a", cfg.gamma_a, "endpoint exponent at a");
        sub->add_option("--gamma-b", cfg.gamma_b, "endpoint exponent at b");
        sub->add_option("--rtol", cfg.rtol, "phase integration relative tolerance");
        sub->add_option("--quad-tol", cfg.quad_tol, "quadrature absolute tolerance");
        sub->add_option("--root-tol", cfg.root_tol, "jump root tolerance (relative in theta)");
        sub->add_option("--out", cfg.out_path, "output file (default: stdout)");
        sub->add_option("--seed", cfg.seed, "seed for randomized sampling");
        sub->add_option("--threads", threads, "worker threads (default: STURM_JUMPS_THREADS or all cores)");
    };

    auto* count = app.add_subcommand("count", "N(lambda) at one lambda");
    common(count);
    count->add_option("--lambda", cfg.lambda)->required();
    count->add_option("--method", cfg.method, "phase | matrix");
    count->add_option("--mesh", cfg.mesh, "interior points for --method matrix");

    auto* jumps = app.add_subcommand("jumps", "jump values lambda_n");
    common(jumps);
    jumps->add_option("--n-min", cfg.n_min);
    jumps->add_option("--n-max", cfg.n_max);
    jumps->add_option("--format", cfg.format, "csv | json");

    auto* transform = app.add_subcommand("transform", "Liouville-Green data D, C, U(xi)");
    common(transform);
    transform->add_option("--grid", cfg.grid, "Chebyshev grid points");

    auto* verify = app.add_subcommand("verify", "asymptotic verification suites");
    common(verify);
    verify->add_option("--suite", cfg.suite, "theorem | weyl | bracket | conjecture")->required();
    verify->add_option("--n-min", cfg.n_min);
    verify->add_option("--n-max", cfg.n_max);
    verify->add_option("--grid", cfg.grid, "Chebyshev grid points for the bracket suite");
    verify->add_option("--samples", cfg.samples, "random lambda samples for the weyl suite");
    verify->add_option("--lambda-min", cfg.lambda_min);
    verify->add_option("--lambda-max", cfg.lambda_max);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.potential_class = cls == "conjecture" ? PotentialClass::Conjecture : PotentialClass::Theorem;
    if (threads) {
        cfg.threads = *threads;
    } else if (const char* env = std::getenv("STURM_JUMPS_THREADS")) {
        cfg.threads = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }
    try {
        validate_config(cfg);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return std::nullopt;
}

namespace detail {

using nlohmann::ordered_json;
using sturm::detail::format_number;

inline ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["subcommand"] = c.subcommand;
    j["potential"] = c.potential_text;
    j["a"] = c.a;
    j["b"] = c.b;
    j["class"] = to_string(c.potential_class);
    j["gamma_a"] = c.gamma_a ? ordered_json(*c.gamma_a) : ordered_json(nullptr);
    j["gamma_b"] = c.gamma_b ? ordered_json(*c.gamma_b) : ordered_json(nullptr);
    j["rtol"] = c.rtol;
    j["quad_tol"] = c.quad_tol;
    j["root_tol"] = c.root_tol;
    if (c.subcommand == "count") {
        j["lambda"] = *c.lambda;
        j["method"] = c.method;
        if (c.method == "matrix") j["mesh"] = c.mesh;
    }
    if (c.subcommand == "jumps" || c.subcommand == "verify") {
        j["n_min"] = c.n_min ? ordered_json(*c.n_min) : ordered_json(nullptr);
        j["n_max"] = c.n_max ? ordered_json(*c.n_max) : ordered_json(nullptr);
    }
    if (c.subcommand == "transform" || (c.subcommand == "verify" && c.suite == "bracket")) j["grid"] = c.grid;
    if (c.subcommand == "verify") {
        j["suite"] = c.suite;
        if (c.suite == "weyl") {
            j["samples"] = c.samples;
            j["lambda_min"] = c.lambda_min;
            j["lambda_max"] = c.lambda_max;
            j["seed"] = c.seed;
        }
    }
    return j;
}

inline Potential make_potential(const RunConfig& c) {
    Expr f = parse(c.potential_text);
    if (c.potential_class == PotentialClass::Theorem) return Potential::theorem_class(std::move(f), c.a, c.b);
    return Potential::conjecture_class(std::move(f), c.a, c.b, *c.gamma_a, *c.gamma_b);
}

inline JumpOptions jump_options(const RunConfig& c) {
    JumpOptions o;
    o.root_tol = c.root_tol;
    o.phase.rtol = c.rtol;
    o.quad_tol = c.quad_tol;
    o.threads = c.threads > 0 ? c.threads : default_threads();
    return o;
}

inline std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

inline std::string jumps_csv(const std::vector<JumpRecord>& records) {
    std::string s = "n,lambda_n,e_n,n_times_e_n\n";
    for (const auto& r : records)
        s += std::to_string(r.n) + "," + sci(r.lambda_n) + "," + sci(r.e_n) + "," +
             sci(static_cast<double>(r.n) * r.e_n) + "\n";
    return s;
}

struct Outcome {
    std::string artifact;
    std::string summary;
    int code = kOk;
};

inline Outcome run_count(const RunConfig& c, const Potential& p) {
    ordered_json j;
    j["lambda"] = *c.lambda;
    std::string summary;
    if (c.method == "matrix") {
        const auto n = oracle_count(p, *c.lambda, c.mesh);
        j["theta_b"] = nullptr;
        j["count"] = n;
        summary = "N(" + format_number(*c.lambda) + ") = " + std::to_string(n) + " (matrix inertia, mesh " +
                  std::to_string(c.mesh) + ")";
    } else {
        PhaseOptions opt;
        opt.rtol = c.rtol;
        const PhaseResult r = phase(p, *c.lambda, opt);
        bool at_jump = false;
        try {
            count_from_phase(r.lambda, r.theta_b);
        } catch (const AtJumpAmbiguity&) {
            at_jump = true;
        }
        j["theta_b"] = r.theta_b;
        j["count"] = r.count;
        j["at_jump"] = at_jump;
        j["steps"] = r.steps;
        summary = "N(" + format_number(*c.lambda) + ") = " + std::to_string(r.count) +
                  " (theta_b/pi = " + format_number(r.theta_b / std::numbers::pi) + (at_jump ? ", at jump)" : ")");
    }
    j["method"] = c.method;
    j["config"] = config_json(c);
    return {j.dump(2) + "\n", summary, kOk};
}

inline Outcome run_jumps(const RunConfig& c, const Potential& p) {
    const std::int64_t n_min = c.n_min.value_or(1);
    const std::int64_t n_max = c.n_max.value_or(std::max<std::int64_t>(n_min, 100));
    if (n_min > n_max) throw UsageError("--n-min must not exceed --n-max");
    const auto records = jump_sequence(p, n_min, n_max, jump_options(c));
    const double D = phase_length(p, c.quad_tol);
    const std::string summary = std::to_string(records.size()) + " jumps, lambda_" + std::to_string(n_min) +
                                " = " + format_number(records.front().lambda_n) + ", e_" + std::to_string(n_max) +
                                " = " + format_number(records.back().e_n);
    if (c.format == "json") {
        ordered_json j;
        j["D"] = D;
        j["records"] = ordered_json::array();
        for (const auto& r : records)
            j["records"].push_back({{"n", r.n}, {"lambda_n", r.lambda_n}, {"residual", r.residual}, {"e_n", r.e_n}});
        j["config"] = config_json(c);
        return {j.dump(2) + "\n", summary, kOk};
    }
    return {jumps_csv(records), summary, kOk};
}

inline Outcome run_transform(const RunConfig& c, const Potential& p) {
    const LGData lg = lg_data(p, c.grid, c.quad_tol);
    ordered_json j;
    j["D"] = lg.D;
    j["C"] = lg.C;
    j["samples"] = ordered_json::array();
    for (const auto& s : lg.samples) j["samples"].push_back({{"x", s.x}, {"xi", s.xi}, {"U", s.u}});
    j["config"] = config_json(c);
    return {j.dump(2) + "\n", "D = " + format_number(lg.D) + ", C = " + format_number(lg.C), kOk};
}

inline ordered_json report_json(const AsymptoticsReport& r) {
    auto opt = [](const auto& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
    ordered_json j;
    j["max_n_en"] = opt(r.max_n_en);
    j["tail_max_n_en"] = opt(r.tail_max_n_en);
    j["weyl_defect_max"] = opt(r.weyl_defect_max);
    j["constant_estimate"] = opt(r.constant_estimate);
    j["constant_stderr"] = opt(r.constant_stderr);
    j["n_min"] = opt(r.n_min);
    j["n_max"] = opt(r.n_max);
    j["lambda_min"] = opt(r.lambda_min);
    j["lambda_max"] = opt(r.lambda_max);
    return j;
}

inline Outcome run_verify(const RunConfig& c, const Potential& p) {
    ordered_json j;
    j["suite"] = c.suite;
    AsymptoticsReport report;
    bool pass = false;
    std::string summary;

    if (c.potential_class == PotentialClass::Conjecture) {
        const ValidationReport v = validate(p, 1024);
        j["validation"] = {{"fitted_gamma_a", *v.fitted_gamma_a},
                           {"fitted_gamma_b", *v.fitted_gamma_b},
                           {"exponent_mismatch", v.exponent_mismatch}};
    }

    if (c.suite == "theorem" || c.suite == "conjecture") {
        const bool theorem = c.suite == "theorem";
        const std::int64_t n_min = c.n_min.value_or(theorem ? 10 : 20);
        const std::int64_t n_max = c.n_max.value_or(theorem ? 500 : 400);
        if (n_min > n_max) throw UsageError("--n-min must not exceed --n-max");
        const auto records = jump_sequence(p, n_min, n_max, jump_options(c));
        report.n_min = n_min;
        report.n_max = n_max;
        double max_n_en = 0;
        for (const auto& r : records) max_n_en = std::max(max_n_en, std::abs(static_cast<double>(r.n) * r.e_n));
        report.max_n_en = max_n_en;
        if (theorem) {
            const TheoremCheck tc = theorem_check(records);
            report.tail_max_n_en = tc.tail_max_n_en;
            j["head_max_n_en"] = tc.head_max_n_en;
            j["n_split"] = tc.n_split;
            j["growth_exponent"] = tc.growth_exponent;
            pass = tc.consistent;
            summary = "theorem: tail max |n e_n| = " + format_number(tc.tail_max_n_en) + ", head max = " +
                      format_number(tc.head_max_n_en);
        } else {
            const double ga = c.gamma_a.value_or(0.0), gb = c.gamma_b.value_or(0.0);
            const ConjectureFit fit = conjecture_fit(records, ga, gb);
            report.constant_estimate = fit.constant_estimate;
            report.constant_stderr = fit.constant_stderr;
            j["predicted"] = fit.predicted;
            j["fit_slope"] = fit.slope;
            j["fit_n_from"] = fit.n_from;
            j["fit_n_to"] = fit.n_to;
            pass = fit.consistent;
            summary = "conjecture: kappa = " + format_number(fit.constant_estimate) + " +- " +
                      format_number(fit.constant_stderr) + ", predicted " + format_number(fit.predicted);
        }
    } else if (c.suite == "weyl") {
        const double D = phase_length(p, c.quad_tol);
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> dist(c.lambda_min, c.lambda_max);
        std::vector<double> lambdas(static_cast<std::size_t>(c.samples));
        for (auto& l : lambdas) l = dist(rng);
        std::vector<std::optional<double>> defects(lambdas.size());
        PhaseOptions opt;
        opt.rtol = c.rtol;
        parallel_for(lambdas.size(), jump_options(c).threads, [&](std::size_t i) {
            try {
                defects[i] = weyl_defect(p, lambdas[i], D, opt);
            } catch (const AtJumpAmbiguity&) {
            }
        });
        double max_abs = 0, K = 0;
        std::int64_t skipped = 0;
        for (std::size_t i = 0; i < lambdas.size(); ++i) {
            if (!defects[i]) {
                ++skipped;
                continue;
            }
            const double d = std::abs(*defects[i]);
            max_abs = std::max(max_abs, d);
            K = std::max(K, (d - 1.0) * lambdas[i]);
        }
        report.weyl_defect_max = max_abs;
        report.lambda_min = c.lambda_min;
        report.lambda_max = c.lambda_max;
        j["D"] = D;
        j["K"] = K;
        j["at_jump_skipped"] = skipped;
        pass = max_abs <= 1.5;
        summary = "weyl: max |lambda D/pi - N| = " + format_number(max_abs) + ", K = " + format_number(K);
    } else {
        const LGData lg = lg_data(p, c.grid, c.quad_tol);
        const double lo = std::max(1.1 * std::sqrt(lg.C), 1.0);
        const double hi = 500.0;
        constexpr int kPoints = 200;
        std::vector<double> lambdas(kPoints);
        for (int i = 0; i < kPoints; ++i) lambdas[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (kPoints - 1));
        std::vector<std::optional<std::int64_t>> counts(kPoints);
        PhaseOptions opt;
        opt.rtol = c.rtol;
        parallel_for(lambdas.size(), jump_options(c).threads, [&](std::size_t i) {
            try {
                counts[i] = count_negative(p, lambdas[i], opt);
            } catch (const AtJumpAmbiguity&) {
            }
        });
        std::int64_t violations = 0, wide = 0, skipped = 0;
        for (int i = 0; i < kPoints; ++i) {
            if (!counts[i]) {
                ++skipped;
                continue;
            }
            const CountBracket br = count_bracket(lg, lambdas[i]);
            if (*counts[i] < br.lower || *counts[i] > br.upper) ++violations;
            if (lambdas[i] >= 50.0 && br.upper - br.lower > 2) ++wide;
        }
        report.lambda_min = lo;
        report.lambda_max = hi;
        j["D"] = lg.D;
        j["C"] = lg.C;
        j["violations"] = violations;
        j["wide_brackets_above_50"] = wide;
        j["at_jump_skipped"] = skipped;
        pass = violations == 0 && wide == 0;
        summary = "bracket: " + std::to_string(violations) + " violations over " + std::to_string(kPoints) +
                  " lambdas, C = " + format_number(lg.C);
    }

    j["pass"] = pass;
    j["report"] = report_json(report);
    j["config"] = config_json(c);
    return {j.dump(2) + "\n", std::string(pass ? "PASS " : "FAIL ") + summary, pass ? kOk : kVerificationFailed};
}

} // namespace detail

/// Runs one configured command. The artifact goes to cfg.out_path (or `out`
/// when empty); a one-line summary goes to `log`.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& log = std::cerr) {
    try {
        validate_config(cfg);
        const Potential p = detail::make_potential(cfg);
        detail::Outcome o;
        if (cfg.subcommand == "count") o = detail::run_count(cfg, p);
        else if (cfg.subcommand == "jumps") o = detail::run_jumps(cfg, p);
        else if (cfg.subcommand == "transform") o = detail::run_transform(cfg, p);
        else o = detail::run_verify(cfg, p);

        if (cfg.out_path.empty()) {
            out << o.artifact;
        } else {
            std::ofstream f(cfg.out_path, std::ios::binary);
            if (!f) throw Error("cannot open output file '" + cfg.out_path + "'");
            f << o.artifact;
            if (!f) throw Error("failed writing '" + cfg.out_path + "'");
        }
        log << o.summary << "\n";
        return o.code;
    } catch (const UsageError& e) {
        log << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        log << "error: --potential: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kComputationError;
    }
}

} // namespace sturm::cli

#endif // STURM_CLI_HPP
