#include "torus_nls/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "torus_nls/errors.hpp"
#include "torus_nls/evolution.hpp"
#include "torus_nls/harness.hpp"
#include "torus_nls/io.hpp"
#include "torus_nls/sampling.hpp"
#include "torus_nls/solver.hpp"

namespace tnls {

namespace {

namespace fs = std::filesystem;

// CLI flag, then TORUS_NLS_SEED, then the config file.
std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag, const RunConfig* cfg) {
    if (flag) return flag;
    if (const char* env = std::getenv("TORUS_NLS_SEED"); env && *env) {
        try {
            std::size_t pos = 0;
            const unsigned long long v = std::stoull(env, &pos);
            if (pos != std::string(env).size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw UsageError(std::string("TORUS_NLS_SEED is not an unsigned integer: '") + env + "'");
        }
    }
    if (cfg && cfg->seed_set) return cfg->seed;
    return std::nullopt;
}

void desk_guard(int M, int steps, bool unsafe) {
    if (!unsafe && (2 * M + 1 > 33 || steps > 512))
        throw GuardExceeded("desk-scale guard: lattice " + std::to_string(2 * M + 1) + "^3, " + std::to_string(steps) +
                            " time samples (limits 33^3 and 512; pass --unsafe to lift)");
}

struct SolveArgs {
    std::string config;
    bool find_T = false;
    std::string method = "picard";
    std::string out;
    std::optional<std::uint64_t> seed;
    bool unsafe = false;
};

int run_solve(const SolveArgs& a) {
    RunConfig cfg = load_config(a.config);
    const auto seed = resolve_seed(a.seed, &cfg);
    desk_guard(cfg.bandlimit, cfg.grid.n, a.unsafe);
    const std::string out = a.out.empty() ? cfg.output_dir : a.out;
    const PowerNonlinearity nl{cfg.p, cfg.sign};
    nl.validate();
    const double sc = s_critical(cfg.p);

    Rng rng(stream_seed(seed.value_or(cfg.seed), 0));
    SpectralField u0 = random_field(cfg.metric, cfg.bandlimit, rng, Support::everything(), sc + 1.5);
    const double n0 = sobolev_norm(u0, sc);
    if (n0 > 0.0) u0 *= cfg.amplitude / n0;

    nlohmann::json diag{{"method", a.method}, {"p", cfg.p}, {"sign", cfg.sign}, {"bandlimit", cfg.bandlimit},
                        {"oversample", cfg.oversample}};
    std::optional<SpaceTimePath> sol;
    int rc = 0;
    auto record = [&](const PicardDiagnostics& d) {
        diag["distances"] = d.distances;
        diag["ratios"] = d.ratios;
        diag["residual"] = d.residual;
        diag["iterations"] = d.iterations;
        diag["converged"] = d.converged;
    };
    if (a.method == "picard") {
        try {
            if (a.find_T) {
                FindTResult r = find_T(u0, nl, cfg.grid, cfg.oversample, cfg.tol, cfg.max_iter);
                diag["T"] = r.T;
                diag["halvings"] = r.halvings;
                record(r.result.diagnostics);
                sol = std::move(r.result.solution);
            } else {
                PicardResult r = picard_solve(u0, nl, cfg.grid, cfg.oversample, cfg.tol, cfg.max_iter);
                diag["T"] = cfg.grid.T;
                record(r.diagnostics);
                sol = std::move(r.solution);
            }
        } catch (const NoConvergence& e) {
            record(e.diagnostics);
            diag["error"] = e.what();
            rc = 3;
        }
    } else if (a.method == "splitstep") {
        sol = splitstep_solve(u0, nl, cfg.grid.dt(), cfg.grid.n, cfg.oversample);
        diag["T"] = cfg.grid.T;
    } else {
        throw UsageError("unknown method '" + a.method + "' (picard or splitstep)");
    }
    if (sol) {
        diag["mass"] = {mass(sol->frames.front()), mass(sol->frames.back())};
        diag["energy"] = {energy(sol->frames.front(), nl), energy(sol->frames.back(), nl)};
    }

    save_config(cfg, (fs::path(out) / "config.cfg").string());
    save_field(u0, (fs::path(out) / "u0.field.json").string());
    write_text((fs::path(out) / "diagnostics.json").string(), diag.dump(2) + "\n");
    if (sol) {
        for (int k = 0; k < sol->grid.n; ++k) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%04d.field.json", k);
            save_field(sol->frames[k], (fs::path(out) / "frames" / name).string());
        }
        std::cout << "solved " << a.method << ": T = " << format_double(diag["T"].get<double>())
                  << ", frames = " << sol->grid.n << " -> " << out << "\n";
    } else {
        std::cerr << "error: " << diag["error"].get<std::string>() << "\n";
    }
    return rc;
}

struct VerifyArgs {
    std::string key;
    std::string config;
    std::optional<int> trials;
    std::optional<double> slack;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool unsafe = false;
    bool allow_large_T = false;
    std::string out;
};

int run_verify(const VerifyArgs& a) {
    RunConfig cfg;
    if (!a.config.empty()) cfg = load_config(a.config);
    const auto seed = resolve_seed(a.seed, &cfg);
    HarnessEnv env = make_env(cfg);
    env.unsafe = a.unsafe;
    env.allow_large_T = a.allow_large_T;
    env.threads = a.threads > 0 ? a.threads : std::max(1u, std::thread::hardware_concurrency());
    if (a.trials && *a.trials < 1) throw UsageError("--trials must be at least 1");
    if (a.slack && !(*a.slack >= 0.0)) throw UsageError("--slack must be non-negative");
    const std::string out = a.out.empty() ? cfg.output_dir : a.out;

    const std::vector<EstimateSpec> presets = select_presets(a.key);
    const bool many = presets.size() > 1;
    int rc = 0;
    for (EstimateSpec spec : presets) {
        if (cfg.p_set) {
            if (!(cfg.p > spec.min_p && cfg.p < spec.max_p)) {
                if (!many) throw UsageError(spec.name + " does not apply at p = " + format_double(cfg.p));
                std::cout << spec.name << ": skipped (does not apply at p = " << format_double(cfg.p) << ")\n";
                continue;
            }
            spec = spec.with_p(cfg.p);
        }
        if (cfg.sign_set) spec.sign = cfg.sign;
        if (a.trials) spec.trials = *a.trials;
        if (a.slack) spec.slack = *a.slack;
        if (seed) spec.seed = *seed;
        ExperimentReport rep;
        try {
            rep = run_estimate(spec, env);
        } catch (const UsageError& e) {
            if (!many) throw;
            std::cout << spec.name << ": skipped (" << e.what() << ")\n";
            continue;
        }
        const std::string path = write_report(rep, cfg, out);
        std::cout << spec.name << ": " << verdict_label(rep.verdict, spec);
        if (rep.slope) std::cout << "  slope " << format_double(rep.slope->slope) << " (predicted "
                                 << format_double(spec.predicted_exponent) << ")";
        std::cout << "  top/bottom " << format_double(rep.top_max) << "/" << format_double(rep.bottom_max);
        if (rep.degenerate) std::cout << "  [degenerate]";
        std::cout << "  -> " << path << "\n";
        if (rep.verdict == Verdict::fail) rc = 1;
    }
    return rc;
}

struct NormArgs {
    std::string field;
    std::string norm;
    double s = 0.0;
    double q = 2.0;
    double T = 1.0;
    int n = 8;
    int oversample = 2;
};

int run_norms(const NormArgs& a) {
    const SpectralField f = load_field(a.field);
    double v = 0.0;
    if (a.norm == "hs") {
        v = sobolev_norm(f, a.s);
    } else if (a.norm == "lp") {
        v = grid_lp_norm(to_grid(f, a.oversample), a.q);
    } else {
        const TimeGrid g{a.T, a.n};
        g.validate();
        const SpaceTimePath path = free_flow(f, g);
        v = a.norm == "y" ? y_norm(path, a.s) : v2_norm_hilbert(path, a.s);
    }
    std::cout << format_double(v) << "\n";
    return 0;
}

struct FieldArgs {
    std::string kind;
    int bandlimit = 8;
    int N = 1;
    double decay = 0.0;
    double s = 0.0;
    std::optional<double> amplitude;
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string in;
    double t = 0.0;
    std::string out;
};

int run_field(const FieldArgs& a) {
    if (a.kind == "free-flow") {
        save_field(propagate(load_field(a.in), a.t), a.out);
        return 0;
    }
    RunConfig cfg;
    if (!a.config.empty()) cfg = load_config(a.config);
    const auto seed = resolve_seed(a.seed, a.config.empty() ? nullptr : &cfg);
    if (a.bandlimit < 0) throw UsageError("--bandlimit must be non-negative");
    Rng rng(seed.value_or(1));
    const Support sup = a.kind == "shell" ? Support::shell(a.N) : Support::everything();
    if (a.kind == "shell" && sup.min_bandlimit() > a.bandlimit)
        throw UsageError("shell " + std::to_string(a.N) + " does not fit bandlimit " + std::to_string(a.bandlimit));
    SpectralField f = random_field(cfg.metric, a.bandlimit, rng, sup, a.decay);
    if (a.amplitude) {
        const double n = sobolev_norm(f, a.s);
        if (n > 0.0) f *= *a.amplitude / n;
    }
    save_field(f, a.out);
    return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Scaling-critical NLS on irrational tori: solver and estimate harness"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Solve from a random initial datum and write solver artifacts");
    solve->add_option("--config", sa.config, "Run configuration file")->required();
    solve->add_flag("--find-T", sa.find_T, "Halve T until the Picard iteration converges");
    solve->add_option("--method", sa.method, "picard or splitstep")->check(CLI::IsMember({"picard", "splitstep"}));
    solve->add_option("--out", sa.out, "Output directory (default: output_dir from the config)");
    solve->add_option("--seed", sa.seed, "Seed (overrides TORUS_NLS_SEED and the config)");
    solve->add_flag("--unsafe", sa.unsafe, "Lift the desk-scale guard");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Run estimate presets and write reports");
    verify->add_option("preset", va.key, "Preset name, family, or 'all'")->required();
    verify->add_option("--config", va.config, "Run configuration file");
    verify->add_option("--trials", va.trials, "Trials per scale");
    verify->add_option("--slack", va.slack, "Slope slack");
    verify->add_option("--seed", va.seed, "Seed (overrides TORUS_NLS_SEED and the config)");
    verify->add_option("--threads", va.threads, "Worker threads (default: available cores)");
    verify->add_flag("--unsafe", va.unsafe, "Lift the desk-scale guard");
    verify->add_flag("--allow-large-T", va.allow_large_T, "Permit T > 1");
    verify->add_option("--out", va.out, "Report directory (default: output_dir from the config)");

    NormArgs na;
    auto* norms = app.add_subcommand("norms", "Evaluate a norm of a stored field");
    norms->add_option("--field", na.field, ".field.json file")->required();
    norms->add_option("--norm", na.norm, "hs, lp, y or v2")->required()->check(CLI::IsMember({"hs", "lp", "y", "v2"}));
    norms->add_option("--s", na.s, "Sobolev index");
    norms->add_option("--q", na.q, "Lebesgue exponent for lp");
    norms->add_option("--T", na.T, "Window length for y and v2 (free flow of the field)");
    norms->add_option("--n", na.n, "Time samples for y and v2");
    norms->add_option("--oversample", na.oversample, "Grid oversampling for lp");

    FieldArgs fa;
    auto* field = app.add_subcommand("field", "Generate a .field.json file");
    field->add_option("kind", fa.kind, "random, free-flow or shell")
        ->required()
        ->check(CLI::IsMember({"random", "free-flow", "shell"}));
    field->add_option("--bandlimit", fa.bandlimit, "Lattice bandlimit M");
    field->add_option("--N", fa.N, "Dyadic shell scale (shell)");
    field->add_option("--decay", fa.decay, "Coefficients scale like <xi>^-decay");
    field->add_option("--s", fa.s, "Sobolev index used by --amplitude");
    field->add_option("--amplitude", fa.amplitude, "Rescale to this H^s norm");
    field->add_option("--seed", fa.seed, "Seed (overrides TORUS_NLS_SEED and the config)");
    field->add_option("--config", fa.config, "Take the metric and seed from a config");
    field->add_option("--in", fa.in, "Input field (free-flow)");
    field->add_option("--t", fa.t, "Propagation time (free-flow)");
    field->add_option("--out", fa.out, "Output file")->required();

    std::string sum_dir, sum_out;
    auto* report = app.add_subcommand("report", "Report utilities");
    report->require_subcommand(1);
    auto* summarize = report->add_subcommand("summarize", "Merge report CSVs into one file");
    summarize->add_option("dir", sum_dir, "Report directory")->required();
    summarize->add_option("--out", sum_out, "Merged CSV (default: <dir>/summary.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*solve) return run_solve(sa);
        if (*verify) return run_verify(va);
        if (*norms) return run_norms(na);
        if (*field) {
            if (fa.kind == "free-flow" && fa.in.empty()) throw UsageError("free-flow needs --in");
            return run_field(fa);
        }
        if (*summarize) {
            const std::string out = sum_out.empty() ? (fs::path(sum_dir) / "summary.csv").string() : sum_out;
            const std::size_t rows = summarize_reports(sum_dir, out);
            std::cout << rows << " rows -> " << out << "\n";
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace tnls
