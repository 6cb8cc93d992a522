// Acceptance run: one PASS/FAIL line per criterion, single-threaded.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "torus_nls/errors.hpp"
#include "torus_nls/evolution.hpp"
#include "torus_nls/harness.hpp"
#include "torus_nls/littlewood_paley.hpp"
#include "torus_nls/nonlinearity.hpp"
#include "torus_nls/paths.hpp"
#include "torus_nls/sampling.hpp"
#include "torus_nls/solver.hpp"

using namespace tnls;

namespace {

// Tracks the worst value of each named check against its bound.
class Checks {
public:
    void below(const std::string& what, double value, double bound) { add(what, value, bound, value < bound); }
    void above(const std::string& what, double value, double bound) { add(what, value, bound, value > bound); }
    void within(const std::string& what, double value, double lo, double hi) {
        add(what, value, hi, value >= lo && value <= hi);
    }
    void truth(const std::string& what, bool ok) { add(what, ok ? 1.0 : 0.0, 1.0, ok); }

    bool ok() const { return failures_.empty(); }
    std::string summary() const {
        std::ostringstream o;
        o << checks_ << " checks";
        for (const auto& f : failures_) o << "; FAILED " << f;
        for (const auto& n : notes_) o << "; " << n;
        return o.str();
    }
    void note(const std::string& n) { notes_.push_back(n); }

private:
    void add(const std::string& what, double value, double bound, bool ok) {
        ++checks_;
        if (!ok && failures_.size() < 5) {
            std::ostringstream o;
            o << what << " (value " << value << ", bound " << bound << ")";
            failures_.push_back(o.str());
        }
    }
    int checks_ = 0;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt(double x) {
    char b[32];
    std::snprintf(b, sizeof b, "%.4g", x);
    return b;
}

SpectralField unit_field(int M, std::uint64_t seed, const Support& sup = Support::everything(), double decay = 0.0) {
    Rng rng(seed);
    SpectralField f = random_field(generic_metric(), M, rng, sup, decay);
    f *= 1.0 / f.l2_norm();
    return f;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

HarnessEnv acceptance_env(int M, const TimeGrid& g) {
    HarnessEnv env;
    env.bandlimit = M;
    env.grid = g;
    env.threads = 1;
    return env;
}

void exact_identities(Checks& c) {
    const int M = 8;
    for (Profile prof : {Profile::smooth, Profile::sharp})
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const SpectralField f = unit_field(M, seed);
            SpectralField acc = f.zeros_like();
            for (int N : dyadic_ladder(M)) acc += project_dyadic(f, N, prof);
            c.below("partition of unity", max_diff(acc, f), 1e-10);
        }
    const SpectralField f = unit_field(M, 4);
    for (int N : dyadic_ladder(M)) {
        const SpectralField a = project_dyadic(f, N, Profile::sharp);
        c.below("sharp idempotence", max_diff(project_dyadic(a, N, Profile::sharp), a), 1e-10);
        for (int K : dyadic_ladder(M))
            if (K != N) c.below("sharp orthogonality", project_dyadic(a, K, Profile::sharp).l2_norm(), 1e-10);
    }
    for (double p : {2.0, 2.5, 3.5})
        for (Profile prof : {Profile::smooth, Profile::sharp}) {
            const PowerNonlinearity nl{p, 1};
            const SpectralField g = unit_field(4, 13, Support::everything(), 1.0);
            for (int N : {1, 2, 4, 8}) {
                const SpectralField tele = bony_partial_sum(g, N, nl, 4, prof);
                const SpectralField direct = apply_F(project_leq(g, N, prof), nl, 4);
                c.below("Bony telescoping", (tele - direct).l2_norm(), 1e-10);
            }
        }
    for (auto [N0, N1, N2] : {std::array<int, 3>{4, 4, 1}, {4, 2, 2}, {8, 8, 2}, {8, 4, 4}, {8, 8, 1}})
        for (std::uint64_t seed : {1u, 2u, 3u}) c.below("cube pairing", cube_identity_check(N0, N1, N2, seed), 1e-10);
    for (auto [N0, N1, N2, N3] :
         {std::array<int, 4>{8, 1, 1, 1}, {16, 2, 2, 2}, {16, 2, 1, 1}, {16, 2, 2, 1}})
        for (std::uint64_t seed : {1u, 2u}) c.below("quadrilinear vanishing", vanishing_check(N0, N1, N2, N3, seed), 1e-13);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const SpectralField u = unit_field(M, 20 + seed);
        for (int os : {1, 2}) {
            const GridField g = to_grid(u, os);
            c.below("Parseval", std::abs(grid_lp_norm(g, 2.0) - u.l2_norm()), 1e-10);
            c.below("inversion", max_diff(to_spectral(g, M), u), 1e-10);
        }
        Rng rng(seed);
        const double s = 2.0 * rng.uniform() - 1.0, t = 2.0 * rng.uniform() - 1.0;
        c.below("group law", max_diff(propagate(propagate(u, s), t), propagate(u, s + t)), 1e-10);
        c.below("unitarity", std::abs(propagate(u, t).l2_norm() - u.l2_norm()), 1e-10);
    }
}

double duhamel_error(int n, double w) {
    TorusMetric m = generic_metric();
    m.laplace_scale = 1.0;
    const FreqIndex xi{1, 0, 0};
    const TimeGrid g{1.0, n};
    std::vector<SpectralField> frames;
    for (int k = 0; k < n; ++k) frames.push_back(delta_field(m, 1, xi, std::exp(cplx(0.0, w * g.t(k)))));
    const SpectralField D = duhamel_integral(SpaceTimePath(g, std::move(frames)), n / 2);
    return std::abs(D.at(xi) - oracle::duhamel_closed_form(m.laplace_scale * q_form(m, xi), w, 0.5));
}

void oracle_equivalence(Checks& c) {
    Rng rng(2);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const ModePath a = oracle::random_mode_path(rng, rng.uniform_int(1, 12), trial % 2 == 1);
        if (v2_norm(a) != oracle::brute_v2(a)) ++mismatches;
    }
    c.truth("V2 dynamic program equals exhaustive maximum on 1000 paths", mismatches == 0);

    double worst = 0.0;
    for (double p : {2.0, 2.5, 3.0, 3.7, 4.0, 5.0}) {
        const PowerNonlinearity nl{p, 1};
        const std::function<cplx(cplx)> F = [&](cplx z) { return nl(z); };
        for (int trial = 0; trial < 6; ++trial) {
            const double r = 0.05 + 1.5 * rng.uniform();
            const cplx z = std::polar(r, oracle::kTwoPi * rng.uniform());
            for (int k = 0; k <= max_wirtinger_order(p); ++k)
                for (int a = 0; a <= k; ++a) {
                    const cplx closed = wirtinger(z, nl, {a, k - a});
                    const cplx fd = oracle::wirtinger_fd(F, z, a, k - a, 0.02 * r);
                    const double scale = std::max(std::abs(closed), std::pow(r, p + 1.0 - k));
                    worst = std::max(worst, std::abs(closed - fd) / scale);
                }
        }
    }
    c.below("Wirtinger vs finite differences (relative)", worst, 1e-6);
    c.note("worst Wirtinger relative error " + fmt(worst));

    for (double w : {0.0, 3.0, -2.5}) {
        const double e1 = duhamel_error(32, w), e2 = duhamel_error(64, w), e3 = duhamel_error(128, w);
        c.within("Duhamel refinement ratio", e1 / e2, 3.5, 4.5);
        c.within("Duhamel refinement ratio", e2 / e3, 3.5, 4.5);
    }
}

void norm_structure(Checks& c) {
    for (double s : {-0.5, 0.0, 0.5, 1.2}) {
        const SpectralField u0 = unit_field(6, 3);
        const SpaceTimePath u = free_flow(u0, TimeGrid{0.7, 32});
        c.below("Y norm of a free flow", std::abs(y_norm(u, s) - sobolev_norm(u0, s)) / sobolev_norm(u0, s), 1e-12);
    }
    const TimeGrid g{1.0, 16};
    for (PathKind kind : {PathKind::step_atom, PathKind::gaussian_shell, PathKind::free_flow})
        for (double s : {-0.5, 0.5}) {
            Rng rng(9);
            auto draw = [](Rng& r) { return random_field(generic_metric(), 6, r, Support::everything()); };
            const SpaceTimePath u = random_path(kind, g, rng, draw, 4);
            long double acc = 0.0L;
            for (int N : dyadic_ladder(6)) {
                const double y =
                    y_norm(u.map([N](const SpectralField& f) { return project_dyadic(f, N, Profile::sharp); }), s);
                acc += static_cast<long double>(y) * y;
            }
            const double total = y_norm(u, s);
            c.below("sharp dyadic Y identity", std::abs(std::sqrt(static_cast<double>(acc)) - total) / total, 1e-12);
        }
    for (int N : {1, 2, 4, 8})
        for (double s : {-1.0, -0.5, 0.5, 1.0})
            for (std::uint64_t seed = 1; seed <= 4; ++seed) {
                Rng rng(seed);
                auto draw = [N](Rng& r) { return random_field(generic_metric(), N, r, Support::shell(N)); };
                const SpaceTimePath u = random_path(PathKind::step_atom, TimeGrid{1.0, 8}, rng, draw, 3);
                const double q = y_norm(u, s) / (std::pow(N, s) * y_norm(u, 0.0));
                c.within("dyadic scaling of Y", q, std::pow(2.0, -std::abs(s)), std::pow(2.0, std::abs(s)));
            }
}

void strichartz_scaling(Checks& c) {
    const HarnessEnv env = acceptance_env(16, TimeGrid{1.0, 8});
    for (const char* name : {"strichartz_L18_5", "strichartz_L6"}) {
        EstimateSpec s = find_preset(name);
        s.samplers = {SamplerSpec{SamplerKind::gaussian_shell}, SamplerSpec{SamplerKind::free_flow}};
        s.trials = 50;
        const ExperimentReport r = run_estimate(s, env);
        const double slope = r.slope ? r.slope->slope : INFINITY;
        c.below(std::string(name) + " slope", slope, s.predicted_exponent + 0.15);
        c.note(std::string(name) + " slope " + fmt(slope) + " vs " + fmt(s.predicted_exponent) + " (" +
               verdict_name(r.verdict) + ")");
    }
    EstimateSpec b = find_preset("bilinear");
    b.trials = 8;
    const ExperimentReport r = run_estimate(b, env);
    const double slope = r.slope ? r.slope->slope : INFINITY;
    c.below("bilinear slope in N2", slope, 0.5 + 0.15);
    c.below("bilinear N1-uniformity", r.uniformity, 3.0 + 1e-12);
    c.note("bilinear slope " + fmt(slope) + ", N1 top/bottom " + fmt(r.uniformity));
}

void linearization(Checks& c) {
    Rng rng(5);
    for (double p : {2.5, 3.5}) {
        const PowerNonlinearity nl{p, 1};
        double generic = 0.0, near = 0.0;
        auto near_zero = [&](cplx base) { return -base * (1.0 + 0.5 * rng.uniform()) + 1e-3 * rng.cnormal(); };
        for (int trial = 0; trial < 1000; ++trial) {
            const cplx u = rng.cnormal(), w = rng.cnormal();
            generic = std::max(generic, std::abs(ftc_linearize(u, w, nl, 16) - (nl(u + w) - nl(u))));
            const cplx w2 = near_zero(u);
            near = std::max(near, std::abs(ftc_linearize(u, w2, nl, 16) - (nl(u + w2) - nl(u))));
        }
        c.below("FTC linearization", generic, 1e-7);
        c.below("FTC linearization near zeros", near, 1e-5);

        generic = near = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const cplx lo = rng.cnormal(), hi = rng.cnormal();
            auto t = lp_difference_point(lo, hi, nl, 16);
            generic = std::max(generic, std::abs(t[0] + t[1] - (nl(lo + hi) - nl(lo))));
            const cplx hi2 = near_zero(lo);
            t = lp_difference_point(lo, hi2, nl, 16);
            near = std::max(near, std::abs(t[0] + t[1] - (nl(lo + hi2) - nl(lo))));
        }
        c.below("frequency-difference expansion", generic, 1e-7);
        c.below("frequency-difference expansion near zeros", near, 1e-5);

        generic = near = 0.0;
        auto second = [&](cplx a, cplx b, cplx cc, cplx d) {
            const auto t = second_order_point(a, b, cc, d, nl, 16);
            cplx acc = 0.0;
            for (cplx x : t) acc += x;
            return std::abs(acc - ((nl(a + b + cc + d) - nl(a + cc)) - (nl(a + b) - nl(a))));
        };
        for (int trial = 0; trial < 1000; ++trial) {
            const cplx a = rng.cnormal(), b = rng.cnormal(), cc = rng.cnormal(), d = rng.cnormal();
            generic = std::max(generic, second(a, b, cc, d));
            // Segments through (near) zeros of the low and the full sum.
            const cplx b2 = near_zero(a), d2 = near_zero(a + cc) - b2;
            near = std::max(near, second(a, b2, cc, d2));
            const cplx cc3 = -a + 1e-3 * rng.cnormal();
            near = std::max(near, second(a, b, cc3, d));
        }
        c.below("second-order expansion", generic, 1e-7);
        c.below("second-order expansion near zeros", near, 1e-5);
    }
}

void contraction(Checks& c) {
    const HarnessEnv env = acceptance_env(8, TimeGrid{0.5, 64});
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
        EstimateSpec s = find_preset("contraction").with_p(p);
        s.dyadic_range = {8};
        s.trials = 100;
        const ExperimentReport r = run_estimate(s, env);
        std::map<std::string, std::vector<double>> by_sampler;
        for (const auto& t : r.records) by_sampler[t.sampler].push_back(t.ratio);
        c.truth("contraction uses both samplers", by_sampler.size() == 2);
        std::string spread;
        for (auto& [name, ratios] : by_sampler) {
            std::sort(ratios.begin(), ratios.end());
            const double median = 0.5 * (ratios[(ratios.size() - 1) / 2] + ratios[ratios.size() / 2]);
            c.truth("at least 100 contraction trials for " + name, ratios.size() >= 100);
            c.below("contraction max/median at p=" + fmt(p) + " (" + name + ")", ratios.back() / median, 3.0 + 1e-12);
            spread += " " + name + " " + fmt(ratios.back() / median);
        }

        EstimateSpec sweep = find_preset("contraction").with_p(p);
        sweep.trials = 4;
        const ExperimentReport rs = run_estimate(sweep, env);
        const double slope = rs.slope ? rs.slope->slope : INFINITY;
        c.within("amplitude slope at p=" + fmt(p), slope, -0.1, 0.1);
        c.note("p=" + fmt(p) + " max/median" + spread + ", amplitude slope " + fmt(slope));
    }
}

void solver(Checks& c) {
    Rng rng(42);
    SpectralField u0 = random_field(generic_metric(), 8, rng, Support::everything(), 2.0);
    u0 *= 0.01 / sobolev_norm(u0, 0.5);
    const PowerNonlinearity nl{2.0, 1};
    const TimeGrid g{0.05, 16};
    const PicardResult pic = picard_solve(u0, nl, g, 2, 1e-13, 30);
    const SpaceTimePath ss = splitstep_solve(u0, nl, g.dt(), g.n, 2);
    double d = 0.0;
    for (int k = 0; k < g.n; ++k) d = std::max(d, (pic.solution.frames[k] - ss.frames[k]).l2_norm());
    c.below("Picard vs split-step in sup_t L2", d, 1e-4);
    c.truth("Picard recorded contraction ratios", !pic.diagnostics.ratios.empty());
    double worst_ratio = 0.0;
    for (std::size_t k = 0; k < pic.diagnostics.ratios.size(); ++k)
        worst_ratio = std::max(worst_ratio, pic.diagnostics.ratios[k]);
    c.below("Picard contraction ratio", worst_ratio, 0.5);
    c.note("Picard/split-step gap " + fmt(d) + ", worst ratio " + fmt(worst_ratio));

    SpectralField v0 = random_field(generic_metric(), 8, rng, Support::everything(), 2.0);
    v0 *= 0.5 / v0.l2_norm();
    const SpectralField v = splitstep_advance(v0, PowerNonlinearity{3.0, 1}, 1e-3, 1000, 2);
    c.below("split-step mass drift", std::abs(mass(v) - mass(v0)) / mass(v0), 1e-8);

    const TorusMetric m = generic_metric();
    const FreqIndex xi{1, -2, 1};
    const cplx A(0.6, -0.3);
    for (int sign : {1, -1}) {
        const SpaceTimePath u = splitstep_solve(delta_field(m, 3, xi, A), PowerNonlinearity{2.0, sign}, 0.01, 100, 2);
        double err = 0.0;
        for (int k = 0; k < u.grid.n; ++k)
            err = std::max(err, std::abs(u.frames[k].at(xi) -
                                         oracle::plane_wave_coefficient(A, 2.0, sign, m.laplace_scale * q_form(m, xi),
                                                                        k * 0.01)));
        c.below("plane wave", err, 1e-8);
    }
}

void exponent_arithmetic(Checks& c) {
    for (double p = 2.05; p < 2.96; p += 0.1) {
        const EpsilonBounds fine = epsilon_max(p, 1e-13), coarse = epsilon_max(p, 1e-9);
        c.below("epsilon edge stable under refinement", std::abs(fine.low - coarse.low), 2e-9);
        c.below("epsilon edge stable under refinement", std::abs(fine.high - coarse.high), 2e-9);
        const double e = fine.both();
        bool below_ok = true, above_bad = false;
        try {
            hoelder_exponents(p, e * (1.0 - 1e-6));
        } catch (const EpsilonTooLarge&) {
            below_ok = false;
        }
        try {
            hoelder_exponents(p, std::min(e * (1.0 + 1e-6) + 1e-11, 0.999));
        } catch (const EpsilonTooLarge&) {
            above_bad = true;
        }
        c.truth("admissible just below the edge", below_ok);
        c.truth("rejected just above the edge", above_bad);
        for (double frac : {0.1, 0.25, 0.5, 0.75, 0.99}) {
            const HoelderExponentSet h = hoelder_exponents(p, frac * e);
            c.below("3/r0 + 1/r1 = 1", std::abs(h.low_sum - 1.0), 1e-12);
            c.below("five-factor sum = 1", std::abs(h.high_sum - 1.0), 1e-12);
            for (double r : h.low) c.above("low exponents above 10/3", r, 10.0 / 3.0);
            for (double r : h.high) c.above("high exponents above 10/3", r, 10.0 / 3.0);
        }
    }
}

void negative_controls(Checks& c) {
    for (auto [N0, N1, N2] : {std::array<int, 3>{8, 8, 2}, {8, 4, 4}, {4, 4, 2}})
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const double shrunk = cube_identity_check(N0, N1, N2, seed, generic_metric(), N2 / 2.0);
            c.above("shrunken cube relation must break the identity", shrunk, 1e-6);
        }
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        c.above("comparable frequencies must not vanish", vanishing_check(8, 8, 2, 1, seed), 1e-6);
        c.above("comparable frequencies must not vanish", vanishing_check(4, 4, 1, 1, seed), 1e-6);
    }
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        void (*run)(Checks&);
    };
    const Criterion criteria[] = {
        {1, "exact identities", exact_identities},
        {2, "oracle equivalence", oracle_equivalence},
        {3, "norm structure", norm_structure},
        {4, "Strichartz scaling", strichartz_scaling},
        {5, "linearization", linearization},
        {6, "contraction", contraction},
        {7, "solver", solver},
        {8, "exponent arithmetic", exponent_arithmetic},
        {9, "negative controls", negative_controls},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Checks c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.truth(std::string("threw: ") + e.what(), false);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %d (%s): %s [%.1fs]\n", c.ok() ? "PASS" : "FAIL", cr.id, cr.name,
                    c.summary().c_str(), secs);
        std::fflush(stdout);
        if (!c.ok()) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
