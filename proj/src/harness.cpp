#include "torus_nls/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>
#include <unordered_map>

#include "torus_nls/errors.hpp"
#include "torus_nls/evolution.hpp"
#include "torus_nls/solver.hpp"

namespace tnls {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string verdict_label(Verdict v, const EstimateSpec& spec) {
    if (v == Verdict::pass && spec.sampled_sup) return "consistent (sampled sup is a lower bound)";
    return verdict_name(v);
}

const char* sampler_name(SamplerKind k) {
    switch (k) {
        case SamplerKind::gaussian_shell: return "gaussian_shell";
        case SamplerKind::free_flow: return "free_flow";
        case SamplerKind::step_atom: return "step_atom";
        case SamplerKind::solver_output: return "solver_output";
    }
    return "?";
}

SamplerKind parse_sampler(const std::string& s) {
    if (s == "gaussian_shell") return SamplerKind::gaussian_shell;
    if (s == "free_flow") return SamplerKind::free_flow;
    if (s == "step_atom") return SamplerKind::step_atom;
    if (s == "solver_output") return SamplerKind::solver_output;
    throw UsageError("unknown sampler kind '" + s + "'");
}

PowerNonlinearity TrialContext::nl() const { return PowerNonlinearity{spec.p, spec.sign}; }

double TrialContext::s_c() const { return s_critical(spec.p); }

SpectralField TrialContext::field(const Support& support, double decay, double norm_s, double scale) {
    SpectralField f = random_field(env.metric, M, rng, support, decay);
    const double n = sobolev_norm(f, norm_s);
    if (n > 0.0) f *= scale / n;
    return f;
}

SpaceTimePath TrialContext::path(const Support& support, double decay, double norm_s) {
    auto draw = [&](Rng& r) {
        SpectralField f = random_field(env.metric, M, r, support, decay);
        const double n = sobolev_norm(f, norm_s);
        if (n > 0.0) f *= sampler.amplitude * scale / n;
        return f;
    };
    switch (sampler.kind) {
        case SamplerKind::gaussian_shell: return random_path(PathKind::gaussian_shell, grid, rng, draw);
        case SamplerKind::free_flow: return random_path(PathKind::free_flow, grid, rng, draw);
        case SamplerKind::step_atom: return random_path(PathKind::step_atom, grid, rng, draw, sampler.pieces);
        case SamplerKind::solver_output: {
            const SpectralField u0 = draw(rng);
            return picard_solve(u0, nl(), grid, env.oversample, 1e-11, 60).solution;
        }
    }
    throw UsageError("unknown sampler kind");
}

void EstimateSpec::validate() const {
    if (name.empty()) throw UsageError("estimate spec without a name");
    if (dyadic_range.empty()) throw UsageError(name + ": empty dyadic range");
    for (std::size_t i = 0; i < dyadic_range.size(); ++i) {
        if (!is_dyadic(dyadic_range[i])) throw UsageError(name + ": range entries must be powers of two");
        if (i > 0 && dyadic_range[i] <= dyadic_range[i - 1]) throw UsageError(name + ": range must ascend");
    }
    for (int n : secondary_range)
        if (!is_dyadic(n)) throw UsageError(name + ": secondary range entries must be powers of two");
    if (trials < 1) throw UsageError(name + ": trials must be at least 1");
    if (samplers.empty()) throw UsageError(name + ": no samplers");
    if (!measure || !bandlimit_for) throw UsageError(name + ": incomplete estimate spec");
    if (!(slack >= 0.0) || !(ratio_cap >= 1.0)) throw UsageError(name + ": slack must be >= 0 and ratio_cap >= 1");
    if (time_steps < 0 || time_steps == 1) throw UsageError(name + ": time_steps must be 0 or at least 2");
}

EstimateSpec EstimateSpec::with_p(double new_p) const {
    EstimateSpec s = *this;
    s.p = new_p;
    if (exponent_of_p) s.predicted_exponent = exponent_of_p(new_p);
    return s;
}

SlopeFit fit_scaling_slope(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 3) throw DegenerateSeries("slope fit needs at least 3 points");
    std::vector<double> x, y;
    for (const auto& [n, v] : series) {
        if (!(n > 0.0) || !(v > 0.0) || !std::isfinite(n) || !std::isfinite(v))
            throw DegenerateSeries("slope fit needs positive finite values");
        x.push_back(std::log2(n));
        y.push_back(std::log2(v));
    }
    const double k = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DegenerateSeries("slope fit needs at least two distinct scales");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        rss += r * r;
    }
    f.residual = std::sqrt(rss / k);
    return f;
}

namespace {

struct Analysis {
    std::vector<std::pair<int, double>> max_ratio;
    std::optional<SlopeFit> slope;
    double bottom_max = 0.0;
    double top_max = 0.0;
    bool bounded = true;
    double uniformity = 0.0;
    bool uniform = true;
    bool degenerate = false;
    bool structural_ok = true;
};

// Top-half max against bottom-half max of an ordered series.
std::pair<double, double> halves(const std::vector<double>& v) {
    const std::size_t h = v.size() / 2;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) (i < h ? lo : hi) = std::max(i < h ? lo : hi, v[i]);
    return {lo, hi};
}

Analysis analyze(const std::vector<TrialRecord>& records, const EstimateSpec& spec, double ratio_cap) {
    Analysis a;
    bool all_zero = true;
    std::map<int, double> per_n;
    std::map<int, std::map<int, double>> per_n2;
    for (const auto& r : records) {
        if (!r.ok) a.structural_ok = false;
        if (r.lhs != 0.0) all_zero = false;
        per_n[r.N] = std::max(per_n[r.N], r.ratio);
        per_n2[r.N][r.N2] = std::max(per_n2[r.N][r.N2], r.ratio);
    }
    a.degenerate = all_zero;
    for (const auto& [n, v] : per_n) a.max_ratio.emplace_back(n, v);

    std::vector<double> normalized;
    std::vector<std::pair<double, double>> series;
    for (const auto& [n, v] : a.max_ratio) {
        normalized.push_back(v / std::pow(static_cast<double>(n), spec.predicted_exponent));
        if (v > 0.0) series.emplace_back(n, v);
    }
    if (normalized.size() >= 2) {
        auto [lo, hi] = halves(normalized);
        a.bottom_max = lo;
        a.top_max = hi;
        a.bounded = hi <= ratio_cap * lo;
    }
    if (spec.fit_slope && series.size() >= 3 && series.size() == a.max_ratio.size()) a.slope = fit_scaling_slope(series);

    if (!spec.secondary_range.empty()) {
        for (const auto& [n, row] : per_n2) {
            std::vector<double> v;
            for (const auto& [n2, r] : row) v.push_back(r);
            if (v.size() < 2) continue;
            auto [lo, hi] = halves(v);
            const double q = lo > 0.0 ? hi / lo : (hi > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            a.uniformity = std::max(a.uniformity, q);
            if (hi > ratio_cap * lo) a.uniform = false;
        }
    }
    return a;
}

}  // namespace

Verdict decide(const ExperimentReport& r, double slack, double ratio_cap) {
    const Analysis a = analyze(r.records, r.spec, ratio_cap);
    if (!a.structural_ok) return Verdict::fail;
    if (a.degenerate) return Verdict::pass;
    if (!a.bounded || !a.uniform) return Verdict::fail;
    if (r.spec.fit_slope) {
        if (!a.slope) return Verdict::inconclusive;
        if (a.slope->slope > r.spec.predicted_exponent + slack) return Verdict::fail;
    }
    return Verdict::pass;
}

ExperimentReport run_estimate(const EstimateSpec& spec, const HarnessEnv& env) {
    spec.validate();
    env.metric.validate();
    env.grid.validate(!env.allow_large_T);
    if (env.oversample < 1) throw UsageError("oversample must be at least 1");
    if (env.threads < 1) throw UsageError("threads must be at least 1");
    const int steps = spec.time_steps > 0 ? spec.time_steps : env.grid.n;
    if (!env.unsafe && (2 * env.bandlimit + 1 > 33 || steps > 512))
        throw GuardExceeded("desk-scale guard: lattice " + std::to_string(2 * env.bandlimit + 1) + "^3, " +
                            std::to_string(steps) + " time samples (limits 33^3 and 512; pass --unsafe to lift)");
    if (!(spec.p > spec.min_p && spec.p < spec.max_p))
        throw UsageError(spec.name + " does not apply at p = " + std::to_string(spec.p));

    struct Cell {
        int N, N2, M;
    };
    std::vector<Cell> cells;
    const std::vector<int> secondary = spec.secondary_range.empty() ? std::vector<int>{0} : spec.secondary_range;
    for (int N : spec.dyadic_range)
        for (int N2 : secondary) {
            if (!spec.secondary_range.empty() && spec.secondary_valid && !spec.secondary_valid(N, N2)) continue;
            const int need = spec.bandlimit_for(N, N2);
            if (need > env.bandlimit) continue;
            cells.push_back({N, N2, spec.use_env_lattice ? env.bandlimit : need});
        }
    if (cells.empty()) throw UsageError(spec.name + ": no scale fits bandlimit " + std::to_string(env.bandlimit));

    const TimeGrid grid{env.grid.T, steps};
    const std::size_t ns = spec.samplers.size();
    const std::size_t nc = cells.size();
    const std::size_t nt = static_cast<std::size_t>(spec.trials);
    const std::size_t total = ns * nc * nt;
    std::vector<TrialRecord> records(total);
    std::vector<std::exception_ptr> errors(total);

    auto work = [&](std::size_t i) {
        const std::size_t t = i % nt;
        const std::size_t c = (i / nt) % nc;
        const std::size_t s = i / (nt * nc);
        const std::uint64_t stream = spec.shared_data ? s * nt + t : i;
        TrialContext ctx{spec, env, spec.samplers[s], cells[c].N, cells[c].N2, cells[c].M, grid,
                         Rng(stream_seed(spec.seed, stream))};
        const Measurement m = spec.measure(ctx);
        TrialRecord& r = records[i];
        r.N = cells[c].N;
        r.N2 = cells[c].N2;
        r.trial = static_cast<int>(t);
        r.sampler = sampler_name(spec.samplers[s].kind);
        r.lhs = m.lhs;
        r.rhs = m.rhs;
        r.ok = m.ok;
        r.note = m.note;
        if (!std::isfinite(m.lhs) || !std::isfinite(m.rhs))
            throw DomainError(spec.name + ": non-finite measurement at N = " + std::to_string(r.N));
        if (m.rhs <= 0.0)
            throw SamplerDegenerate(spec.name + ": sampler produced zero data at N = " + std::to_string(r.N));
        r.ratio = m.lhs / m.rhs;
    };

    const int nthreads = static_cast<int>(std::min<std::size_t>(env.threads, total));
    std::atomic<std::size_t> next{0};
    auto loop = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            try {
                work(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (nthreads <= 1) {
        loop();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < nthreads; ++k) pool.emplace_back(loop);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    ExperimentReport rep;
    rep.spec = spec;
    rep.env = env;
    rep.env.grid = grid;
    rep.records = std::move(records);
    const Analysis a = analyze(rep.records, spec, spec.ratio_cap);
    rep.max_ratio = a.max_ratio;
    rep.slope = a.slope;
    rep.bottom_max = a.bottom_max;
    rep.top_max = a.top_max;
    rep.uniformity = a.uniformity;
    rep.degenerate = a.degenerate;
    rep.structural_ok = a.structural_ok;
    rep.verdict = decide(rep, spec.slack, spec.ratio_cap);
    return rep;
}

namespace {

constexpr double kTenThirds = 10.0 / 3.0;

std::array<double, 2> low_group(double p, double e) {
    return {15.0 * p / (5.0 * p - 2.0 * (1.0 - e)), 5.0 * p / (2.0 * (1.0 - e))};
}

std::array<double, 5> high_group(double p, double e) {
    const double r01 = 20.0 * p / ((1.0 - e) * p * p + (1.0 + 5.0 * e) * p + 4.0 * e);
    const double r2 = 10.0 * p / (2.0 * p * p - 4.0 - 3.0 * (1.0 - e / 3.0) * p * (p - 2.0));
    const double r3 = 5.0 * p / (2.0 * (1.0 - e));
    const double r4 = 10.0 / (3.0 * (1.0 - e));
    return {r01, r01, r2, r3, r4};
}

// Index of the first exponent that is not a finite value above 10/3, or -1.
template <std::size_t K>
int first_bad(const std::array<double, K>& r) {
    for (std::size_t i = 0; i < K; ++i)
        if (!std::isfinite(r[i]) || !(r[i] > kTenThirds)) return static_cast<int>(i);
    return -1;
}

void check_p_eps(double p, double eps) {
    if (!(p > 2.0 && p < 3.0)) throw UsageError("Hoelder exponents need 2 < p < 3");
    if (!(eps > 0.0 && eps < 1.0)) throw UsageError("Hoelder exponents need 0 < eps < 1");
}

template <class Valid>
double bisect_edge(Valid&& valid, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (valid(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace

HoelderExponentSet hoelder_exponents(double p, double eps) {
    check_p_eps(p, eps);
    HoelderExponentSet h;
    h.p = p;
    h.eps = eps;
    h.low = low_group(p, eps);
    h.high = high_group(p, eps);
    if (int i = first_bad(h.low); i >= 0)
        throw EpsilonTooLarge("low r" + std::to_string(i) + " > 10/3", h.low[i]);
    if (int i = first_bad(h.high); i >= 0)
        throw EpsilonTooLarge("high r" + std::to_string(i) + " > 10/3", h.high[i]);
    h.low_sum = 3.0 / h.low[0] + 1.0 / h.low[1];
    h.high_sum = 0.0;
    for (double r : h.high) h.high_sum += 1.0 / r;
    h.high_weighted_sum = h.high_sum - 1.0 / h.high[4] + (p - 2.0) / h.high[4];
    return h;
}

EpsilonBounds epsilon_max(double p, double tol) {
    check_p_eps(p, 0.5);
    EpsilonBounds b;
    auto low_ok = [&](double e) { return first_bad(low_group(p, e)) < 0; };
    auto high_ok = [&](double e) { return first_bad(high_group(p, e)) < 0; };
    const double tiny = 1e-9;
    if (!low_ok(tiny) || !high_ok(tiny)) throw DomainError("no admissible epsilon near 0");
    b.low = bisect_edge(low_ok, tiny, 1.0, tol);
    b.high = bisect_edge(high_ok, tiny, 1.0, tol);
    return b;
}

CubePairedSum cube_paired_integral(const SpaceTimePath& a, const SpaceTimePath& b, const SpaceTimePath& h, int side,
                                   double R) {
    require_compatible(a, b);
    if (!(a.grid == h.grid)) throw GridMismatch("cube pairing: h lives on another time grid");
    if (!(a.metric() == h.metric())) throw GridMismatch("cube pairing: h uses another metric");
    const int M = a.bandlimit();
    const CubeDecomposition d = make_cube_decomposition(M, side);
    const SpectralField& shape = a.frames.front();
    std::vector<std::uint32_t> cube_of(shape.size());
    shape.for_each_mode([&](const FreqIndex& xi, std::size_t idx) { cube_of[idx] = static_cast<std::uint32_t>(d.locate(xi)); });

    std::unordered_map<std::uint64_t, std::complex<long double>> cells;
    const long double dt = a.grid.dt();
    const SpectralField& hshape = h.frames.front();
    for (int k = 0; k < a.grid.n; ++k) {
        const auto& fa = a.frames[k];
        const auto& fb = b.frames[k];
        const auto& fh = h.frames[k];
        std::vector<std::pair<FreqIndex, cplx>> hs;
        hshape.for_each_mode([&](const FreqIndex& z, std::size_t idx) {
            if (fh[idx] != cplx(0.0)) hs.emplace_back(z, fh[idx]);
        });
        fa.for_each_mode([&](const FreqIndex& xi, std::size_t ia) {
            const cplx va = fa[ia];
            if (va == cplx(0.0)) return;
            for (const auto& [z, vh] : hs) {
                const FreqIndex eta{-xi[0] - z[0], -xi[1] - z[1], -xi[2] - z[2]};
                if (std::abs(eta[0]) > M || std::abs(eta[1]) > M || std::abs(eta[2]) > M) continue;
                const std::size_t ib = fb.index(eta);
                const cplx vb = fb[ib];
                if (vb == cplx(0.0)) continue;
                const cplx term = va * vb * vh;
                const std::uint64_t key = static_cast<std::uint64_t>(cube_of[ia]) * d.cubes.size() + cube_of[ib];
                cells[key] += dt * std::complex<long double>(term.real(), term.imag());
            }
        });
    }

    // Deterministic summation order.
    std::vector<std::pair<std::uint64_t, std::complex<long double>>> sorted(cells.begin(), cells.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    CubePairedSum out;
    std::complex<long double> total = 0.0L, paired = 0.0L;
    long double abs_paired = 0.0L;
    for (const auto& [key, v] : sorted) {
        total += v;
        const std::size_t j = key / d.cubes.size();
        const std::size_t l = key % d.cubes.size();
        if (cubes_related(d.cubes[j], d.cubes[l], R)) {
            paired += v;
            abs_paired += std::abs(v);
        }
    }
    out.total = cplx(static_cast<double>(total.real()), static_cast<double>(total.imag()));
    out.paired = cplx(static_cast<double>(paired.real()), static_cast<double>(paired.imag()));
    out.abs_paired = static_cast<double>(abs_paired);
    return out;
}

namespace {

SpectralField unit(SpectralField f) {
    const double n = f.l2_norm();
    if (n > 0.0) f *= 1.0 / n;
    return f;
}

// int of the pointwise product of the fields over the torus, on a grid fine enough to be exact.
cplx product_integral(const std::vector<const SpectralField*>& fs) {
    int M = 0;
    for (auto* f : fs) M = std::max(M, f->bandlimit());
    const int n = smooth_size(std::max(2 * M + 1, static_cast<int>(fs.size()) * M + 1));
    GridField acc = to_grid_n(*fs.front(), n);
    for (std::size_t i = 1; i < fs.size(); ++i) acc = grid_product(acc, to_grid_n(*fs[i], n));
    return acc.mean();
}

}  // namespace

double cube_identity_check(int N0, int N1, int N2, std::uint64_t seed, const TorusMetric& m, double R) {
    for (int n : {N0, N1, N2})
        if (!is_dyadic(n)) throw UsageError("cube_identity_check needs dyadic scales");
    if (R <= 0.0) R = 2.0 * N2;
    const int M = std::max({N0, N1, 2 * N2});
    Rng rng(stream_seed(seed, 0));
    const SpectralField v = unit(random_field(m, M, rng, Support::shell(N0)));
    const SpectralField u = unit(random_field(m, M, rng, Support::shell(N1)));
    const SpectralField g = unit(random_field(m, M, rng, Support::ball(2 * N2)));
    const cplx direct = product_integral({&v, &u, &g});
    const TimeGrid one{1.0, 1};
    auto single = [&](const SpectralField& f) { return SpaceTimePath(one, {f}); };
    const CubePairedSum s = cube_paired_integral(single(v), single(u), single(g), N2, R);
    return std::abs(direct - s.paired);
}

double vanishing_check(int N0, int N1, int N2, int N3, std::uint64_t seed, const TorusMetric& m) {
    for (int n : {N0, N1, N2, N3})
        if (!is_dyadic(n)) throw UsageError("vanishing_check needs dyadic scales");
    const int M = std::max({N0, N1, N2, N3});
    Rng rng(stream_seed(seed, 0));
    const TimeGrid grid{0.01, 2};
    std::vector<SpaceTimePath> paths;
    for (int n : {N0, N1, N2, N3}) paths.push_back(free_flow(unit(random_field(m, M, rng, Support::shell(n))), grid));
    cplx acc = 0.0;
    for (int k = 0; k < grid.n; ++k) {
        acc += grid.dt() * product_integral({&paths[0].frames[k], &paths[1].frames[k], &paths[2].frames[k],
                                             &paths[3].frames[k]});
    }
    return std::abs(acc);
}

}  // namespace tnls
