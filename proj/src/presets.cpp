#include <algorithm>
#include <cmath>
#include <functional>

#include "torus_nls/errors.hpp"
#include "torus_nls/harness.hpp"

namespace tnls {

namespace {

using Frames = std::vector<GridField>;

Frames to_frames(const SpaceTimePath& u, int n) {
    Frames out;
    out.reserve(u.frames.size());
    for (const auto& f : u.frames) out.push_back(to_grid_n(f, n));
    return out;
}

Frames operator*(Frames a, const Frames& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = grid_product(a[k], b[k]);
    return a;
}

Frames pointwise(Frames a, const std::function<cplx(cplx)>& fn) {
    for (auto& g : a)
        for (auto& z : g.samples) z = fn(z);
    return a;
}

Frames wirtinger_frames(const Frames& h, const PowerNonlinearity& nl, WirtingerOrder o) {
    const WirtingerForm form(nl, o);
    return pointwise(h, [&](cplx z) { return form(z); });
}

double st_lp(const Frames& g, double q, double dt) {
    long double acc = 0.0L;
    for (const auto& f : g) acc += dt * std::pow(grid_lp_norm(f, q), q);
    return std::pow(static_cast<double>(acc), 1.0 / q);
}

cplx st_integral(const Frames& g, double dt) {
    std::complex<long double> acc = 0.0L;
    for (const auto& f : g) {
        const cplx m = f.mean();
        acc += std::complex<long double>(m.real(), m.imag());
    }
    return dt * cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
}

SpaceTimePath from_frames(const Frames& g, int M, const TimeGrid& grid) {
    std::vector<SpectralField> fr;
    fr.reserve(g.size());
    for (const auto& f : g) fr.push_back(to_spectral(f, M));
    return SpaceTimePath(grid, std::move(fr));
}

// Grid on which the mean of a k-fold product of bandlimit-M fields is exact.
int product_grid(int M, int factors, int oversample) {
    return smooth_size(std::max(grid_size(M, oversample), factors * M + 1));
}

SpaceTimePath P(const SpaceTimePath& u, int N) {
    return u.map([N](const SpectralField& f) { return project_dyadic(f, N, Profile::sharp); });
}

SpaceTimePath P_leq(const SpaceTimePath& u, int N) {
    return u.map([N](const SpectralField& f) { return project_leq(f, N, Profile::sharp); });
}

SpectralField gradient_component(const SpectralField& f, int j) {
    SpectralField g = f;
    const double a = std::sqrt(f.metric().laplace_scale * f.metric().theta[j]);
    f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) { g[idx] *= cplx(0.0, a * xi[j]); });
    return g;
}

SpectralField laplacian(const SpectralField& f) {
    SpectralField g = f;
    f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        g[idx] *= -f.metric().laplace_scale * q_form(f.metric(), xi);
    });
    return g;
}

GridField gradient_abs(const SpectralField& f, int n) {
    GridField out(f.metric(), n);
    for (int j = 0; j < 3; ++j) {
        const GridField c = to_grid_n(gradient_component(f, j), n);
        for (std::size_t i = 0; i < c.samples.size(); ++i) out.samples[i] += std::norm(c.samples[i]);
    }
    for (auto& z : out.samples) z = std::sqrt(z.real());
    return out;
}

Frames gradient_abs(const SpaceTimePath& u, int n) {
    Frames out;
    for (const auto& f : u.frames) out.push_back(gradient_abs(f, n));
    return out;
}

// Random data at critical regularity: coefficients ~ <xi>^{-s_c - 3/2}, unit H^{s_c} norm.
SpaceTimePath critical_path(TrialContext& c) { return c.path(Support::everything(), c.s_c() + 1.5, c.s_c()); }

// Keep the candidate (lhs, rhs) with the largest quotient.
struct Best {
    Measurement m{0.0, 0.0, true, ""};
    double ratio = -1.0;
    void offer(double lhs, double rhs, const std::string& note) {
        if (!(rhs > 0.0)) return;
        const double r = lhs / rhs;
        if (r > ratio) {
            ratio = r;
            m = Measurement{lhs, rhs, true, note};
        }
    }
};

std::string order_note(WirtingerOrder o) { return "D(" + std::to_string(o.a) + "," + std::to_string(o.b) + ")"; }

std::vector<WirtingerOrder> orders_of(int k) {
    std::vector<WirtingerOrder> out;
    for (int a = k; a >= 0; --a) out.push_back({a, k - a});
    return out;
}

std::vector<SamplerSpec> samplers(std::initializer_list<SamplerKind> kinds) {
    std::vector<SamplerSpec> out;
    for (auto k : kinds) out.push_back(SamplerSpec{k});
    return out;
}

// ---- measurements ----

Measurement strichartz(TrialContext& c, double q) {
    const SpaceTimePath u = c.path(Support::centered_cube(c.N), 0.0, 0.0);
    return {spacetime_lp(u, q, q, c.env.oversample), y_norm(u, 0.0)};
}

// Primary scale c.N is the low frequency N2, secondary c.N2 the high frequency N1.
Measurement bilinear(TrialContext& c) {
    const SpaceTimePath hi = c.path(Support::shell(c.N2), 0.0, 0.0);
    const SpaceTimePath lo = c.path(Support::shell(c.N), 0.0, 0.0);
    const int n = product_grid(c.M, 2, c.env.oversample);
    const double lhs = st_lp(to_frames(hi, n) * to_frames(lo, n), 2.0, c.grid.dt());
    return {lhs, y_norm(hi, 0.0) * y_norm(lo, 0.0)};
}

Measurement critical_strichartz(TrialContext& c, double r) {
    const SpaceTimePath u = c.path(Support::ball(c.N), c.s_c() + 1.5, c.s_c());
    return {spacetime_lp(u, r, r, c.env.oversample), y_norm(u, c.s_c())};
}

Measurement gradient_norm(TrialContext& c, double r, bool second_order) {
    const SpaceTimePath u = c.path(Support::ball(c.N), c.s_c() + 1.5, c.s_c());
    const int n = grid_size(c.M, c.env.oversample);
    Frames g;
    if (second_order) {
        g = to_frames(u.map(laplacian), n);
    } else {
        g = gradient_abs(u, n);
    }
    return {st_lp(g, r, c.grid.dt()), y_norm(u, c.s_c())};
}

Measurement frac_product(TrialContext& c) {
    constexpr double s = 0.5;
    const SpectralField f = c.field(Support::ball(c.N), 1.0, 0.0, 1.0);
    const SpectralField g = c.field(Support::ball(c.N), 1.0, 0.0, 1.0);
    const int n = grid_size(c.M, 2);
    const SpectralField fg = to_spectral(grid_product(to_grid_n(f, n), to_grid_n(g, n)), 2 * c.M);
    const double lhs = fractional_multiplier(fg, s, MultiplierKind::homogeneous).l2_norm();
    auto L4 = [&](const SpectralField& x) { return grid_lp_norm(to_grid_n(x, n), 4.0); };
    auto D = [&](const SpectralField& x) { return fractional_multiplier(x, s, MultiplierKind::homogeneous); };
    return {lhs, L4(D(f)) * L4(g) + L4(f) * L4(D(g))};
}

Measurement frac_chain(TrialContext& c) {
    constexpr double s = 0.5;
    const PowerNonlinearity nl = c.nl();
    const SpectralField u = c.field(Support::ball(c.N), 1.0, 0.0, 1.0);
    const int n = grid_size(c.M, 4);
    const GridField ug = to_grid_n(u, n);
    const SpectralField Fu = to_spectral(apply_F_grid(ug, nl), 2 * c.M);
    const double lhs = fractional_multiplier(Fu, s, MultiplierKind::homogeneous).l2_norm();
    GridField dF(ug.metric, n);
    for (std::size_t i = 0; i < ug.samples.size(); ++i)
        dF.samples[i] = (nl.p + 1.0) * std::pow(std::abs(ug.samples[i]), nl.p);
    const GridField Du = to_grid_n(fractional_multiplier(u, s, MultiplierKind::homogeneous), n);
    return {lhs, grid_lp_norm(dF, 4.0) * grid_lp_norm(Du, 4.0)};
}

Measurement nonlinear_bernstein(TrialContext& c) {
    constexpr double q = 4.0;
    const double alpha = c.spec.p - 2.0;
    const SpectralField u = c.field(Support::ball(2), 0.0, 0.0, 1.0);
    const int n = grid_size(c.M, 4);
    GridField G = to_grid_n(u, n);
    for (auto& z : G.samples) z = std::pow(std::abs(z), alpha);
    const SpectralField PG = project_dyadic(to_spectral(G, c.M), c.N, Profile::sharp);
    const double lhs = grid_lp_norm(to_grid(PG, c.env.oversample), q / alpha);
    const double rhs = std::pow(grid_lp_norm(gradient_abs(u, grid_size(c.M, c.env.oversample)), q), alpha);
    return {lhs, rhs};
}

Measurement bony(TrialContext& c) {
    const PowerNonlinearity nl = c.nl();
    const SpectralField g = c.field(Support::everything(), c.s_c() + 1.5, c.s_c(), 1.0);
    const double lhs = bony_tail(g, c.N, nl, 1.2, 4, Profile::smooth);
    const SpectralField tele = bony_partial_sum(g, c.N, nl, 4, Profile::smooth);
    const SpectralField direct = apply_F(project_leq(g, c.N, Profile::smooth), nl, 4);
    const double err = (tele - direct).l2_norm();
    Measurement m{lhs, 1.0, err <= 1e-10 * std::max(1.0, direct.l2_norm()), ""};
    if (!m.ok) m.note = "telescoping residual " + std::to_string(err);
    return m;
}

Measurement cubic_main(TrialContext& c) {
    const int N = c.N;
    const int N2 = std::max(N / 2, 1);
    const int N3 = std::max(N / 4, 1);
    const double dt = c.grid.dt();
    Best best;

    {  // N0 ~ N1: cube pairing at side N2
        const SpaceTimePath v = c.path(Support::shell(N), 0.0, 0.0);
        const SpaceTimePath u1 = c.path(Support::shell(N), 0.0, 0.0);
        const SpaceTimePath u2 = c.path(Support::shell(N2), 0.0, 0.0);
        const SpaceTimePath u3 = c.path(Support::shell(N3), 0.0, 0.0);
        const int n = product_grid(c.M, 2, 2);
        const SpaceTimePath h = from_frames(to_frames(u2, n) * to_frames(u3, n), c.M, c.grid);
        const double lhs = cube_paired_integral(v, u1, h, N2, 2.0 * N2).abs_paired;
        const double rhs = std::pow(double(N3) / N2, 1.0 / 6.0) * y_norm(v, -0.5) * y_norm(u1, 0.5) *
                           y_norm(u2, 0.5) * y_norm(u3, 0.5);
        best.offer(lhs, rhs, "case N0~N1");
    }
    {  // N0 <= N1 ~ N2 >= N3: direct Hoelder chain
        const int N0 = std::max(N / 2, 1);
        const SpaceTimePath v = c.path(Support::shell(N0), 0.0, 0.0);
        const SpaceTimePath u1 = c.path(Support::shell(N), 0.0, 0.0);
        const SpaceTimePath u2 = c.path(Support::shell(N), 0.0, 0.0);
        const SpaceTimePath u3 = c.path(Support::shell(N3), 0.0, 0.0);
        const int n = product_grid(c.M, 4, 2);
        const double lhs =
            std::abs(st_integral(to_frames(v, n) * to_frames(u1, n) * to_frames(u2, n) * to_frames(u3, n), dt));
        const double factor = std::pow(double(N0), 11.0 / 18.0) * std::pow(double(N3), 1.0 / 6.0) /
                              std::pow(double(N) * N, 7.0 / 18.0);
        const double rhs = factor * y_norm(v, -0.5) * y_norm(u1, 0.5) * y_norm(u2, 0.5) * y_norm(u3, 0.5);
        best.offer(lhs, rhs, "case N0<=N1~N2");
    }
    return best.m;
}

Measurement contraction(TrialContext& c) {
    const PowerNonlinearity nl = c.nl();
    const double sc = c.s_c();
    c.scale = c.N / 8.0;
    const SpaceTimePath u = critical_path(c);
    const SpaceTimePath w = critical_path(c);
    const int os = 2;
    const SpaceTimePath sum = u + w;
    std::vector<SpectralField> G;
    for (int k = 0; k < c.grid.n; ++k)
        G.push_back(apply_F(sum.frames[k], nl, os) - apply_F(u.frames[k], nl, os));
    const SpaceTimePath g(c.grid, std::move(G));

    std::vector<SpaceTimePath> vs{g};
    for (int j = 0; j < 2; ++j) {
        auto draw = [&](Rng& r) { return random_field(c.env.metric, c.M, r, Support::everything(), 0.0); };
        vs.push_back(random_path(PathKind::step_atom, c.grid, c.rng, draw, 1 + c.rng.uniform_int(1, 4)));
    }
    double lhs = 0.0;
    for (const auto& v : vs) {
        const double yv = y_norm(v, -sc);
        if (yv > 0.0) lhs = std::max(lhs, std::abs(duality_pairing(g, v)) / yv);
    }
    const double yw = y_norm(w, sc);
    return {lhs, yw * std::pow(y_norm(u, sc) + yw, nl.p)};
}

Measurement incomparable(TrialContext& c, bool high_output) {
    const PowerNonlinearity nl = c.nl();
    const double sc = c.s_c(), p = nl.p, dt = c.grid.dt();
    const int N0 = high_output ? c.N : 1;
    const int N1 = high_output ? 1 : c.N;
    const SpaceTimePath v = c.path(Support::shell(N0), 0.0, 0.0);
    const SpaceTimePath u = critical_path(c);
    const SpaceTimePath w = critical_path(c);
    const SpaceTimePath hl = P_leq(u + w, N1), wl = P_leq(w, N1), uN = P(u, N1), wN = P(w, N1);
    const int n = grid_size(c.M, c.env.oversample);
    const Frames V = to_frames(v, n), H = to_frames(hl, n), WL = to_frames(wl, n);
    const Frames VU = V * to_frames(uN, n), VW = V * to_frames(wN, n);
    const double yv = y_norm(v, -sc), yh = y_norm(hl, sc);
    Best best;
    for (auto o : orders_of(1)) {
        const double lhs = std::abs(st_integral(VW * wirtinger_frames(H, nl, o), dt));
        best.offer(lhs, yv * y_norm(wN, sc) * std::pow(yh, p), "g=w " + order_note(o));
    }
    for (auto o : orders_of(2)) {
        const double lhs = std::abs(st_integral(VU * WL * wirtinger_frames(H, nl, o), dt));
        best.offer(lhs, yv * y_norm(uN, sc) * y_norm(wl, sc) * std::pow(yh, p - 1.0), "g=u " + order_note(o));
    }
    return best.m;
}

Measurement comparable_p3(TrialContext& c) {
    const PowerNonlinearity nl = c.nl();
    const double sc = c.s_c(), p = nl.p, dt = c.grid.dt();
    const int N0 = c.N, N1 = c.N, N2 = std::max(c.N / 2, 1), N3 = 1;
    const SpaceTimePath v = c.path(Support::shell(N0), 0.0, 0.0);
    const SpaceTimePath u = critical_path(c);
    const SpaceTimePath w = critical_path(c);
    const SpaceTimePath hl = P_leq(u + w, N3), wl = P_leq(w, N3);
    const SpaceTimePath wN1 = P(w, N1), uN1 = P(u, N1), uN2 = P(u, N2), uN3 = P(u, N3);
    const int n = grid_size(c.M, c.env.oversample);
    const Frames H = to_frames(hl, n);
    const Frames common = to_frames(v, n) * to_frames(uN2, n) * to_frames(uN3, n);
    const double pref = std::pow(double(N0) / N1, sc) * std::pow(double(N3) / N2, sc - 0.5);
    const double base = pref * y_norm(v, -sc) * y_norm(uN2, sc) * y_norm(uN3, sc);
    const double yh = y_norm(hl, sc), ywl = y_norm(wl, sc);
    const double tail = std::pow(yh, p - 3.0);
    Best best;
    const Frames with_w = common * to_frames(wN1, n);
    for (auto o : orders_of(3)) {
        const double lhs = std::abs(st_integral(with_w * wirtinger_frames(H, nl, o), dt));
        best.offer(lhs, base * y_norm(wN1, sc) * std::max(ywl, yh) * tail, "u1=w " + order_note(o));
    }
    const Frames with_wl = common * to_frames(uN1, n) * to_frames(wl, n);
    for (auto o : orders_of(4)) {
        const double lhs = std::abs(st_integral(with_wl * wirtinger_frames(H, nl, o), dt));
        best.offer(lhs, base * y_norm(uN1, sc) * ywl * tail, "w_low " + order_note(o));
    }
    return best.m;
}

// Cube-paired sum of v_{N0} u_{N1} against u_{N2} w_{N3} Q(G(h_{<=N2})), Q = P_{<=N2} (low) or P_N (high).
Measurement comparable_p23(TrialContext& c, bool high_output) {
    const PowerNonlinearity nl = c.nl();
    const double sc = c.s_c(), p = nl.p;
    const double eps = 0.5 * epsilon_max(p).both();
    const HoelderExponentSet r = hoelder_exponents(p, eps);
    const int N0 = c.N, N1 = c.N;
    const int N2 = high_output ? 1 : std::max(c.N / 2, 1);
    const int N3 = 1;
    const int side = high_output ? c.N : N2;
    const double R = 3.0 * side;

    const SpaceTimePath v = c.path(Support::shell(N0), 0.0, 0.0);
    const SpaceTimePath u = critical_path(c);
    const SpaceTimePath w = critical_path(c);
    const SpaceTimePath uN1 = P(u, N1), uN2 = P(u, N2), wN3 = P(w, N3), hl = P_leq(u + w, N2);
    const int Maux = std::min(2 * c.M, (high_output ? c.N : N2) + N2 + N3);
    const int n = smooth_size(std::max(grid_size(c.M, c.env.oversample), 2 * Maux + 1));
    const Frames H = to_frames(hl, n);
    const Frames low = to_frames(uN2, n) * to_frames(wN3, n);

    double factor;
    if (high_output) {
        const double eN = 5.0 * (1.0 / r.high[2] + 1.0 / r.high[3] + (p - 2.0) / r.high[4]) - p;
        factor = std::pow(double(c.N), eN);
    } else {
        factor = std::pow(double(N3) / N2, 1.5 - 5.0 / r.low[1] - sc);
    }
    factor *= std::pow(double(N0) / N1, sc);
    const double rhs = factor * y_norm(v, -sc) * y_norm(uN1, sc) * y_norm(uN2, sc) * y_norm(wN3, sc) *
                       std::pow(y_norm(hl, sc), p - 2.0);
    Best best;
    for (auto o : orders_of(3)) {
        const SpaceTimePath G = from_frames(wirtinger_frames(H, nl, o), c.M, c.grid);
        const SpaceTimePath QG = high_output ? P(G, c.N) : P_leq(G, N2);
        const SpaceTimePath aux = from_frames(low * to_frames(QG, n), Maux, c.grid);
        best.offer(cube_paired_integral(v, uN1, aux, side, R).abs_paired, rhs, order_note(o));
    }
    return best.m;
}

Measurement embedding(TrialContext& c) {
    constexpr double s = 0.5;
    const SpaceTimePath u = c.path(Support::shell(c.N), 0.0, 0.0);
    const double y = y_norm(u, s), x = x_upper_bound(u, s), sup = sup_sobolev(u, s);
    const double tol = 1.0 + 1e-12;
    Measurement m{y, x, y <= 2.0 * x * tol && sup <= x * tol, ""};
    if (!m.ok) m.note = "embedding bound violated";
    return m;
}

// ---- registry ----

EstimateSpec base(std::string name, std::string family, std::string description, std::uint64_t seed) {
    EstimateSpec s;
    s.name = std::move(name);
    s.family = std::move(family);
    s.description = std::move(description);
    s.seed = seed;
    s.bandlimit_for = [](int N, int) { return N; };
    return s;
}

const std::vector<SamplerSpec> kStrichartzSamplers =
    samplers({SamplerKind::gaussian_shell, SamplerKind::free_flow, SamplerKind::step_atom});

EstimateSpec strichartz_preset(std::string name, double q, bool q_from_p, std::uint64_t seed) {
    EstimateSpec s = base(std::move(name), "strichartz_scaleinv",
                          "cube of side N: ||P_C u||_{L^q} against N^{3/2-5/q} ||P_C u||_{Y^0}", seed);
    s.lhs_name = "||P_C u||_{L^q_{t,x}}";
    s.rhs_name = "||P_C u||_{Y^0}";
    s.dyadic_range = {2, 4, 8, 16, 32};
    s.bandlimit_for = [](int N, int) { return N / 2; };
    s.samplers = kStrichartzSamplers;
    s.time_steps = 8;
    if (q_from_p) {
        s.p = 3.0;
        s.min_p = 4.0 / 3.0;  // keeps 5p/2 above 10/3
        s.measure = [](TrialContext& c) { return strichartz(c, 2.5 * c.spec.p); };
        s.exponent_of_p = [](double p) { return 1.5 - 2.0 / p; };
        s.predicted_exponent = s.exponent_of_p(s.p);
    } else {
        s.measure = [q](TrialContext& c) { return strichartz(c, q); };
        s.predicted_exponent = 1.5 - 5.0 / q;
    }
    return s;
}

std::vector<EstimateSpec> build_registry() {
    std::vector<EstimateSpec> reg;
    reg.push_back(strichartz_preset("strichartz_L18_5", 18.0 / 5.0, false, 101));
    reg.push_back(strichartz_preset("strichartz_L6", 6.0, false, 102));
    reg.push_back(strichartz_preset("strichartz_L5p2", 0.0, true, 103));

    {
        EstimateSpec s = base("bilinear", "bilinear", "||u_{N1} v_{N2}||_{L^2} against N2^{1/2} ||u_{N1}||_{Y^0} ||v_{N2}||_{Y^0}",
                              104);
        s.lhs_name = "||u_{N1} v_{N2}||_{L^2}";
        s.rhs_name = "||u_{N1}||_{Y^0} ||v_{N2}||_{Y^0}";
        s.predicted_exponent = 0.5;
        s.dyadic_range = {1, 2, 4, 8};
        s.secondary_range = {1, 2, 4, 8, 16};
        s.secondary_valid = [](int N2, int N1) { return N1 >= N2; };
        s.bandlimit_for = [](int, int N1) { return N1; };
        s.samplers = samplers({SamplerKind::free_flow, SamplerKind::step_atom});
        s.time_steps = 4;
        s.trials = 4;
        s.measure = bilinear;
        reg.push_back(std::move(s));
    }
    {
        EstimateSpec s = base("critical_strichartz", "critical_strichartz",
                              "||u_{<=N}||_{L^{5p/2}} against ||u_{<=N}||_{Y^{s_c}}", 105);
        s.lhs_name = "||u||_{L^{5p/2}_{t,x}}";
        s.rhs_name = "||u||_{Y^{s_c}}";
        s.p = 3.0;
        s.min_p = 4.0 / 3.0;
        s.dyadic_range = {2, 4, 8, 16};
        s.samplers = samplers({SamplerKind::free_flow, SamplerKind::step_atom});
        s.measure = [](TrialContext& c) { return critical_strichartz(c, 2.5 * c.spec.p); };
        reg.push_back(std::move(s));
    }
    {
        EstimateSpec s = base("supercritical_strichartz", "critical_strichartz",
                              "||u_{<=N}||_{L^r}, r = 3p, against N^{2/p-5/r} ||u_{<=N}||_{Y^{s_c}}", 106);
        s.lhs_name = "||u||_{L^{3p}_{t,x}}";
        s.rhs_name = "||u||_{Y^{s_c}}";
        s.p = 3.0;
        s.min_p = 4.0 / 3.0;
        s.exponent_of_p = [](double p) { return 2.0 / p - 5.0 / (3.0 * p); };
        s.predicted_exponent = s.exponent_of_p(s.p);
        s.dyadic_range = {2, 4, 8, 16};
        s.samplers = samplers({SamplerKind::free_flow, SamplerKind::step_atom});
        s.measure = [](TrialContext& c) { return critical_strichartz(c, 3.0 * c.spec.p); };
        reg.push_back(std::move(s));
    }

    struct Grad {
        const char* name;
        const char* lhs;
        double num, den_add;  // r = num p / (p + den_add)
        double pred;
        bool laplace;
    };
    const Grad grads[] = {
        {"gradient_L10p", "||grad u||_{L^{10p/(p+4)}}", 10.0, 4.0, 0.5, false},
        {"gradient_L20p", "||grad u||_{L^{20p/(p+8)}}", 20.0, 8.0, 0.75, false},
        {"laplacian_L10p", "||Laplacian u||_{L^{10p/(p+4)}}", 10.0, 4.0, 1.5, true},
    };
    std::uint64_t gseed = 107;
    for (const auto& gd : grads) {
        EstimateSpec s = base(gd.name, "gradient_family", std::string(gd.lhs) + " against N^a ||u_{<=N}||_{Y^{s_c}}",
                              gseed++);
        s.lhs_name = gd.lhs;
        s.rhs_name = "||u||_{Y^{s_c}}";
        s.p = 3.0;
        s.min_p = 2.0;
        s.predicted_exponent = gd.pred;
        s.dyadic_range = {2, 4, 8, 16};
        s.samplers = samplers({SamplerKind::free_flow, SamplerKind::step_atom});
        const double num = gd.num, add = gd.den_add;
        const bool lap = gd.laplace;
        s.measure = [num, add, lap](TrialContext& c) {
            return gradient_norm(c, num * c.spec.p / (c.spec.p + add), lap);
        };
        reg.push_back(std::move(s));
    }
    {
        EstimateSpec s = base("frac_product", "frac_product",
                              "|||grad|^s (fg)||_{L^2} against |||grad|^s f||_{L^4}||g||_{L^4} + ||f||_{L^4}|||grad|^s g||_{L^4}",
                              110);
        s.lhs_name = "|||grad|^{1/2}(fg)||_{L^2}";
        s.rhs_name = "product-rule right side";
        s.fit_slope = false;
        s.dyadic_range = {1, 2, 4, 8};
        s.time_steps = 2;
        s.measure = frac_product;
        reg.push_back(std::move(s));
    }
    {
        EstimateSpec s = base("frac_chain", "frac_chain",
                              "|||grad|^s F(u)||_{L^2} against ||F'(u)||_{L^4} |||grad|^s u||_{L^4}", 111);
        s.lhs_name = "|||grad|^{1/2} F(u)||_{L^2}";
        s.rhs_name = "||(p+1)|u|^p||_{L^4} |||grad|^{1/2} u||_{L^4}";
        s.p = 2.5;
        s.fit_slope = false;
        s.dyadic_range = {1, 2, 4, 8};
        s.time_steps = 2;
        s.measure = frac_chain;
        reg.push_back(std::move(s));
    }
    {
        EstimateSpec s = base("nonlinear_bernstein", "nonlinear_bernstein",
                              "||P_N |u|^a||_{L^{4/a}} against N^{-a} ||grad u||_{L^4}^a, a = p - 2", 112);
        s.lhs_name = "||P_N G(u)||_{L^{4/a}}";
        s.rhs_name = "||grad u||_{L^4}^a";
        s.p = 2.5;
        s.min_p = 2.0;
        s.max_p = 3.0 + 1e-12;
        s.exponent_of_p = [](double p) { return -(p - 2.0); };
        s.predicted_exponent = s.exponent_of_p(s.p);
        s.dyadic_range = {2, 4, 8, 16};
        s.bandlimit_for = [](int N, int) { return std::max(N, 2); };
        s.time_steps = 2;
        s.measure = [](TrialContext& c) { return nonlinear_bernstein(c); };
        reg.push_back(std::move(s));
    }
    {
        EstimateSpec s = base("bony_convergence", "bony_convergence",
                              "||F(g) - F(g_{<=N})||_{L^{1.2}} decays; telescoping sum equals F(g_{<=N})", 113);
        s.lhs_name = "||F(g) - F(g_{<=N})||_{L^{1.2}}";
        s.rhs_name = "||g||_{H^{s_c}}^{p+1}";
        s.p = 2.5;
        s.dyadic_range = {1, 2, 4};
        s.bandlimit_for = [](int N, int) { return 2 * N; };
        s.use_env_lattice = true;
        s.time_steps = 2;
        s.trials = 4;
        s.measure = bony;
        reg.push_back(std::move(s));
    }
    {
        EstimateSpec s = base("cubic_main", "cubic_main",
                              "cubic quadrilinear sum: cube pairing for N0~N1, Hoelder chain for N0<=N1~N2", 114);
        s.lhs_name = "|int int v u1 u2 u3|";
        s.rhs_name = "frequency factor ||v||_{Y^{-1/2}} prod ||u_j||_{Y^{1/2}}";
        s.p = 2.0;
        s.min_p = 2.0 - 1e-12;
        s.max_p = 2.0 + 1e-12;
        s.dyadic_range = {2, 4, 8};
        s.samplers = samplers({SamplerKind::free_flow, SamplerKind::step_atom});
        s.time_steps = 4;
        s.trials = 4;
        s.measure = cubic_main;
        reg.push_back(std::move(s));
    }
    {
        EstimateSpec s = base("contraction", "contraction",
                              "|<F(u+w)-F(u), v>| / (||v||_{Y^{-s_c}} ||w||_{Y^{s_c}} (||u||+||w||)^p) across amplitudes",
                              115);
        s.lhs_name = "max_v |<F(u+w)-F(u), v>| / ||v||_{Y^{-s_c}}";
        s.rhs_name = "||w||_{Y^{s_c}} (||u||_{Y^{s_c}} + ||w||_{Y^{s_c}})^p";
        s.p = 2.0;
        s.dyadic_range = {1, 2, 4, 8};
        s.bandlimit_for = [](int, int) { return 1; };
        s.use_env_lattice = true;
        s.shared_data = true;
        s.sampled_sup = true;
        s.samplers = samplers({SamplerKind::free_flow, SamplerKind::step_atom});
        s.trials = 4;
        s.measure = contraction;
        reg.push_back(std::move(s));
    }

    struct Inc {
        const char* name;
        bool high;
        double p;
        double min_p, max_p;
    };
    const Inc incs[] = {
        {"incomparable_high_p_lt4", true, 2.5, 2.0, 4.0},
        {"incomparable_high_p_ge4", true, 4.5, 4.0 - 1e-12, 1e9},
        {"incomparable_low_p_lt4", false, 2.5, 2.0, 4.0},
        {"incomparable_low_p_ge4", false, 4.5, 4.0 - 1e-12, 1e9},
    };
    std::uint64_t iseed = 116;
    for (const auto& ic : incs) {
        EstimateSpec s = base(ic.name, "incomparable_reduced",
                              ic.high ? "v_{N0} g_{N1} D F(h_{<=N1}) with N1 = 1, N0 = N"
                                      : "v_{N0} g_{N1} D F(h_{<=N1}) with N0 = 1, N1 = N",
                              iseed++);
        s.lhs_name = "max over D of |int int v g D|";
        s.rhs_name = "||v||_{Y^{-s_c}} ||g||_{Y^{s_c}} ||h||_{Y^{s_c}}^p";
        s.p = ic.p;
        s.min_p = ic.min_p;
        s.max_p = ic.max_p;
        if (ic.high)
            s.exponent_of_p = [](double p) { return -((p < 4.0 ? 1.0 : 2.0) - s_critical(p)); };
        else
            s.exponent_of_p = [](double p) { return -(0.5 + s_critical(p)); };
        s.predicted_exponent = s.exponent_of_p(s.p);
        s.dyadic_range = {2, 4, 8, 16};
        s.samplers = samplers({SamplerKind::free_flow, SamplerKind::step_atom});
        s.time_steps = 4;
        s.trials = 4;
        const bool high = ic.high;
        s.measure = [high](TrialContext& c) { return incomparable(c, high); };
        reg.push_back(std::move(s));
    }
    {
        EstimateSpec s = base("comparable_p3", "comparable_p3",
                              "v_{N0} u_{N1} u_{N2} u_{N3} D F(h_{<=N3}) with at least one factor from w", 120);
        s.lhs_name = "max over D of |int int v u1 u2 u3 D|";
        s.rhs_name = "frequency factors times Y norms";
        s.p = 3.0;
        s.min_p = 3.0 - 1e-12;
        s.dyadic_range = {2, 4, 8};
        s.samplers = samplers({SamplerKind::free_flow, SamplerKind::step_atom});
        s.time_steps = 4;
        s.trials = 4;
        s.measure = comparable_p3;
        reg.push_back(std::move(s));
    }
    for (bool high : {false, true}) {
        EstimateSpec s = base(high ? "comparable_p23_high" : "comparable_p23_low", "comparable_p23",
                              high ? "cube-paired sum with P_N G(h_{<=N2}) output, cubes of side N"
                                   : "cube-paired sum with P_{<=N2} G(h_{<=N2}), cubes of side N2",
                              high ? 122 : 121);
        s.lhs_name = "sum over related cubes of |int int|";
        s.rhs_name = "frequency factors times Y norms";
        s.p = 2.5;
        s.min_p = 2.0;
        s.max_p = 3.0;
        s.dyadic_range = {2, 4, 8};
        s.samplers = samplers({SamplerKind::free_flow, SamplerKind::step_atom});
        s.time_steps = 4;
        s.trials = 2;
        s.measure = [high](TrialContext& c) { return comparable_p23(c, high); };
        reg.push_back(std::move(s));
    }
    {
        EstimateSpec s = base("embedding_checks", "embedding_checks",
                              "y_norm against the U^2 atomic upper bound and sup_t H^s", 123);
        s.lhs_name = "||u||_{Y^{1/2}}";
        s.rhs_name = "U^2 atomic upper bound";
        s.dyadic_range = {1, 2, 4, 8};
        s.samplers = kStrichartzSamplers;
        s.measure = embedding;
        reg.push_back(std::move(s));
    }
    return reg;
}

}  // namespace

const std::vector<EstimateSpec>& preset_registry() {
    static const std::vector<EstimateSpec> reg = build_registry();
    return reg;
}

const EstimateSpec& find_preset(const std::string& name) {
    for (const auto& s : preset_registry())
        if (s.name == name) return s;
    throw NotFound("preset '" + name + "'");
}

std::vector<EstimateSpec> select_presets(const std::string& key) {
    std::vector<EstimateSpec> out;
    for (const auto& s : preset_registry())
        if (s.name == key) return {s};
    for (const auto& s : preset_registry())
        if (key == "all" || s.family == key) out.push_back(s);
    if (out.empty()) throw NotFound("preset or family '" + key + "'");
    return out;
}

}  // namespace tnls
