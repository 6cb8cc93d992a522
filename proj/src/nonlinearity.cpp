#include "torus_nls/nonlinearity.hpp"

#include <cmath>
#include <string>

#include "torus_nls/errors.hpp"
#include "torus_nls/quadrature.hpp"

namespace tnls {

void PowerNonlinearity::validate() const {
    if (!(p >= 2.0) || !std::isfinite(p)) throw UsageError("nonlinearity exponent p must be >= 2");
    if (sign < -1 || sign > 1) throw UsageError("nonlinearity sign must be -1, 0 or +1");
}

cplx PowerNonlinearity::operator()(cplx z) const {
    if (sign == 0) return 0.0;
    double r2 = std::norm(z);
    if (r2 == 0.0) return 0.0;
    double m = (p == 2.0) ? r2 : std::pow(r2, 0.5 * p);
    return static_cast<double>(sign) * m * z;
}

double s_critical(double p, int d) {
    if (!(p > 0.0) || d < 1) throw UsageError("s_critical needs p > 0 and d >= 1");
    return 0.5 * d - 2.0 / p;
}

int max_wirtinger_order(double p) { return p >= 3.0 ? 4 : 3; }

namespace {

double falling(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (x - i);
    return r;
}

cplx int_power(cplx u, int k) {
    cplx base = k >= 0 ? u : std::conj(u);
    cplx r(1.0);
    for (int i = 0; i < std::abs(k); ++i) r *= base;
    return r;
}

// First Wirtinger derivatives (d_z F, d_zbar F) at z.
struct FirstDerivatives {
    double cz, czb, h;
    explicit FirstDerivatives(const PowerNonlinearity& nl)
        : cz(nl.sign * (0.5 * nl.p + 1.0)), czb(nl.sign * 0.5 * nl.p), h(0.5 * nl.p) {}
    CVec<2> operator()(cplx z) const {
        double r2 = std::norm(z);
        CVec<2> out;
        if (r2 == 0.0) return out;
        double m = std::pow(r2, h);
        out[0] = cz * m;
        out[1] = czb * m * (z * z / r2);
        return out;
    }
};

// Second Wirtinger derivatives (d_z^2 F, d_z d_zbar F, d_zbar^2 F) at z.
struct SecondDerivatives {
    double c20, c11, c02, h;
    explicit SecondDerivatives(const PowerNonlinearity& nl) {
        double a = 0.5 * nl.p + 1.0, b = 0.5 * nl.p;
        c20 = nl.sign * a * (a - 1.0);
        c11 = nl.sign * a * b;
        c02 = nl.sign * b * (b - 1.0);
        h = 0.5 * (nl.p - 1.0);
    }
    CVec<3> operator()(cplx z) const {
        double r2 = std::norm(z);
        CVec<3> out;
        if (r2 == 0.0) return out;
        double m = std::pow(r2, h);
        cplx u = z / std::sqrt(r2);
        out[0] = c20 * m * std::conj(u);
        out[1] = c11 * m * u;
        out[2] = c02 * m * u * u * u;
        return out;
    }
};

void quadratic_roots(double c2, double c1, double c0, std::vector<double>& out) {
    const double scale = std::abs(c2) + std::abs(c1) + std::abs(c0);
    if (scale == 0.0) return;
    if (std::abs(c2) <= 1e-14 * scale) {
        if (std::abs(c1) > 1e-14 * scale) out.push_back(-c0 / c1);
        return;
    }
    double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < 0.0) return;
    double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
    out.push_back(q / c2);
    if (q != 0.0) out.push_back(c0 / q);
}

void require_p_above_two(const PowerNonlinearity& nl) {
    if (!(nl.p > 2.0))
        throw UndefinedDerivative("second-order expansion needs p > 2; the cubic case is algebraic");
}

}  // namespace

WirtingerForm::WirtingerForm(const PowerNonlinearity& nl, WirtingerOrder order) {
    if (order.a < 0 || order.b < 0 || order.a + order.b > max_wirtinger_order(nl.p))
        throw UndefinedDerivative("Wirtinger order (" + std::to_string(order.a) + "," + std::to_string(order.b) +
                                  ") not available for p = " + std::to_string(nl.p));
    coefficient = nl.sign * falling(0.5 * nl.p + 1.0, order.a) * falling(0.5 * nl.p, order.b);
    radial = nl.p + 1.0 - order.a - order.b;
    phase = 1 - order.a + order.b;
}

cplx WirtingerForm::operator()(cplx z) const {
    double r2 = std::norm(z);
    if (r2 == 0.0) {
        if (coefficient == 0.0 || radial > 0.0) return 0.0;
        if (radial == 0.0 && phase == 0) return coefficient;
        throw DomainError("Wirtinger derivative singular at z = 0");
    }
    double mag = coefficient * std::pow(r2, 0.5 * radial);
    if (phase == 0) return mag;
    return mag * int_power(z / std::sqrt(r2), phase);
}

cplx wirtinger(cplx z, const PowerNonlinearity& nl, WirtingerOrder order) { return WirtingerForm(nl, order)(z); }

double wirtinger_constant(const PowerNonlinearity& nl, WirtingerOrder order) {
    return std::abs(WirtingerForm(nl, order).coefficient);
}

GridField apply_F_grid(const GridField& g, const PowerNonlinearity& nl) {
    GridField out(g.metric, g.n);
    for (std::size_t i = 0; i < g.samples.size(); ++i) out.samples[i] = nl(g.samples[i]);
    return out;
}

SpectralField apply_F(const SpectralField& f, const PowerNonlinearity& nl, int oversample) {
    if (nl.sign == 0) return f.zeros_like();
    return to_spectral(apply_F_grid(to_grid(f, oversample), nl), f.bandlimit());
}

double aliasing_residual(const SpectralField& f, const PowerNonlinearity& nl) {
    SpectralField coarse = apply_F(f, nl, 4);
    SpectralField fine = apply_F(f, nl, 8);
    double ref = fine.l2_norm();
    coarse -= fine;
    return ref > 0.0 ? coarse.l2_norm() / ref : coarse.l2_norm();
}

SpectralField bony_partial_sum(const SpectralField& g, int N, const PowerNonlinearity& nl, int oversample,
                               Profile profile) {
    if (!is_dyadic(N)) throw UsageError("dyadic frequency must be a power of two");
    SpectralField prev = apply_F(project_leq(g, 1, profile), nl, oversample);
    SpectralField acc = prev;
    for (int M = 2; M <= N; M *= 2) {
        SpectralField cur = apply_F(project_leq(g, M, profile), nl, oversample);
        acc += cur - prev;
        prev = std::move(cur);
    }
    return acc;
}

double bony_tail(const SpectralField& g, int N, const PowerNonlinearity& nl, double q, int oversample,
                 Profile profile) {
    if (!(q >= 1.0 && q < 1.5)) throw InvalidLebesgueExponent(q);
    GridField full = apply_F_grid(to_grid(g, oversample), nl);
    GridField low = apply_F_grid(to_grid(project_leq(g, N, profile), oversample), nl);
    for (std::size_t i = 0; i < full.samples.size(); ++i) full.samples[i] -= low.samples[i];
    return grid_lp_norm(full, q);
}

cplx ftc_linearize(cplx u, cplx w, const PowerNonlinearity& nl, int K) {
    if (w == cplx(0.0) || nl.sign == 0) return 0.0;
    const auto& rule = GaussLegendre::cached(K);
    FirstDerivatives d1(nl);
    CVec<2> J = rule.integrate_pieces([&](double t) { return d1(u + t * w); }, line_breakpoints(u, w));
    return w * J[0] + std::conj(w) * J[1];
}

GridField ftc_linearize(const GridField& u, const GridField& w, const PowerNonlinearity& nl, int K) {
    if (u.n != w.n) throw GridMismatch("grid sizes differ");
    GridField out(u.metric, u.n);
    for (std::size_t i = 0; i < u.samples.size(); ++i) out.samples[i] = ftc_linearize(u.samples[i], w.samples[i], nl, K);
    return out;
}

std::array<cplx, 2> lp_difference_point(cplx u_low, cplx u_high, const PowerNonlinearity& nl, int K) {
    if (u_high == cplx(0.0) || nl.sign == 0) return {cplx(0.0), cplx(0.0)};
    const auto& rule = GaussLegendre::cached(K);
    FirstDerivatives d1(nl);
    CVec<2> J = rule.integrate_pieces([&](double t) { return d1(u_low + t * u_high); },
                                      line_breakpoints(u_low, u_high));
    return {u_high * J[0], std::conj(u_high) * J[1]};
}

std::array<cplx, 6> second_order_point(cplx u_low, cplx u_high, cplx w_low, cplx w_high, const PowerNonlinearity& nl,
                                       int K) {
    require_p_above_two(nl);
    std::array<cplx, 6> out{};
    if (nl.sign == 0) return out;
    const auto& rule = GaussLegendre::cached(K);
    FirstDerivatives d1(nl);
    SecondDerivatives d2(nl);

    const cplx s = u_low + w_low, d = u_high + w_high;
    if (w_high != cplx(0.0)) {
        CVec<2> J = rule.integrate_pieces([&](double t) { return d1(s + t * d); }, line_breakpoints(s, d));
        out[0] = w_high * J[0];
        out[1] = std::conj(w_high) * J[1];
    }
    if (u_high == cplx(0.0)) return out;

    // Outer breakpoints: near-roots along the edges eta = 0 and eta = 1, plus interior
    // zeros of A(t) + eta B(t) with real t, eta in the unit square.
    std::vector<double> interior;
    std::vector<double> roots;
    quadratic_roots(std::imag(u_high * std::conj(w_high)),
                    std::imag(u_high * std::conj(w_low)) + std::imag(u_low * std::conj(w_high)),
                    std::imag(u_low * std::conj(w_low)), roots);
    for (double t : roots) {
        if (!(t > 0.0 && t < 1.0)) continue;
        cplx a = u_low + t * u_high, b = w_low + t * w_high;
        double bb = std::norm(b);
        if (bb == 0.0) continue;
        double eta = -std::real(a * std::conj(b)) / bb;
        if (eta >= 0.0 && eta <= 1.0) interior.push_back(t);
    }
    std::vector<double> outer =
        merge_breakpoints(merge_breakpoints(line_breakpoints(u_low, u_high), line_breakpoints(s, d)), interior);

    CVec<4> I = rule.integrate_pieces(
        [&](double t) {
            cplx a = u_low + t * u_high, b = w_low + t * w_high;
            CVec<4> r;
            if (b == cplx(0.0)) return r;
            CVec<3> J = rule.integrate_pieces([&](double eta) { return d2(a + eta * b); }, line_breakpoints(a, b));
            cplx bc = std::conj(b);
            r[0] = b * J[0];
            r[1] = bc * J[1];
            r[2] = b * J[1];
            r[3] = bc * J[2];
            return r;
        },
        outer);
    out[2] = u_high * I[0];
    out[3] = u_high * I[1];
    out[4] = std::conj(u_high) * I[2];
    out[5] = std::conj(u_high) * I[3];
    return out;
}

LpDifferenceTerms lp_difference_linearize(const SpectralField& u, int N, const PowerNonlinearity& nl, int K,
                                          Profile profile, int oversample) {
    if (!is_dyadic(N)) throw UsageError("dyadic frequency must be a power of two");
    GridField lo = to_grid(project_leq(u, N / 2, profile), oversample);
    GridField hi = to_grid(project_dyadic(u, N, profile), oversample);
    LpDifferenceTerms out{GridField(u.metric(), lo.n), GridField(u.metric(), lo.n), GridField(u.metric(), lo.n)};
    for (std::size_t i = 0; i < lo.samples.size(); ++i) {
        auto t = lp_difference_point(lo.samples[i], hi.samples[i], nl, K);
        out.holomorphic.samples[i] = t[0];
        out.antiholomorphic.samples[i] = t[1];
        out.direct.samples[i] = nl(lo.samples[i] + hi.samples[i]) - nl(lo.samples[i]);
    }
    return out;
}

const std::array<std::string, 6>& SecondOrderTerms::labels() {
    static const std::array<std::string, 6> l{"w_N*dzF",          "conj(w_N)*dzbarF",
                                              "u_N*B*dzzF",       "u_N*conj(B)*dzdzbarF",
                                              "conj(u_N)*B*dzdzbarF", "conj(u_N)*conj(B)*dzbarzbarF"};
    return l;
}

SecondOrderTerms second_order_expansion(const SpectralField& u, const SpectralField& w, int N,
                                        const PowerNonlinearity& nl, int K, Profile profile, int oversample) {
    require_p_above_two(nl);
    require_compatible(u, w);
    if (!is_dyadic(N)) throw UsageError("dyadic frequency must be a power of two");
    GridField ul = to_grid(project_leq(u, N / 2, profile), oversample);
    GridField uh = to_grid(project_dyadic(u, N, profile), oversample);
    GridField wl = to_grid(project_leq(w, N / 2, profile), oversample);
    GridField wh = to_grid(project_dyadic(w, N, profile), oversample);
    SecondOrderTerms out;
    for (auto& t : out.terms) t = GridField(u.metric(), ul.n);
    out.direct = GridField(u.metric(), ul.n);
    for (std::size_t i = 0; i < ul.samples.size(); ++i) {
        cplx a = ul.samples[i], b = uh.samples[i], c = wl.samples[i], d = wh.samples[i];
        auto t = second_order_point(a, b, c, d, nl, K);
        for (int k = 0; k < 6; ++k) out.terms[static_cast<std::size_t>(k)].samples[i] = t[static_cast<std::size_t>(k)];
        out.direct.samples[i] = (nl(a + b + c + d) - nl(a + c)) - (nl(a + b) - nl(a));
    }
    return out;
}

}  // namespace tnls
