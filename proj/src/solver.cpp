#include "torus_nls/solver.hpp"

#include <algorithm>
#include <cmath>

namespace tnls {

NoConvergence::NoConvergence(int max_iter, PicardDiagnostics d)
    : NumericalError("Picard iteration did not converge in " + std::to_string(max_iter) +
                     " iterations (last ratio " + std::to_string(d.last_ratio()) + ")"),
      diagnostics(std::move(d)) {}

namespace {

double sup_distance(const SpaceTimePath& a, const SpaceTimePath& b, double s) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.frames.size(); ++k) d = std::max(d, sobolev_norm(a.frames[k] - b.frames[k], s));
    return d;
}

}  // namespace

PicardResult picard_solve(const SpectralField& u0, const PowerNonlinearity& nl, const TimeGrid& grid, int oversample,
                          double tol, int max_iter, PicardStart start) {
    nl.validate();
    grid.validate(false);
    if (!(tol > 0.0)) throw UsageError("picard_solve: tol must be positive");
    if (max_iter < 1) throw UsageError("picard_solve: max_iter must be at least 1");
    const double sc = s_critical(nl.p);

    PicardDiagnostics diag;
    SpaceTimePath u = start == PicardStart::free_flow ? free_flow(u0, grid)
                                                      : SpaceTimePath::zeros(grid, u0.metric(), u0.bandlimit());
    for (int k = 0; k < max_iter; ++k) {
        SpaceTimePath next = duhamel_operator(u, u0, nl, oversample);
        const double d = sup_distance(next, u, sc);
        if (!std::isfinite(d)) {
            diag.residual = d;
            throw NoConvergence(k + 1, std::move(diag));
        }
        if (!diag.distances.empty() && diag.distances.back() > 0.0) diag.ratios.push_back(d / diag.distances.back());
        diag.distances.push_back(d);
        u = std::move(next);
        diag.iterations = k + 1;
        if (d < tol) {
            diag.converged = true;
            break;
        }
    }
    diag.residual = sup_distance(duhamel_operator(u, u0, nl, oversample), u, sc);
    if (!diag.converged) throw NoConvergence(max_iter, std::move(diag));
    return {std::move(u), std::move(diag)};
}

FindTResult find_T(const SpectralField& u0, const PowerNonlinearity& nl, const TimeGrid& initial, int oversample,
                   double tol, int max_iter, int max_halvings) {
    TimeGrid g = initial;
    for (int h = 0;; ++h) {
        try {
            return {g.T, h, picard_solve(u0, nl, g, oversample, tol, max_iter)};
        } catch (const NoConvergence&) {
            if (h >= max_halvings) throw;
            g.T *= 0.5;
        }
    }
}

namespace {

// exp(-i sign tau |u|^p) u at every grid point.
void nonlinear_phase(GridField& g, const PowerNonlinearity& nl, double tau) {
    if (nl.sign == 0) return;
    for (auto& z : g.samples) {
        const double r = std::abs(z);
        if (r == 0.0) continue;
        const double a = -nl.sign * tau * std::pow(r, nl.p);
        z *= cplx(std::cos(a), std::sin(a));
    }
}

// Half nonlinear step, full linear step, half nonlinear step.
SpectralField strang_step(const SpectralField& u, const PowerNonlinearity& nl, const PropagatorPlan& plan) {
    if (nl.sign == 0) return plan.apply(u);
    const int M = u.bandlimit();
    GridField g = to_grid(u, 1);
    nonlinear_phase(g, nl, 0.5 * plan.dt());
    g = to_grid(plan.apply(to_spectral(g, M)), 1);
    nonlinear_phase(g, nl, 0.5 * plan.dt());
    return to_spectral(g, M);
}

void check_splitstep(const PowerNonlinearity& nl, double dt, int steps, int oversample) {
    nl.validate();
    if (steps < 1) throw UsageError("splitstep: steps must be at least 1");
    if (oversample < 1) throw UsageError("splitstep: oversample must be at least 1");
    if (!(dt > 0.0)) throw UsageError("splitstep: dt must be positive");
}

}  // namespace

SpaceTimePath splitstep_solve(const SpectralField& u0, const PowerNonlinearity& nl, double dt, int steps,
                              int oversample) {
    check_splitstep(nl, dt, steps, oversample);
    const int M = u0.bandlimit();
    const PropagatorPlan plan(u0.metric(), oversample * M, dt);
    SpectralField u = u0.resized(oversample * M);
    std::vector<SpectralField> frames;
    frames.reserve(steps);
    for (int k = 0; k < steps; ++k) {
        frames.push_back(u.resized(M));
        if (k + 1 < steps) u = strang_step(u, nl, plan);
    }
    return SpaceTimePath(TimeGrid{dt * steps, steps}, std::move(frames));
}

SpectralField splitstep_advance(const SpectralField& u0, const PowerNonlinearity& nl, double dt, int steps,
                                int oversample) {
    check_splitstep(nl, dt, steps, oversample);
    const PropagatorPlan plan(u0.metric(), oversample * u0.bandlimit(), dt);
    SpectralField u = u0.resized(oversample * u0.bandlimit());
    for (int k = 0; k < steps; ++k) u = strang_step(u, nl, plan);
    return u;
}

double mass(const SpectralField& f) {
    const double n = f.l2_norm();
    return n * n;
}

double energy(const SpectralField& f, const PowerNonlinearity& nl, int oversample) {
    long double kinetic = 0.0L;
    f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        kinetic += static_cast<long double>(f.metric().laplace_scale * q_form(f.metric(), xi)) * std::norm(f[idx]);
    });
    double potential = 0.0;
    if (nl.sign != 0) {
        const double q = nl.p + 2.0;
        potential = nl.sign / q * std::pow(grid_lp_norm(to_grid(f, oversample), q), q);
    }
    return static_cast<double>(0.5L * kinetic) + potential;
}

}  // namespace tnls
