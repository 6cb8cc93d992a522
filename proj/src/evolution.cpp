#include "torus_nls/evolution.hpp"

#include "torus_nls/errors.hpp"

namespace tnls {

PropagatorPlan::PropagatorPlan(const TorusMetric& m, int M, double dt) : metric_(m), M_(M), dt_(dt) {
    SpectralField shape(m, M);
    phases_.resize(shape.size());
    shape.for_each_mode([&](const FreqIndex& xi, std::size_t idx) { phases_[idx] = flow_phase(m, xi, dt, -1); });
}

SpectralField PropagatorPlan::apply(const SpectralField& f) const {
    if (!(f.metric() == metric_) || f.bandlimit() != M_) throw GridMismatch("propagator plan built for another lattice");
    SpectralField out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= phases_[i];
    return out;
}

SpectralField propagate(const SpectralField& f, double t) {
    if (t == 0.0) return f;
    SpectralField out = f;
    f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        if (out[idx] != cplx(0.0)) out[idx] *= flow_phase(f.metric(), xi, t, -1);
    });
    return out;
}

SpaceTimePath free_flow(const SpectralField& u0, const TimeGrid& grid) {
    std::vector<SpectralField> frames;
    frames.reserve(grid.n);
    for (int k = 0; k < grid.n; ++k) frames.push_back(propagate(u0, grid.t(k)));
    return SpaceTimePath(grid, std::move(frames));
}

SpectralField duhamel_integral(const SpaceTimePath& forcing, int k) {
    if (k < 0 || k >= forcing.grid.n) throw UsageError("duhamel_integral: time index outside the grid");
    const auto& ref = forcing.frames.front();
    SpectralField out = ref.zeros_like();
    if (k == 0) return out;
    const double dt = forcing.grid.dt();
    ref.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        std::complex<long double> acc = 0.0L;
        for (int j = 0; j <= k; ++j) {
            const cplx v = forcing.frames[j][idx];
            if (v == cplx(0.0)) continue;
            const double w = (j == 0 || j == k) ? 0.5 : 1.0;
            const cplx z = w * flow_phase(ref.metric(), xi, (k - j) * dt, -1) * v;
            acc += std::complex<long double>(z.real(), z.imag());
        }
        out[idx] = dt * cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    });
    return out;
}

std::vector<SpectralField> duhamel_integrals(const SpaceTimePath& forcing) {
    const int n = forcing.grid.n;
    const auto& ref = forcing.frames.front();
    const double dt = forcing.grid.dt();
    std::vector<SpectralField> out(n, ref.zeros_like());
    std::vector<cplx> twisted(n);
    ref.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        bool any = false;
        for (int j = 0; j < n; ++j) {
            twisted[j] = forcing.frames[j][idx];
            if (twisted[j] != cplx(0.0)) {
                any = true;
                twisted[j] *= flow_phase(ref.metric(), xi, forcing.grid.t(j), +1);
            }
        }
        if (!any) return;
        std::complex<long double> acc = 0.0L;
        for (int k = 1; k < n; ++k) {
            const cplx z = 0.5 * dt * (twisted[k - 1] + twisted[k]);
            acc += std::complex<long double>(z.real(), z.imag());
            const cplx c(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
            out[k][idx] = flow_phase(ref.metric(), xi, forcing.grid.t(k), -1) * c;
        }
    });
    return out;
}

SpaceTimePath duhamel_operator(const SpaceTimePath& u, const SpectralField& u0, const PowerNonlinearity& nl,
                               int oversample) {
    require_compatible(u.frames.front(), u0);
    std::vector<SpectralField> F;
    F.reserve(u.frames.size());
    for (const auto& fr : u.frames) F.push_back(apply_F(fr, nl, oversample));
    const auto D = duhamel_integrals(SpaceTimePath(u.grid, std::move(F)));
    std::vector<SpectralField> out;
    out.reserve(D.size());
    for (int k = 0; k < u.grid.n; ++k) {
        SpectralField v = propagate(u0, u.grid.t(k));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= cplx(0.0, 1.0) * D[k][i];
        out.push_back(std::move(v));
    }
    return SpaceTimePath(u.grid, std::move(out));
}

}  // namespace tnls
