#pragma once

#include <vector>

#include "torus_nls/lattice.hpp"
#include "torus_nls/nonlinearity.hpp"
#include "torus_nls/paths.hpp"

namespace tnls {

// Cached phases exp(-i c Q(xi) dt) for repeated steps of one size.
class PropagatorPlan {
public:
    PropagatorPlan(const TorusMetric& m, int M, double dt);
    SpectralField apply(const SpectralField& f) const;
    const std::vector<cplx>& phases() const { return phases_; }
    double dt() const { return dt_; }

private:
    TorusMetric metric_;
    int M_;
    double dt_;
    std::vector<cplx> phases_;
};

// e^{it Laplacian}: u^(xi) -> exp(-i c t Q(xi)) u^(xi).
SpectralField propagate(const SpectralField& f, double t);
SpaceTimePath free_flow(const SpectralField& u0, const TimeGrid& grid);

// Trapezoid approximation of int_0^{t_k} e^{i(t_k-s) Laplacian} F(s) ds on the grid nodes.
SpectralField duhamel_integral(const SpaceTimePath& forcing, int k);
// All k at once, linear cost per mode.
std::vector<SpectralField> duhamel_integrals(const SpaceTimePath& forcing);

// Phi(u)(t_k) = e^{i t_k Laplacian} u0 - i * duhamel(F(u))(t_k).
SpaceTimePath duhamel_operator(const SpaceTimePath& u, const SpectralField& u0, const PowerNonlinearity& nl,
                               int oversample);

}  // namespace tnls
