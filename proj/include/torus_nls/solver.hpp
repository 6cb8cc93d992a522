#pragma once

#include <vector>

#include "torus_nls/errors.hpp"
#include "torus_nls/evolution.hpp"
#include "torus_nls/nonlinearity.hpp"
#include "torus_nls/paths.hpp"

namespace tnls {

struct PicardDiagnostics {
    std::vector<double> distances;  // d_k = sup_t ||u^(k+1) - u^(k)||_{H^{s_c}}
    std::vector<double> ratios;     // d_{k+1} / d_k
    double residual = 0.0;          // sup_t ||Phi(u) - u||_{H^{s_c}} at the returned iterate
    int iterations = 0;
    bool converged = false;

    double last_ratio() const { return ratios.empty() ? 0.0 : ratios.back(); }
};

struct NoConvergence : NumericalError {
    NoConvergence(int max_iter, PicardDiagnostics d);
    PicardDiagnostics diagnostics;
};

enum class PicardStart {
    free_flow,  // u^(0) = e^{it Laplacian} u0
    zero,       // u^(0) = 0
};

struct PicardResult {
    SpaceTimePath solution;
    PicardDiagnostics diagnostics;
};

PicardResult picard_solve(const SpectralField& u0, const PowerNonlinearity& nl, const TimeGrid& grid, int oversample,
                          double tol, int max_iter, PicardStart start = PicardStart::free_flow);

// Halve T until Picard converges; at most `max_halvings` halvings.
struct FindTResult {
    double T = 0.0;
    int halvings = 0;
    PicardResult result;
};
FindTResult find_T(const SpectralField& u0, const PowerNonlinearity& nl, const TimeGrid& initial, int oversample,
                   double tol, int max_iter, int max_halvings = 12);

// Strang splitting on a dealiased grid; frames at t_k = k dt, k < steps.
SpaceTimePath splitstep_solve(const SpectralField& u0, const PowerNonlinearity& nl, double dt, int steps,
                              int oversample);
// State after `steps` full steps.
SpectralField splitstep_advance(const SpectralField& u0, const PowerNonlinearity& nl, double dt, int steps,
                                int oversample);

double mass(const SpectralField& f);
double energy(const SpectralField& f, const PowerNonlinearity& nl, int oversample = 4);

}  // namespace tnls
