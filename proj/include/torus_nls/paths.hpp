#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "torus_nls/lattice.hpp"

namespace tnls {

// Uniform samples t_k = k T / n, k = 0..n-1, on [0, T).
struct TimeGrid {
    double T = 1.0;
    int n = 2;

    double dt() const { return T / n; }
    double t(int k) const { return k * T / n; }
    // Harness runs additionally require T <= 1.
    void validate(bool harness = false) const;
    bool operator==(const TimeGrid&) const = default;
};

struct SpaceTimePath {
    TimeGrid grid;
    std::vector<SpectralField> frames;

    SpaceTimePath() = default;
    SpaceTimePath(const TimeGrid& g, std::vector<SpectralField> f);
    static SpaceTimePath zeros(const TimeGrid& g, const TorusMetric& m, int M);

    const TorusMetric& metric() const { return frames.front().metric(); }
    int bandlimit() const { return frames.front().bandlimit(); }
    int steps() const { return grid.n; }

    // Apply a spectral operator frame by frame.
    SpaceTimePath map(const std::function<SpectralField(const SpectralField&)>& fn) const;
};

SpaceTimePath operator+(const SpaceTimePath& a, const SpaceTimePath& b);
SpaceTimePath operator-(const SpaceTimePath& a, const SpaceTimePath& b);
SpaceTimePath operator*(cplx s, const SpaceTimePath& a);
void require_compatible(const SpaceTimePath& a, const SpaceTimePath& b);

using ModePath = std::vector<cplx>;

// t_k -> exp(+i c t_k Q(xi)) u^(t_k, xi): the profile with the free flow removed.
ModePath twisted_mode(const SpaceTimePath& path, std::size_t idx);

double spacetime_lp(const SpaceTimePath& path, double p_t, double p_x, int oversample = 2);
double sobolev_norm(const SpectralField& f, double s);
// sup_k ||u(t_k)||_{H^s}
double sup_sobolev(const SpaceTimePath& path, double s);

// Exact discrete V^2 norm (terminal value 0 appended).
double v2_norm(const ModePath& a);
// V^2 norm of the twisted path with values in H^s.
double v2_norm_hilbert(const SpaceTimePath& path, double s);
double y_norm(const SpaceTimePath& path, double s);

// Atomic bound after merging equal consecutive values.
double u2_upper_bound(const ModePath& a);
// (sum_xi <xi>^{2s} u2_upper_bound(twisted mode)^2)^{1/2}
double x_upper_bound(const SpaceTimePath& path, double s);

// int_0^T int f conj(v) dx dt, left Riemann sum in time.
cplx duality_pairing(const SpaceTimePath& f, const SpaceTimePath& v);
// Max of |pairing(f, v)| over m sampled v with y_norm(v, -s) = 1.
double xnorm_lower_bound(const SpaceTimePath& f, double s, int m, std::uint64_t seed);

}  // namespace tnls
