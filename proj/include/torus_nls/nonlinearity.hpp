#pragma once

#include <array>
#include <string>

#include "torus_nls/lattice.hpp"
#include "torus_nls/littlewood_paley.hpp"

namespace tnls {

// F(z) = sign * |z|^p z.  The evolution solves (i d_t + Laplacian) u = F(u);
// sign = 0 switches the nonlinearity off.
struct PowerNonlinearity {
    double p = 2.0;
    int sign = 1;

    void validate() const;
    cplx operator()(cplx z) const;
};

double s_critical(double p, int d = 3);

struct WirtingerOrder {
    int a = 0;  // d/dz
    int b = 0;  // d/dzbar
};

// Highest total order a+b for which the closed form is offered at exponent p.
int max_wirtinger_order(double p);

// F = sign z^(p/2+1) zbar^(p/2), so d_z^a d_zbar^b F = C |z|^(p+1-a-b) (z/|z|)^(1-a+b).
struct WirtingerForm {
    double coefficient = 0.0;  // C, including the sign
    double radial = 0.0;       // p + 1 - a - b
    int phase = 0;             // 1 - a + b

    WirtingerForm(const PowerNonlinearity& nl, WirtingerOrder order);
    cplx operator()(cplx z) const;
};

cplx wirtinger(cplx z, const PowerNonlinearity& nl, WirtingerOrder order);
// |C|: the constant with |d^(a,b) F(z)| = |C| |z|^(p+1-a-b).
double wirtinger_constant(const PowerNonlinearity& nl, WirtingerOrder order);

GridField apply_F_grid(const GridField& g, const PowerNonlinearity& nl);
SpectralField apply_F(const SpectralField& f, const PowerNonlinearity& nl, int oversample = 4);
// Relative l2 difference between apply_F at oversample 4 and 8.
double aliasing_residual(const SpectralField& f, const PowerNonlinearity& nl);

// F(g_{<=1}) + sum_{2<=M<=N} [F(g_{<=M}) - F(g_{<=M/2})].
SpectralField bony_partial_sum(const SpectralField& g, int N, const PowerNonlinearity& nl, int oversample = 4,
                               Profile profile = Profile::smooth);
// ||F(g) - F(g_{<=N})||_{L^q}, q in [1, 3/2).
double bony_tail(const SpectralField& g, int N, const PowerNonlinearity& nl, double q, int oversample = 4,
                 Profile profile = Profile::smooth);

// w int_0^1 d_zF(u + t w) dt + conj(w) int_0^1 d_zbarF(u + t w) dt.
cplx ftc_linearize(cplx u, cplx w, const PowerNonlinearity& nl, int K);
GridField ftc_linearize(const GridField& u, const GridField& w, const PowerNonlinearity& nl, int K);

// Pointwise kernels of the frequency-difference expansions; low = P_{<=N/2} part, high = P_N part.
std::array<cplx, 2> lp_difference_point(cplx u_low, cplx u_high, const PowerNonlinearity& nl, int K);
std::array<cplx, 6> second_order_point(cplx u_low, cplx u_high, cplx w_low, cplx w_high,
                                       const PowerNonlinearity& nl, int K);

struct LpDifferenceTerms {
    GridField holomorphic;      // u_N int d_zF(u_{<=N/2} + t u_N) dt
    GridField antiholomorphic;  // conj(u_N) int d_zbarF(...) dt
    GridField direct;           // F(u_{<=N}) - F(u_{<=N/2})
};

LpDifferenceTerms lp_difference_linearize(const SpectralField& u, int N, const PowerNonlinearity& nl, int K,
                                          Profile profile = Profile::smooth, int oversample = 2);

struct SecondOrderTerms {
    std::array<GridField, 6> terms;
    GridField direct;  // [F(u_{<=N}+w_{<=N}) - F(u_{<=N/2}+w_{<=N/2})] - [F(u_{<=N}) - F(u_{<=N/2})]
    static const std::array<std::string, 6>& labels();
};

SecondOrderTerms second_order_expansion(const SpectralField& u, const SpectralField& w, int N,
                                        const PowerNonlinearity& nl, int K, Profile profile = Profile::smooth,
                                        int oversample = 2);

}  // namespace tnls
