#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "torus_nls/errors.hpp"
#include "torus_nls/sampling.hpp"
#include "torus_nls/solver.hpp"

using namespace tnls;

namespace {

SpectralField datum(int M, double h_half_norm, std::uint64_t seed) {
    Rng rng(seed);
    SpectralField f = random_field(generic_metric(), M, rng, Support::everything(), 2.0);
    f *= h_half_norm / sobolev_norm(f, 0.5);
    return f;
}

double sup_l2_distance(const SpaceTimePath& a, const SpaceTimePath& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.frames.size(); ++k) d = std::max(d, (a.frames[k] - b.frames[k]).l2_norm());
    return d;
}

}  // namespace

TEST_CASE("split-step reproduces the plane-wave solution") {
    const TorusMetric m = generic_metric();
    for (int sign : {1, -1})
        for (double p : {2.0, 2.5, 4.0}) {
            const FreqIndex xi{1, -2, 1};
            const cplx A(0.6, -0.3);
            const SpectralField u0 = delta_field(m, 3, xi, A);
            const double dt = 0.01;
            const int steps = 50;
            const SpaceTimePath u = splitstep_solve(u0, PowerNonlinearity{p, sign}, dt, steps, 2);
            const double cQ = m.laplace_scale * q_form(m, xi);
            for (int k = 0; k < steps; ++k) {
                const cplx exact = oracle::plane_wave_coefficient(A, p, sign, cQ, k * dt);
                CHECK(std::abs(u.frames[k].at(xi) - exact) < 1e-8);
                CHECK(std::abs(u.frames[k].l2_norm() - std::abs(A)) < 1e-12);
            }
        }
}

TEST_CASE("Picard reproduces the plane wave up to quadrature error") {
    const TorusMetric m = generic_metric();
    const FreqIndex xi{0, 1, 0};
    const cplx A(0.5);
    const SpectralField u0 = delta_field(m, 1, xi, A);
    const TimeGrid g{0.1, 64};
    const PicardResult r = picard_solve(u0, PowerNonlinearity{2.0, 1}, g, 2, 1e-12, 60);
    const double cQ = m.laplace_scale * q_form(m, xi);
    for (int k = 0; k < g.n; ++k)
        CHECK(std::abs(r.solution.frames[k].at(xi) - oracle::plane_wave_coefficient(A, 2.0, 1, cQ, g.t(k))) < 1e-5);
}

TEST_CASE("Picard and split-step agree on small critical data") {
    const SpectralField u0 = datum(8, 0.01, 42);
    const PowerNonlinearity nl{2.0, 1};
    const int n = 16;
    const TimeGrid g{0.05, n};
    const PicardResult pic = picard_solve(u0, nl, g, 2, 1e-13, 30);
    const SpaceTimePath ss = splitstep_solve(u0, nl, g.dt(), n, 2);
    CHECK(sup_l2_distance(pic.solution, ss) <= 1e-4);
    CHECK(pic.diagnostics.converged);
    REQUIRE_FALSE(pic.diagnostics.ratios.empty());
    for (double r : pic.diagnostics.ratios) CHECK(r < 0.5);
    CHECK(pic.diagnostics.residual < 1e-12);
}

TEST_CASE("split-step conserves mass over a thousand steps") {
    const SpectralField u0 = datum(4, 0.5, 7);
    for (int sign : {1, -1}) {
        const SpectralField u = splitstep_advance(u0, PowerNonlinearity{3.0, sign}, 1e-3, 1000, 2);
        CHECK(std::abs(mass(u) - mass(u0)) < 1e-8 * mass(u0));
    }
    CHECK_THROWS_AS(splitstep_advance(u0, PowerNonlinearity{2.0, 1}, 0.0, 3, 2), UsageError);
    CHECK_THROWS_AS(splitstep_solve(u0, PowerNonlinearity{2.0, 1}, 0.1, 0, 2), UsageError);
}

TEST_CASE("energy is a conserved quantity of the discrete flow to splitting accuracy") {
    const SpectralField u0 = datum(3, 0.3, 8);
    const PowerNonlinearity nl{2.0, 1};
    const double e0 = energy(u0, nl);
    const SpectralField u = splitstep_advance(u0, nl, 1e-4, 200, 2);
    CHECK(std::abs(energy(u, nl) - e0) < 1e-4 * std::abs(e0));
}

TEST_CASE("large data does not converge and find_T shrinks the window") {
    const SpectralField u0 = datum(2, 3.0, 9);
    const PowerNonlinearity nl{2.0, 1};
    bool thrown = false;
    try {
        picard_solve(u0, nl, TimeGrid{1.0, 8}, 2, 1e-10, 6);
    } catch (const NoConvergence& e) {
        thrown = true;
        CHECK(e.diagnostics.iterations <= 6);
        CHECK_FALSE(e.diagnostics.converged);
        CHECK(e.diagnostics.distances.size() == static_cast<std::size_t>(e.diagnostics.iterations));
    }
    CHECK(thrown);
    const FindTResult f = find_T(u0, nl, TimeGrid{1.0, 8}, 2, 1e-10, 40);
    CHECK(f.halvings >= 1);
    CHECK(f.T == doctest::Approx(std::ldexp(1.0, -f.halvings)));
    CHECK(f.result.diagnostics.converged);
    CHECK_THROWS_AS(find_T(u0, nl, TimeGrid{1.0, 8}, 2, 1e-10, 2, 0), NoConvergence);
}

TEST_CASE("Picard input validation and the zero start") {
    const SpectralField u0 = datum(2, 0.01, 10);
    const PowerNonlinearity nl{2.0, 1};
    CHECK_THROWS_AS(picard_solve(u0, nl, TimeGrid{0.1, 4}, 2, 0.0, 5), UsageError);
    CHECK_THROWS_AS(picard_solve(u0, nl, TimeGrid{0.1, 4}, 2, 1e-8, 0), UsageError);
    const PicardResult a = picard_solve(u0, nl, TimeGrid{0.1, 4}, 2, 1e-13, 40, PicardStart::zero);
    const PicardResult b = picard_solve(u0, nl, TimeGrid{0.1, 4}, 2, 1e-13, 40);
    CHECK(sup_l2_distance(a.solution, b.solution) < 1e-12);
    CHECK(a.diagnostics.iterations > b.diagnostics.iterations);
}
