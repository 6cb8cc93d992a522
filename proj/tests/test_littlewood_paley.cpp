#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "torus_nls/errors.hpp"
#include "torus_nls/littlewood_paley.hpp"
#include "torus_nls/sampling.hpp"

using namespace tnls;

namespace {

SpectralField rand_field(int M, std::uint64_t seed) {
    Rng rng(seed);
    return random_field(generic_metric(), M, rng, Support::everything());
}

double max_diff(const SpectralField& a, const SpectralField& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("bump profiles") {
    for (Profile p : {Profile::smooth, Profile::sharp}) {
        CHECK(bump(p, 0.0) == 1.0);
        CHECK(bump(p, 1.0) == 1.0);
        CHECK(bump(p, 2.0) == 0.0);
        double prev = 1.0;
        for (double r = 0.0; r <= 2.5; r += 0.01) {
            const double b = bump(p, r);
            CHECK(b >= 0.0);
            CHECK(b <= prev + 1e-15);
            prev = b;
        }
    }
    CHECK(bump(Profile::smooth, 1.5) == doctest::Approx(0.5));
    CHECK(bump(Profile::sharp, 1.0000001) == 0.0);
    CHECK(support_radius(Profile::sharp, 4) == 4.0);
    CHECK(support_radius(Profile::smooth, 4) == 8.0);
}

TEST_CASE("dyadic ladder and names") {
    CHECK(dyadic_ladder(8) == std::vector<int>{1, 2, 4, 8, 16});
    CHECK(dyadic_ladder(0) == std::vector<int>{1});
    CHECK(is_dyadic(1));
    CHECK(is_dyadic(64));
    CHECK_FALSE(is_dyadic(6));
    CHECK_FALSE(is_dyadic(0));
    CHECK(parse_profile(profile_name(Profile::smooth)) == Profile::smooth);
    CHECK_THROWS_AS(parse_profile("fuzzy"), UsageError);
}

TEST_CASE("partition of unity on the lattice") {
    for (Profile p : {Profile::smooth, Profile::sharp})
        for (int M : {1, 3, 6}) {
            const SpectralField f = rand_field(M, 10 + M);
            SpectralField acc = f.zeros_like();
            for (int N : dyadic_ladder(M)) acc += project_dyadic(f, N, p);
            CHECK(max_diff(acc, f) < 1e-14);
        }
}

TEST_CASE("P_{<=N} is the partial sum of the P_K") {
    const SpectralField f = rand_field(6, 3);
    for (Profile p : {Profile::smooth, Profile::sharp})
        for (int N : {1, 2, 4, 8}) {
            SpectralField acc = f.zeros_like();
            for (int K = 1; K <= N; K *= 2) acc += project_dyadic(f, K, p);
            CHECK(max_diff(acc, project_leq(f, N, p)) < 1e-14);
        }
}

TEST_CASE("sharp projections are idempotent and orthogonal") {
    const SpectralField f = rand_field(6, 4);
    for (int N : {1, 2, 4, 8}) {
        const SpectralField a = project_dyadic(f, N, Profile::sharp);
        CHECK(max_diff(project_dyadic(a, N, Profile::sharp), a) == 0.0);
        for (int K : {1, 2, 4, 8})
            if (K != N) CHECK(project_dyadic(a, K, Profile::sharp).is_zero());
    }
}

TEST_CASE("smooth projections are not idempotent") {
    const SpectralField f = rand_field(6, 5);
    const SpectralField a = project_dyadic(f, 4, Profile::smooth);
    CHECK(max_diff(project_dyadic(a, 4, Profile::smooth), a) > 1e-3);
}

TEST_CASE("blended projection interpolates") {
    const SpectralField f = rand_field(5, 6);
    CHECK(max_diff(blended_projection(f, 4, 0.0, Profile::smooth), project_leq(f, 2, Profile::smooth)) < 1e-15);
    CHECK(max_diff(blended_projection(f, 4, 1.0, Profile::smooth), project_leq(f, 4, Profile::smooth)) < 1e-15);
    CHECK_THROWS_AS(blended_projection(f, 4, 1.5, Profile::smooth), UsageError);
}

TEST_CASE("cube decomposition partitions the lattice") {
    for (int M : {3, 5})
        for (int side : {1, 2, 3, 4}) {
            const CubeDecomposition d = make_cube_decomposition(M, side);
            const SpectralField f = rand_field(M, 30 + side);
            SpectralField acc = f.zeros_like();
            for (const Cube& c : d.cubes) acc += project_cube(f, c);
            CHECK(max_diff(acc, f) < 1e-15);
            f.for_each_mode([&](const FreqIndex& xi, std::size_t) {
                const Cube& c = d.cubes[d.locate(xi)];
                CHECK(c.contains(xi));
                for (int i = 0; i < 3; ++i) CHECK(((xi[i] - c.anchor[i]) >= 0 && (xi[i] - c.anchor[i]) < side));
            });
        }
    CHECK_THROWS_AS(make_cube_decomposition(4, 0), UsageError);
}

TEST_CASE("cube relation matches a brute-force search over lattice points") {
    const int M = 3;
    for (int side : {1, 2, 3})
        for (double R : {0.0, 1.0, 2.5, 4.0}) {
            const CubeDecomposition d = make_cube_decomposition(M, side);
            std::set<std::pair<std::size_t, std::size_t>> fast;
            for (auto pr : related_cube_pairs(d, R)) {
                CHECK(pr.first <= pr.second);
                fast.insert(pr);
            }
            for (std::size_t j = 0; j < d.cubes.size(); ++j)
                for (std::size_t k = j; k < d.cubes.size(); ++k) {
                    const Cube &a = d.cubes[j], &b = d.cubes[k];
                    bool brute = false;
                    for (int x0 = a.lo[0]; x0 <= a.hi[0] && !brute; ++x0)
                        for (int x1 = a.lo[1]; x1 <= a.hi[1] && !brute; ++x1)
                            for (int x2 = a.lo[2]; x2 <= a.hi[2] && !brute; ++x2)
                                for (int y0 = b.lo[0]; y0 <= b.hi[0] && !brute; ++y0)
                                    for (int y1 = b.lo[1]; y1 <= b.hi[1] && !brute; ++y1)
                                        for (int y2 = b.lo[2]; y2 <= b.hi[2] && !brute; ++y2) {
                                            const double s0 = x0 + y0, s1 = x1 + y1, s2 = x2 + y2;
                                            brute = s0 * s0 + s1 * s1 + s2 * s2 <= R * R;
                                        }
                    CHECK(cubes_related(a, b, R) == brute);
                    CHECK(cubes_related(b, a, R) == brute);
                    CHECK(fast.count({j, k}) == (brute ? 1u : 0u));
                }
        }
}
