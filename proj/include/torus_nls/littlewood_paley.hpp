#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "torus_nls/lattice.hpp"

namespace tnls {

enum class Profile { smooth, sharp };

const char* profile_name(Profile p);
Profile parse_profile(const std::string& s);

// Radial bump phi(r): 1 on r <= 1, 0 on r >= 2 (smooth), or the indicator of r <= 1 (sharp).
double bump(Profile profile, double r);

// phi_N(xi) = phi(|xi| / N); N = 0 stands for P_{<=1/2} and is identically zero.
double phi_weight(Profile profile, int N, const FreqIndex& xi);
// psi_N = phi_N - phi_{N/2}, psi_1 = phi.
double psi_weight(Profile profile, int N, const FreqIndex& xi);

bool is_dyadic(int N);
// 1, 2, 4, ... up to the first power of two >= 2M.
std::vector<int> dyadic_ladder(int M);
// Frequency radius beyond which P_{<=N} vanishes.
double support_radius(Profile profile, int N);

SpectralField project_dyadic(const SpectralField& f, int N, Profile profile);
SpectralField project_leq(const SpectralField& f, int N, Profile profile);
// Multiplier phi_{N/2} + theta * psi_N.
SpectralField blended_projection(const SpectralField& f, int N, double theta, Profile profile);

struct Cube {
    FreqIndex anchor;  // integer multiples of the side
    FreqIndex lo;      // inclusive bounds, clipped to the lattice
    FreqIndex hi;
    bool contains(const FreqIndex& xi) const;
};

struct CubeDecomposition {
    int side = 1;
    int bandlimit = 0;
    std::vector<Cube> cubes;

    // Index of the cube holding xi.
    std::size_t locate(const FreqIndex& xi) const;
};

CubeDecomposition make_cube_decomposition(int M, int side);
SpectralField project_cube(const SpectralField& f, const Cube& cube);

// Unordered pairs (j <= k) whose sum set meets the closed ball |xi| <= R.
std::vector<std::pair<std::size_t, std::size_t>> related_cube_pairs(const CubeDecomposition& d, double R);
bool cubes_related(const Cube& a, const Cube& b, double R);

}  // namespace tnls
