#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include "torus_nls/lattice.hpp"
#include "torus_nls/littlewood_paley.hpp"
#include "torus_nls/paths.hpp"

namespace tnls {

// Independent stream for trial `index` of a run seeded with `seed`.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    // Standard complex Gaussian, E|z|^2 = 1.
    cplx cnormal();
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

struct Support {
    enum class Kind { all, ball, shell, cube };
    Kind kind = Kind::all;
    int N = 0;
    FreqIndex lo{0, 0, 0};
    FreqIndex hi{0, 0, 0};

    static Support everything() { return {}; }
    static Support ball(int N);   // |xi| <= N
    static Support shell(int N);  // sharp dyadic shell N/2 < |xi| <= N (|xi| <= 1 for N = 1)
    static Support cube(const FreqIndex& lo, const FreqIndex& hi);
    // Side-N cube centred at the origin: [-N/2, N/2)^3, or {0} for N = 1.
    static Support centered_cube(int N);
    bool contains(const FreqIndex& xi) const;
    // Smallest bandlimit whose lattice holds the support.
    int min_bandlimit() const;
};

// Gaussian coefficients times <xi>^{-decay} on the support.
SpectralField random_field(const TorusMetric& m, int M, Rng& rng, const Support& support, double decay = 0.0);

enum class PathKind { gaussian_shell, free_flow, step_atom };
const char* path_kind_name(PathKind k);
PathKind parse_path_kind(const std::string& s);

// gaussian_shell: the same random data at every sample time;
// free_flow: linear evolution of random data;
// step_atom: linear evolution of piecewise-constant profiles with `pieces` independent draws.
SpaceTimePath random_path(PathKind kind, const TimeGrid& grid, Rng& rng,
                          const std::function<SpectralField(Rng&)>& draw, int pieces = 3);

}  // namespace tnls
