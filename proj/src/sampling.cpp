#include "torus_nls/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "torus_nls/errors.hpp"
#include "torus_nls/evolution.hpp"

namespace tnls {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = (seed ^ index) + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

cplx Rng::cnormal() {
    const double a = normal();
    const double b = normal();
    return cplx(a, b) * std::sqrt(0.5);
}

Support Support::ball(int N) {
    Support s;
    s.kind = Kind::ball;
    s.N = N;
    return s;
}

Support Support::shell(int N) {
    if (!is_dyadic(N)) throw UsageError("shell support needs a dyadic N");
    Support s;
    s.kind = Kind::shell;
    s.N = N;
    return s;
}

Support Support::cube(const FreqIndex& lo, const FreqIndex& hi) {
    Support s;
    s.kind = Kind::cube;
    s.lo = lo;
    s.hi = hi;
    return s;
}

Support Support::centered_cube(int N) {
    if (N <= 1) return cube({0, 0, 0}, {0, 0, 0});
    const int h = N / 2;
    return cube({-h, -h, -h}, {N - h - 1, N - h - 1, N - h - 1});
}

bool Support::contains(const FreqIndex& xi) const {
    switch (kind) {
        case Kind::all: return true;
        case Kind::ball: return euclidean_norm(xi) <= N;
        case Kind::shell: return psi_weight(Profile::sharp, N, xi) > 0.0;
        case Kind::cube:
            for (int i = 0; i < 3; ++i)
                if (xi[i] < lo[i] || xi[i] > hi[i]) return false;
            return true;
    }
    return false;
}

int Support::min_bandlimit() const {
    switch (kind) {
        case Kind::all: return 0;
        case Kind::ball:
        case Kind::shell: return N;
        case Kind::cube: {
            int m = 0;
            for (int i = 0; i < 3; ++i) m = std::max({m, std::abs(lo[i]), std::abs(hi[i])});
            return m;
        }
    }
    return 0;
}

SpectralField random_field(const TorusMetric& m, int M, Rng& rng, const Support& support, double decay) {
    SpectralField out(m, M);
    out.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        if (!support.contains(xi)) return;
        const cplx z = rng.cnormal();
        out[idx] = decay == 0.0 ? z : z * std::pow(bracket(m, xi), -decay);
    });
    return out;
}

const char* path_kind_name(PathKind k) {
    switch (k) {
        case PathKind::gaussian_shell: return "gaussian_shell";
        case PathKind::free_flow: return "free_flow";
        case PathKind::step_atom: return "step_atom";
    }
    return "?";
}

PathKind parse_path_kind(const std::string& s) {
    if (s == "gaussian_shell") return PathKind::gaussian_shell;
    if (s == "free_flow") return PathKind::free_flow;
    if (s == "step_atom") return PathKind::step_atom;
    throw UsageError("unknown sampler kind '" + s + "'");
}

SpaceTimePath random_path(PathKind kind, const TimeGrid& grid, Rng& rng,
                          const std::function<SpectralField(Rng&)>& draw, int pieces) {
    switch (kind) {
        case PathKind::gaussian_shell: {
            const SpectralField d = draw(rng);
            return SpaceTimePath(grid, std::vector<SpectralField>(grid.n, d));
        }
        case PathKind::free_flow: return free_flow(draw(rng), grid);
        case PathKind::step_atom: {
            const int J = std::clamp(pieces, 1, grid.n);
            // J - 1 distinct interior breakpoints.
            std::vector<int> cuts(grid.n - 1);
            for (int k = 0; k < grid.n - 1; ++k) cuts[k] = k + 1;
            std::shuffle(cuts.begin(), cuts.end(), rng.engine());
            cuts.resize(J - 1);
            std::sort(cuts.begin(), cuts.end());
            std::vector<SpectralField> profiles;
            for (int j = 0; j < J; ++j) profiles.push_back(draw(rng));
            std::vector<SpectralField> frames;
            frames.reserve(grid.n);
            int piece = 0;
            for (int k = 0; k < grid.n; ++k) {
                while (piece < J - 1 && k >= cuts[piece]) ++piece;
                frames.push_back(propagate(profiles[piece], grid.t(k)));
            }
            return SpaceTimePath(grid, std::move(frames));
        }
    }
    throw UsageError("unknown sampler kind");
}

}  // namespace tnls
