#include "torus_nls/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "torus_nls/errors.hpp"

namespace tnls {

const char* profile_name(Profile p) { return p == Profile::smooth ? "smooth" : "sharp"; }

Profile parse_profile(const std::string& s) {
    if (s == "smooth") return Profile::smooth;
    if (s == "sharp") return Profile::sharp;
    throw UsageError("unknown cutoff profile '" + s + "'");
}

namespace {

double glue(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

int floor_div(int a, int b) {
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

double bump(Profile profile, double r) {
    if (profile == Profile::sharp) return r <= 1.0 ? 1.0 : 0.0;
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    double a = glue(2.0 - r);
    double b = glue(r - 1.0);
    return a / (a + b);
}

double phi_weight(Profile profile, int N, const FreqIndex& xi) {
    if (N <= 0) return 0.0;
    return bump(profile, euclidean_norm(xi) / N);
}

double psi_weight(Profile profile, int N, const FreqIndex& xi) {
    if (N == 1) return phi_weight(profile, 1, xi);
    return phi_weight(profile, N, xi) - phi_weight(profile, N / 2, xi);
}

bool is_dyadic(int N) { return N >= 1 && (N & (N - 1)) == 0; }

std::vector<int> dyadic_ladder(int M) {
    std::vector<int> out{1};
    while (out.back() < 2 * M) out.push_back(out.back() * 2);
    return out;
}

double support_radius(Profile profile, int N) { return profile == Profile::sharp ? N : 2.0 * N; }

namespace {

template <class W>
SpectralField apply_weight(const SpectralField& f, W&& w) {
    SpectralField out = f.zeros_like();
    f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        if (f[idx] == cplx(0.0)) return;
        double m = w(xi);
        if (m != 0.0) out[idx] = f[idx] * m;
    });
    return out;
}

}  // namespace

SpectralField project_dyadic(const SpectralField& f, int N, Profile profile) {
    if (!is_dyadic(N)) throw UsageError("dyadic frequency must be a power of two");
    return apply_weight(f, [&](const FreqIndex& xi) { return psi_weight(profile, N, xi); });
}

SpectralField project_leq(const SpectralField& f, int N, Profile profile) {
    return apply_weight(f, [&](const FreqIndex& xi) { return phi_weight(profile, N, xi); });
}

SpectralField blended_projection(const SpectralField& f, int N, double theta, Profile profile) {
    if (theta < 0.0 || theta > 1.0) throw UsageError("blend parameter must lie in [0,1]");
    return apply_weight(f, [&](const FreqIndex& xi) {
        return phi_weight(profile, N / 2, xi) + theta * psi_weight(profile, N, xi);
    });
}

bool Cube::contains(const FreqIndex& xi) const {
    for (int i = 0; i < 3; ++i)
        if (xi[i] < lo[i] || xi[i] > hi[i]) return false;
    return true;
}

CubeDecomposition make_cube_decomposition(int M, int side) {
    if (side < 1) throw UsageError("cube side must be positive");
    CubeDecomposition d;
    d.side = side;
    d.bandlimit = M;
    int a0 = floor_div(-M, side), a1 = floor_div(M, side);
    for (int a = a0; a <= a1; ++a)
        for (int b = a0; b <= a1; ++b)
            for (int c = a0; c <= a1; ++c) {
                Cube q;
                q.anchor = {a * side, b * side, c * side};
                for (int i = 0; i < 3; ++i) {
                    q.lo[i] = std::max(q.anchor[i], -M);
                    q.hi[i] = std::min(q.anchor[i] + side - 1, M);
                }
                d.cubes.push_back(q);
            }
    return d;
}

std::size_t CubeDecomposition::locate(const FreqIndex& xi) const {
    int a0 = floor_div(-bandlimit, side);
    std::size_t per = static_cast<std::size_t>(floor_div(bandlimit, side) - a0 + 1);
    std::size_t k[3];
    for (int i = 0; i < 3; ++i) k[i] = static_cast<std::size_t>(floor_div(xi[i], side) - a0);
    return (k[0] * per + k[1]) * per + k[2];
}

SpectralField project_cube(const SpectralField& f, const Cube& cube) {
    SpectralField out = f.zeros_like();
    f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        if (cube.contains(xi)) out[idx] = f[idx];
    });
    return out;
}

bool cubes_related(const Cube& a, const Cube& b, double R) {
    // The integer points of the sum set form the box [lo_a+lo_b, hi_a+hi_b]; its point
    // nearest the origin is obtained by clamping 0 per axis.
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        int lo = a.lo[i] + b.lo[i], hi = a.hi[i] + b.hi[i];
        int x = std::clamp(0, lo, hi);
        d2 += static_cast<double>(x) * x;
    }
    return d2 <= R * R;
}

std::vector<std::pair<std::size_t, std::size_t>> related_cube_pairs(const CubeDecomposition& d, double R) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const int a0 = floor_div(-d.bandlimit, d.side);
    const int per = floor_div(d.bandlimit, d.side) - a0 + 1;
    auto axis_lo = [&](int t) { return std::max((t + a0) * d.side, -d.bandlimit); };
    auto axis_hi = [&](int t) { return std::min((t + a0) * d.side + d.side - 1, d.bandlimit); };
    for (std::size_t j = 0; j < d.cubes.size(); ++j) {
        const Cube& cj = d.cubes[j];
        // Per axis, the partner's range must bring the summed interval within [-R, R].
        std::vector<int> ok[3];
        for (int i = 0; i < 3; ++i)
            for (int t = 0; t < per; ++t)
                if (cj.lo[i] + axis_lo(t) <= R && cj.hi[i] + axis_hi(t) >= -R) ok[i].push_back(t);
        for (int ta : ok[0])
            for (int tb : ok[1])
                for (int tc : ok[2]) {
                    std::size_t k = (static_cast<std::size_t>(ta) * per + tb) * per + tc;
                    if (k < j) continue;
                    if (cubes_related(cj, d.cubes[k], R)) out.emplace_back(j, k);
                }
    }
    return out;
}

}  // namespace tnls
