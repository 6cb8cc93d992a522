#include "torus_nls/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "torus_nls/errors.hpp"
#include "torus_nls/evolution.hpp"
#include "torus_nls/sampling.hpp"

namespace tnls {

void TimeGrid::validate(bool harness) const {
    if (!(T > 0.0) || !std::isfinite(T)) throw UsageError("time grid: T must be positive");
    if (harness && T > 1.0) throw UsageError("time grid: T must not exceed 1");
    if (n < 2) throw UsageError("time grid: n must be at least 2");
}

SpaceTimePath::SpaceTimePath(const TimeGrid& g, std::vector<SpectralField> f) : grid(g), frames(std::move(f)) {
    if (static_cast<int>(frames.size()) != grid.n)
        throw GridMismatch("path has " + std::to_string(frames.size()) + " frames for a grid of " +
                           std::to_string(grid.n));
    for (const auto& fr : frames) require_compatible(frames.front(), fr);
}

SpaceTimePath SpaceTimePath::zeros(const TimeGrid& g, const TorusMetric& m, int M) {
    return SpaceTimePath(g, std::vector<SpectralField>(g.n, SpectralField(m, M)));
}

SpaceTimePath SpaceTimePath::map(const std::function<SpectralField(const SpectralField&)>& fn) const {
    std::vector<SpectralField> out;
    out.reserve(frames.size());
    for (const auto& f : frames) out.push_back(fn(f));
    return SpaceTimePath(grid, std::move(out));
}

void require_compatible(const SpaceTimePath& a, const SpaceTimePath& b) {
    if (!(a.grid == b.grid)) throw GridMismatch("paths live on different time grids");
    require_compatible(a.frames.front(), b.frames.front());
}

SpaceTimePath operator+(const SpaceTimePath& a, const SpaceTimePath& b) {
    require_compatible(a, b);
    SpaceTimePath out = a;
    for (std::size_t k = 0; k < out.frames.size(); ++k) out.frames[k] += b.frames[k];
    return out;
}

SpaceTimePath operator-(const SpaceTimePath& a, const SpaceTimePath& b) {
    require_compatible(a, b);
    SpaceTimePath out = a;
    for (std::size_t k = 0; k < out.frames.size(); ++k) out.frames[k] -= b.frames[k];
    return out;
}

SpaceTimePath operator*(cplx s, const SpaceTimePath& a) {
    SpaceTimePath out = a;
    for (auto& f : out.frames) f *= s;
    return out;
}

ModePath twisted_mode(const SpaceTimePath& path, std::size_t idx) {
    const FreqIndex xi = path.frames.front().freq(idx);
    ModePath out(path.frames.size());
    for (int k = 0; k < path.grid.n; ++k)
        out[k] = flow_phase(path.metric(), xi, path.grid.t(k), +1) * path.frames[k][idx];
    return out;
}

double spacetime_lp(const SpaceTimePath& path, double p_t, double p_x, int oversample) {
    if (!(p_t >= 1.0) || !(p_x >= 1.0)) throw InvalidLebesgueExponent(std::min(p_t, p_x));
    std::vector<double> slices;
    slices.reserve(path.frames.size());
    for (const auto& f : path.frames) slices.push_back(grid_lp_norm(to_grid(f, oversample), p_x));
    if (std::isinf(p_t)) return *std::max_element(slices.begin(), slices.end());
    long double acc = 0.0L;
    for (double v : slices) acc += std::pow(static_cast<long double>(v), static_cast<long double>(p_t));
    return static_cast<double>(std::pow(acc * path.grid.dt(), 1.0L / p_t));
}

double sobolev_norm(const SpectralField& f, double s) {
    long double acc = 0.0L;
    f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        const double a = std::norm(f[idx]);
        if (a == 0.0) return;
        acc += static_cast<long double>(a) * std::pow(bracket(f.metric(), xi), 2.0 * s);
    });
    return static_cast<double>(std::sqrt(acc));
}

double sup_sobolev(const SpaceTimePath& path, double s) {
    double best = 0.0;
    for (const auto& f : path.frames) best = std::max(best, sobolev_norm(f, s));
    return best;
}

namespace {

// Longest chain DP; dist2(i, j) is the squared increment between samples i < j and
// tail2(j) the squared terminal drop from sample j.
template <class D, class E>
double variation_dp(int n, D&& dist2, E&& tail2) {
    std::vector<double> best(n, 0.0);
    double answer = tail2(0);
    for (int j = 1; j < n; ++j) {
        double b = -1.0;
        for (int i = 0; i < j; ++i) b = std::max(b, best[i] + dist2(i, j));
        best[j] = b;
        answer = std::max(answer, b + tail2(j));
    }
    return std::sqrt(answer);
}

}  // namespace

double v2_norm(const ModePath& a) {
    if (a.empty()) return 0.0;
    return variation_dp(
        static_cast<int>(a.size()), [&](int i, int j) { return std::norm(a[j] - a[i]); },
        [&](int j) { return std::norm(a[j]); });
}

double v2_norm_hilbert(const SpaceTimePath& path, double s) {
    const int n = path.grid.n;
    const auto& ref = path.frames.front();
    std::vector<SpectralField> tw(path.frames);
    std::vector<double> weight(ref.size());
    ref.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        weight[idx] = std::pow(bracket(ref.metric(), xi), 2.0 * s);
        for (int k = 0; k < n; ++k) tw[k][idx] *= flow_phase(ref.metric(), xi, path.grid.t(k), +1);
    });
    auto d2 = [&](const SpectralField* a, const SpectralField& b) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < b.size(); ++i) acc += weight[i] * std::norm(b[i] - (a ? (*a)[i] : cplx(0.0)));
        return static_cast<double>(acc);
    };
    return variation_dp(
        n, [&](int i, int j) { return d2(&tw[i], tw[j]); }, [&](int j) { return d2(nullptr, tw[j]); });
}

double y_norm(const SpaceTimePath& path, double s) {
    const auto& ref = path.frames.front();
    long double acc = 0.0L;
    ModePath mode(path.grid.n);
    ref.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        bool any = false;
        for (int k = 0; k < path.grid.n; ++k) {
            const cplx v = path.frames[k][idx];
            if (v != cplx(0.0)) any = true;
            mode[k] = v;
        }
        if (!any) return;
        for (int k = 0; k < path.grid.n; ++k) mode[k] *= flow_phase(ref.metric(), xi, path.grid.t(k), +1);
        const double v = v2_norm(mode);
        acc += static_cast<long double>(v * v) * std::pow(bracket(ref.metric(), xi), 2.0 * s);
    });
    return static_cast<double>(std::sqrt(acc));
}

double u2_upper_bound(const ModePath& a) {
    long double acc = 0.0L;
    std::size_t k = 0;
    while (k < a.size()) {
        std::size_t j = k;
        while (j + 1 < a.size() && a[j + 1] == a[k]) ++j;
        acc += std::norm(a[k]);
        k = j + 1;
    }
    return static_cast<double>(std::sqrt(acc));
}

double x_upper_bound(const SpaceTimePath& path, double s) {
    const auto& ref = path.frames.front();
    long double acc = 0.0L;
    ref.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        const double u = u2_upper_bound(twisted_mode(path, idx));
        if (u == 0.0) return;
        acc += static_cast<long double>(u * u) * std::pow(bracket(ref.metric(), xi), 2.0 * s);
    });
    return static_cast<double>(std::sqrt(acc));
}

cplx duality_pairing(const SpaceTimePath& f, const SpaceTimePath& v) {
    require_compatible(f, v);
    std::complex<long double> acc = 0.0L;
    for (std::size_t k = 0; k < f.frames.size(); ++k) {
        const auto& a = f.frames[k];
        const auto& b = v.frames[k];
        for (std::size_t i = 0; i < a.size(); ++i) {
            const cplx z = a[i] * std::conj(b[i]);
            acc += std::complex<long double>(z.real(), z.imag());
        }
    }
    acc *= static_cast<long double>(f.grid.dt());
    return cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
}

double xnorm_lower_bound(const SpaceTimePath& f, double s, int m, std::uint64_t seed) {
    if (m < 1) throw UsageError("xnorm_lower_bound: candidate count must be at least 1");
    const auto& ref = f.frames.front();
    bool f_zero = true;
    std::vector<char> active(ref.size(), 0);
    for (const auto& fr : f.frames)
        for (std::size_t i = 0; i < fr.size(); ++i)
            if (fr[i] != cplx(0.0)) active[i] = 1, f_zero = false;
    if (f_zero) return 0.0;

    auto draw = [&](Rng& rng) {
        SpectralField out = ref.zeros_like();
        for (std::size_t i = 0; i < out.size(); ++i)
            if (active[i]) out[i] = rng.cnormal();
        return out;
    };

    double best = 0.0;
    for (int j = 0; j < m; ++j) {
        SpaceTimePath v;
        if (j == 0) {
            // Free flow of the first frame of f; falls back to random data.
            SpectralField d = f.frames.front();
            if (d.is_zero()) {
                Rng rng(stream_seed(seed, 0));
                d = draw(rng);
            }
            v = free_flow(d, f.grid);
        } else {
            Rng rng(stream_seed(seed, static_cast<std::uint64_t>(j)));
            const PathKind kind = (j % 2 == 1) ? PathKind::step_atom : PathKind::free_flow;
            v = random_path(kind, f.grid, rng, draw, 1 + rng.uniform_int(1, 4));
        }
        const double y = y_norm(v, -s);
        if (!(y > 0.0)) continue;
        best = std::max(best, std::abs(duality_pairing(f, v)) / y);
    }
    return best;
}

}  // namespace tnls
