#include "torus_nls/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "torus_nls/errors.hpp"

namespace tnls {

GaussLegendre::GaussLegendre(int K) {
    if (K < 1) throw UsageError("Gauss-Legendre rule needs at least one node");
    nodes_.resize(static_cast<std::size_t>(K));
    weights_.resize(static_cast<std::size_t>(K));
    for (int i = 0; i < (K + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (K + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= K; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = K * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1, 1] to [0, 1].
        nodes_[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
        nodes_[static_cast<std::size_t>(K - 1 - i)] = 0.5 * (1.0 + x);
        weights_[static_cast<std::size_t>(i)] = 0.5 * w;
        weights_[static_cast<std::size_t>(K - 1 - i)] = 0.5 * w;
    }
}

const GaussLegendre& GaussLegendre::cached(int K) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendre>> rules;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = rules[K];
    if (!slot) slot = std::make_unique<GaussLegendre>(K);
    return *slot;
}

std::vector<double> line_breakpoints(cplx a, cplx b) {
    std::vector<double> out{0.0, 1.0};
    double bb = std::norm(b);
    if (bb == 0.0) return out;
    // |a + t b|^2 = |b|^2 ((t - tc)^2 + delta^2): branch points at tc +- i delta.
    double tc = -(a.real() * b.real() + a.imag() * b.imag()) / bb;
    double delta = std::abs(a + tc * b) / std::sqrt(bb);
    double gap = tc < 0.0 ? -tc : (tc > 1.0 ? tc - 1.0 : 0.0);
    if (std::hypot(gap, delta) >= 0.5) return out;
    double h = std::max(delta, 1e-12);
    if (tc > 0.0 && tc < 1.0) out.push_back(tc);
    for (double s = h; s < 1.0; s *= 2.0) {
        out.push_back(tc - s);
        out.push_back(tc + s);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](double t) { return !(t >= 0.0 && t <= 1.0); }), out.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> merge_breakpoints(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    a.push_back(0.0);
    a.push_back(1.0);
    a.erase(std::remove_if(a.begin(), a.end(), [](double t) { return !(t >= 0.0 && t <= 1.0); }), a.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

}  // namespace tnls
