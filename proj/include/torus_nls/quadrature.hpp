#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "torus_nls/lattice.hpp"

namespace tnls {

// Fixed-size complex vector used as a quadrature accumulator.
template <std::size_t K>
struct CVec {
    std::array<cplx, K> v{};
    CVec& operator+=(const CVec& o) {
        for (std::size_t i = 0; i < K; ++i) v[i] += o.v[i];
        return *this;
    }
    cplx& operator[](std::size_t i) { return v[i]; }
    const cplx& operator[](std::size_t i) const { return v[i]; }
};
template <std::size_t K>
CVec<K> operator*(double s, CVec<K> a) {
    for (auto& x : a.v) x *= s;
    return a;
}
template <std::size_t K>
CVec<K> operator*(CVec<K> a, double s) {
    return s * a;
}

// K-point Gauss-Legendre rule mapped to [0, 1].
class GaussLegendre {
public:
    explicit GaussLegendre(int K);
    static const GaussLegendre& cached(int K);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    // Integral of f over [a, b] using the rule.
    template <class F>
    auto integrate(F&& f, double a, double b) const -> decltype(f(0.0)) {
        const double h = b - a;
        decltype(f(0.0)) acc{};
        for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * f(a + h * nodes_[i]);
        return acc * h;
    }

    // Sum of the rule over consecutive breakpoints (sorted, starting at 0 and ending at 1).
    template <class F>
    auto integrate_pieces(F&& f, const std::vector<double>& breaks) const -> decltype(f(0.0)) {
        decltype(f(0.0)) acc{};
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            if (breaks[i + 1] > breaks[i]) acc += integrate(f, breaks[i], breaks[i + 1]);
        return acc;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

// Breakpoints on [0, 1] for integrands that are smooth functions of |a + t b| except where
// that modulus approaches zero.  The near-root is located in closed form and the interval
// is graded geometrically towards it.
std::vector<double> line_breakpoints(cplx a, cplx b);

// Merge breakpoint lists, sort and deduplicate; always contains 0 and 1.
std::vector<double> merge_breakpoints(std::vector<double> a, const std::vector<double>& b);

}  // namespace tnls
