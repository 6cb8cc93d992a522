#include "torus_nls/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "fft.hpp"
#include "torus_nls/errors.hpp"

namespace tnls {

void TorusMetric::validate() const {
    for (int i = 0; i < 3; ++i)
        if (!(theta[i] > 0.0) || !std::isfinite(theta[i]))
            throw UsageError("metric weight theta" + std::to_string(i + 1) + " must be positive");
    if (!(laplace_scale > 0.0) || !std::isfinite(laplace_scale))
        throw UsageError("laplace_scale must be positive");
}

TorusMetric generic_metric() {
    TorusMetric m;
    m.theta = {1.0, std::sqrt(2.0), std::sqrt(3.0)};
    return m;
}

double q_form(const TorusMetric& m, const FreqIndex& xi) {
    double a = xi[0], b = xi[1], c = xi[2];
    return m.theta[0] * a * a + m.theta[1] * b * b + m.theta[2] * c * c;
}

double euclidean_norm(const FreqIndex& xi) {
    double a = xi[0], b = xi[1], c = xi[2];
    return std::sqrt(a * a + b * b + c * c);
}

double bracket(const TorusMetric& m, const FreqIndex& xi) {
    if (m.euclidean_bracket) {
        double e = euclidean_norm(xi);
        return std::sqrt(1.0 + e * e);
    }
    return std::sqrt(1.0 + q_form(m, xi));
}

cplx unit_phase(long double angle) {
    constexpr long double two_pi = 6.283185307179586476925286766559L;
    long double r = std::fmod(angle, two_pi);
    double d = static_cast<double>(r);
    return {std::cos(d), std::sin(d)};
}

cplx flow_phase(const TorusMetric& m, const FreqIndex& xi, double t, int sign) {
    long double q = static_cast<long double>(m.theta[0]) * xi[0] * xi[0] +
                    static_cast<long double>(m.theta[1]) * xi[1] * xi[1] +
                    static_cast<long double>(m.theta[2]) * xi[2] * xi[2];
    return unit_phase(sign * static_cast<long double>(m.laplace_scale) * static_cast<long double>(t) * q);
}

SpectralField::SpectralField(const TorusMetric& metric, int bandlimit) : metric_(metric), M_(bandlimit) {
    if (bandlimit < 0) throw UsageError("bandlimit must be nonnegative");
    std::size_t L = static_cast<std::size_t>(2 * M_ + 1);
    coeffs_.assign(L * L * L, cplx(0.0));
}

std::size_t SpectralField::index(const FreqIndex& xi) const {
    std::size_t L = static_cast<std::size_t>(side());
    return (static_cast<std::size_t>(xi[0] + M_) * L + static_cast<std::size_t>(xi[1] + M_)) * L +
           static_cast<std::size_t>(xi[2] + M_);
}

FreqIndex SpectralField::freq(std::size_t idx) const {
    std::size_t L = static_cast<std::size_t>(side());
    int c = static_cast<int>(idx % L) - M_;
    idx /= L;
    int b = static_cast<int>(idx % L) - M_;
    int a = static_cast<int>(idx / L) - M_;
    return {a, b, c};
}

bool SpectralField::contains(const FreqIndex& xi) const {
    return std::abs(xi[0]) <= M_ && std::abs(xi[1]) <= M_ && std::abs(xi[2]) <= M_;
}

SpectralField SpectralField::resized(int M) const {
    SpectralField out(metric_, M);
    int K = std::min(M, M_);
    for (int a = -K; a <= K; ++a)
        for (int b = -K; b <= K; ++b)
            for (int c = -K; c <= K; ++c) out.at({a, b, c}) = at({a, b, c});
    return out;
}

double SpectralField::l2_norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
}

bool SpectralField::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const cplx& c) { return c == cplx(0.0); });
}

bool SpectralField::all_finite() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

void require_compatible(const SpectralField& a, const SpectralField& b) {
    if (a.bandlimit() != b.bandlimit() || !(a.metric() == b.metric()))
        throw GridMismatch("fields live on different lattices");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require_compatible(*this, o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require_compatible(*this, o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(cplx a) {
    for (auto& c : coeffs_) c *= a;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

SpectralField conj(const SpectralField& f) {
    SpectralField out = f.zeros_like();
    f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        out.at({-xi[0], -xi[1], -xi[2]}) = std::conj(f[idx]);
    });
    return out;
}

SpectralField delta_field(const TorusMetric& m, int M, const FreqIndex& xi, cplx value) {
    SpectralField f(m, M);
    f.at(xi) = value;
    return f;
}

GridField::GridField(const TorusMetric& m, int n_) : metric(m), n(n_) {
    samples.assign(static_cast<std::size_t>(n) * n * n, cplx(0.0));
}

cplx GridField::mean() const {
    cplx s(0.0);
    for (const auto& v : samples) s += v;
    return s / static_cast<double>(samples.size());
}

namespace {

bool five_smooth(int n) {
    for (int p : {2, 3, 5})
        while (n % p == 0) n /= p;
    return n == 1;
}

inline int wrap(int k, int n) { return k < 0 ? k + n : k; }

}  // namespace

int smooth_size(int n) {
    while (!five_smooth(n)) ++n;
    return n;
}

int grid_size(int M, int oversample) {
    if (oversample < 1) throw UsageError("oversample must be >= 1");
    const int base = oversample * (2 * M + 1);
    return oversample == 1 ? base : smooth_size(base);
}

GridField to_grid_n(const SpectralField& f, int n) {
    const int M = f.bandlimit();
    if (n < 2 * M + 1) throw GridTooSmall(n, M);
    GridField g(f.metric(), n);
    const std::size_t nn = static_cast<std::size_t>(n);
    f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        std::size_t pos = (static_cast<std::size_t>(wrap(xi[0], n)) * nn + static_cast<std::size_t>(wrap(xi[1], n))) * nn +
                          static_cast<std::size_t>(wrap(xi[2], n));
        g.samples[pos] = f[idx];
    });
    detail::fft3d(g.samples.data(), n, +1);
    return g;
}

GridField to_grid(const SpectralField& f, int oversample) { return to_grid_n(f, grid_size(f.bandlimit(), oversample)); }

SpectralField to_spectral(const GridField& g, int M) {
    const int n = g.n;
    if (n < 2 * M + 1) throw GridTooSmall(n, M);
    AlignedVector work(g.samples);
    detail::fft3d(work.data(), n, -1);
    const double scale = 1.0 / (static_cast<double>(n) * n * n);
    const std::size_t nn = static_cast<std::size_t>(n);
    SpectralField out(g.metric, M);
    out.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        std::size_t pos = (static_cast<std::size_t>(wrap(xi[0], n)) * nn + static_cast<std::size_t>(wrap(xi[1], n))) * nn +
                          static_cast<std::size_t>(wrap(xi[2], n));
        out[idx] = work[pos] * scale;
    });
    return out;
}

double grid_lp_norm(const GridField& g, double p) {
    if (g.samples.empty()) return 0.0;
    if (std::isinf(p)) {
        double m = 0.0;
        for (const auto& v : g.samples) m = std::max(m, std::abs(v));
        return m;
    }
    if (p < 1.0) throw UsageError("Lebesgue exponent must be >= 1");
    double s = 0.0;
    if (p == 2.0) {
        for (const auto& v : g.samples) s += std::norm(v);
        return std::sqrt(s / static_cast<double>(g.samples.size()));
    }
    const double h = 0.5 * p;
    for (const auto& v : g.samples) {
        double a = std::norm(v);
        if (a > 0.0) s += std::pow(a, h);
    }
    return std::pow(s / static_cast<double>(g.samples.size()), 1.0 / p);
}

GridField grid_product(const GridField& a, const GridField& b) {
    if (a.n != b.n) throw GridMismatch("grid sizes differ");
    GridField out(a.metric, a.n);
    for (std::size_t i = 0; i < a.samples.size(); ++i) out.samples[i] = a.samples[i] * b.samples[i];
    return out;
}

SpectralField fractional_multiplier(const SpectralField& f, double s, MultiplierKind kind) {
    SpectralField out = f;
    if (s == 0.0) return out;
    const auto& m = f.metric();
    if (kind == MultiplierKind::japanese_bracket) {
        f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) { out[idx] *= std::pow(bracket(m, xi), s); });
        return out;
    }
    std::size_t zero = f.index({0, 0, 0});
    if (s < 0.0 && f[zero] != cplx(0.0)) throw NegativePowerAtZeroMode();
    f.for_each_mode([&](const FreqIndex& xi, std::size_t idx) {
        if (idx == zero) {
            out[idx] = 0.0;
            return;
        }
        double q = m.euclidean_bracket ? euclidean_norm(xi) * euclidean_norm(xi) : q_form(m, xi);
        out[idx] *= std::pow(q, 0.5 * s);
    });
    return out;
}

}  // namespace tnls
