#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include <fftw3.h>

namespace tnls {

using cplx = std::complex<double>;
using FreqIndex = std::array<int, 3>;

inline constexpr double kPi = 3.14159265358979323846;

struct TorusMetric {
    std::array<double, 3> theta{1.0, 1.0, 1.0};
    double laplace_scale = 4.0 * kPi * kPi;
    // Use (1 + |xi|^2)^(1/2) instead of (1 + Q(xi))^(1/2) for <xi>.
    bool euclidean_bracket = false;

    void validate() const;
    bool operator==(const TorusMetric&) const = default;
};

// theta = (1, sqrt 2, sqrt 3), the generic metric used by tests and presets.
TorusMetric generic_metric();

double q_form(const TorusMetric& m, const FreqIndex& xi);
// <xi> = (1 + Q(xi))^(1/2), or Euclidean if the metric asks for it.
double bracket(const TorusMetric& m, const FreqIndex& xi);
double euclidean_norm(const FreqIndex& xi);

// exp(i * angle) with the angle reduced modulo 2 pi in extended precision.
cplx unit_phase(long double angle);
// exp(i * sign * c * t * Q(xi)); sign = -1 is the free Schroedinger flow.
cplx flow_phase(const TorusMetric& m, const FreqIndex& xi, double t, int sign);

class SpectralField {
public:
    SpectralField() = default;
    SpectralField(const TorusMetric& metric, int bandlimit);

    const TorusMetric& metric() const { return metric_; }
    int bandlimit() const { return M_; }
    int side() const { return 2 * M_ + 1; }
    std::size_t size() const { return coeffs_.size(); }

    std::size_t index(const FreqIndex& xi) const;
    FreqIndex freq(std::size_t idx) const;
    bool contains(const FreqIndex& xi) const;

    cplx& operator[](std::size_t i) { return coeffs_[i]; }
    const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
    cplx& at(const FreqIndex& xi) { return coeffs_[index(xi)]; }
    const cplx& at(const FreqIndex& xi) const { return coeffs_[index(xi)]; }

    std::vector<cplx>& coeffs() { return coeffs_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }

    // Zero-pad or truncate to a different bandlimit.
    SpectralField resized(int M) const;
    SpectralField zeros_like() const { return SpectralField(metric_, M_); }

    double l2_norm() const;
    bool is_zero() const;
    bool all_finite() const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(cplx a);

    template <class Fn>
    void for_each_mode(Fn&& fn) const {
        std::size_t idx = 0;
        for (int a = -M_; a <= M_; ++a)
            for (int b = -M_; b <= M_; ++b)
                for (int c = -M_; c <= M_; ++c, ++idx) fn(FreqIndex{a, b, c}, idx);
    }

private:
    TorusMetric metric_{};
    int M_ = 0;
    std::vector<cplx> coeffs_{cplx(0.0)};
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx s, SpectralField a);
SpectralField conj(const SpectralField& f);  // coefficients of the pointwise conjugate
SpectralField delta_field(const TorusMetric& m, int M, const FreqIndex& xi, cplx value = 1.0);

// Throws GridMismatch unless metric and bandlimit agree.
void require_compatible(const SpectralField& a, const SpectralField& b);

template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) {}
    T* allocate(std::size_t n) {
        void* p = fftw_malloc(n * sizeof(T));
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) { fftw_free(p); }
    template <class U>
    bool operator==(const FftwAllocator<U>&) const { return true; }
};

using AlignedVector = std::vector<cplx, FftwAllocator<cplx>>;

struct GridField {
    TorusMetric metric{};
    int n = 0;
    AlignedVector samples;

    GridField() = default;
    GridField(const TorusMetric& m, int n_);
    std::size_t size() const { return samples.size(); }
    cplx mean() const;
};

// Points per axis used for an oversample factor: exactly 2M+1 at factor 1, otherwise
// the smallest 5-smooth integer >= oversample*(2M+1).
int grid_size(int M, int oversample);
// Smallest integer >= n with no prime factor above 5.
int smooth_size(int n);

GridField to_grid(const SpectralField& f, int oversample);
GridField to_grid_n(const SpectralField& f, int n);
SpectralField to_spectral(const GridField& g, int M);

double grid_lp_norm(const GridField& g, double p);
GridField grid_product(const GridField& a, const GridField& b);

enum class MultiplierKind { japanese_bracket, homogeneous };
SpectralField fractional_multiplier(const SpectralField& f, double s, MultiplierKind kind);

}  // namespace tnls
