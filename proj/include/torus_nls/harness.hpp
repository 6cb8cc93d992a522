#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "torus_nls/lattice.hpp"
#include "torus_nls/littlewood_paley.hpp"
#include "torus_nls/nonlinearity.hpp"
#include "torus_nls/paths.hpp"
#include "torus_nls/sampling.hpp"

namespace tnls {

enum class Verdict { pass, fail, inconclusive };
const char* verdict_name(Verdict v);
struct EstimateSpec;
// "pass", "fail", "inconclusive", or "consistent" for a passing sampled-sup preset.
std::string verdict_label(Verdict v, const EstimateSpec& spec);

enum class SamplerKind { gaussian_shell, free_flow, step_atom, solver_output };
const char* sampler_name(SamplerKind k);
SamplerKind parse_sampler(const std::string& s);

struct SamplerSpec {
    SamplerKind kind = SamplerKind::free_flow;
    // Each drawn datum is rescaled to this norm (in the Sobolev index the preset chooses).
    double amplitude = 1.0;
    int pieces = 3;  // step_atom only
};

// Run-wide settings shared by every preset.
struct HarnessEnv {
    TorusMetric metric = generic_metric();
    int bandlimit = 8;
    TimeGrid grid{1.0, 8};
    int oversample = 2;
    Profile profile = Profile::sharp;
    int threads = 1;
    bool unsafe = false;
    bool allow_large_T = false;
};

struct EstimateSpec;

struct Measurement {
    Measurement() = default;
    Measurement(double l, double r, bool good = true, std::string why = {})
        : lhs(l), rhs(r), ok(good), note(std::move(why)) {}

    double lhs = 0.0;
    double rhs = 0.0;
    bool ok = true;  // structural side checks (identities, embeddings)
    std::string note;
};

// Everything a measurement needs for one (N, trial) cell.
struct TrialContext {
    const EstimateSpec& spec;
    const HarnessEnv& env;
    const SamplerSpec& sampler;
    int N;
    int N2;  // secondary scale, 0 when unused
    int M;   // lattice bandlimit for this cell
    TimeGrid grid;
    Rng rng;
    double scale = 1.0;  // extra factor on the sampler amplitude

    PowerNonlinearity nl() const;
    double s_c() const;
    // Random field on the support, coefficients ~ <xi>^{-decay}, rescaled to H^{norm_s} norm `scale`.
    SpectralField field(const Support& support, double decay, double norm_s, double scale);
    // Space-time path of the sampler's kind whose data are drawn like `field`.
    SpaceTimePath path(const Support& support, double decay, double norm_s);
};

struct EstimateSpec {
    std::string name;
    std::string family;
    std::string description;
    std::string lhs_name;
    std::string rhs_name;
    double p = 2.0;
    int sign = 1;
    double predicted_exponent = 0.0;
    std::vector<int> dyadic_range;
    // Optional second scale; the verdict then also requires ratios uniform along it.
    std::vector<int> secondary_range;
    std::function<bool(int N, int N2)> secondary_valid;
    std::vector<SamplerSpec> samplers{SamplerSpec{}};
    int trials = 8;
    std::uint64_t seed = 1;
    double slack = 0.15;
    double ratio_cap = 3.0;
    bool fit_slope = true;
    // Reuse the same random draw for every N (amplitude sweeps).
    bool shared_data = false;
    int time_steps = 0;  // 0: take the environment's grid
    double min_p = 0.0;  // p must exceed this
    double max_p = 1e9;  // p must be below this
    std::function<int(int N, int N2)> bandlimit_for;
    bool use_env_lattice = false;
    // The lhs is a sup over sampled test functions, i.e. a lower bound; a pass only shows consistency.
    bool sampled_sup = false;
    std::function<Measurement(TrialContext&)> measure;
    // Predicted exponent as a function of p, for presets whose scaling depends on it.
    std::function<double(double p)> exponent_of_p;

    void validate() const;
    // Copy with a new p; refreshes predicted_exponent when exponent_of_p is set.
    EstimateSpec with_p(double p) const;
};

struct TrialRecord {
    int N = 0;
    int N2 = 0;
    int trial = 0;
    std::string sampler;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool ok = true;
    std::string note;
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS residual in log2 units
};

struct ExperimentReport {
    EstimateSpec spec;
    HarnessEnv env;
    std::vector<TrialRecord> records;
    std::vector<std::pair<int, double>> max_ratio;  // per N, over trials, samplers and N2
    std::optional<SlopeFit> slope;
    double bottom_max = 0.0;  // max of ratio / N^predicted over the lower half of the range
    double top_max = 0.0;
    double uniformity = 0.0;  // worst top/bottom quotient along the secondary scale
    bool degenerate = false;
    bool structural_ok = true;
    Verdict verdict = Verdict::inconclusive;
};

// Least squares of log2(value) against log2(N).
SlopeFit fit_scaling_slope(const std::vector<std::pair<double, double>>& series);

// Verdict from the recorded data; pure in (report data, slack, cap).
Verdict decide(const ExperimentReport& r, double slack, double ratio_cap);

ExperimentReport run_estimate(const EstimateSpec& spec, const HarnessEnv& env);

const std::vector<EstimateSpec>& preset_registry();
// Look up by preset name; throws NotFound.
const EstimateSpec& find_preset(const std::string& name);
// Presets whose name or family matches; "all" selects everything. Throws NotFound if empty.
std::vector<EstimateSpec> select_presets(const std::string& key);

struct HoelderExponentSet {
    double p = 0.0;
    double eps = 0.0;
    std::array<double, 2> low{};   // r0, r1
    std::array<double, 5> high{};  // r0 .. r4
    double low_sum = 0.0;          // 3/r0 + 1/r1
    double high_sum = 0.0;         // 1/r0 + 1/r1 + 1/r2 + 1/r3 + 1/r4
    double high_weighted_sum = 0.0;  // same with (p-2)/r4 in the last slot
};

// Throws EpsilonTooLarge naming the first exponent that is not above 10/3.
HoelderExponentSet hoelder_exponents(double p, double eps);
// Supremum of admissible eps for the low and high groups, by bisection.
struct EpsilonBounds {
    double low = 0.0;
    double high = 0.0;
    double both() const { return low < high ? low : high; }
};
EpsilonBounds epsilon_max(double p, double tol = 1e-13);

// |grid integral of v g - sum over related cube pairs| for sharp shells v_{N0}, u_{N1} and g_{<=2N2}.
// R <= 0 selects the natural relation radius 2 N2.
double cube_identity_check(int N0, int N1, int N2, std::uint64_t seed, const TorusMetric& m = generic_metric(),
                           double R = 0.0);
// |int int v_{N0} u_{N1} u_{N2} u_{N3}| over a short free-flow window, unit-normalized sharp shells.
double vanishing_check(int N0, int N1, int N2, int N3, std::uint64_t seed, const TorusMetric& m = generic_metric());

// Cube-paired quadrilinear bookkeeping over a path: for each frame, sum a(xi) b(eta) h(zeta) over xi + eta + zeta = 0,
// binned by the cubes of side `side` holding xi and eta.
struct CubePairedSum {
    cplx total{0.0};     // all cells
    cplx paired{0.0};    // cells whose cubes are related at radius R
    double abs_paired = 0.0;  // sum over related ordered pairs of |time integral of the cell|
};
CubePairedSum cube_paired_integral(const SpaceTimePath& a, const SpaceTimePath& b, const SpaceTimePath& h, int side,
                                   double R);

}  // namespace tnls
