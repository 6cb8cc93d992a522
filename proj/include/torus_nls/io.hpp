#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "torus_nls/harness.hpp"
#include "torus_nls/lattice.hpp"
#include "torus_nls/littlewood_paley.hpp"
#include "torus_nls/paths.hpp"

namespace tnls {

// Flat `key = value` run configuration. Required keys: bandlimit, T, n.
struct RunConfig {
    TorusMetric metric = generic_metric();
    double p = 2.0;
    int sign = 1;
    int bandlimit = 8;
    TimeGrid grid{1.0, 8};
    int oversample = 2;
    Profile profile = Profile::sharp;
    std::uint64_t seed = 1;
    std::string output_dir = "torus_nls_out";
    // Solver settings.
    double amplitude = 0.01;  // H^{s_c} norm of the generated initial datum
    double tol = 1e-10;
    int max_iter = 50;

    // Whether p / sign / seed were given explicitly (presets otherwise keep their own).
    bool p_set = false;
    bool sign_set = false;
    bool seed_set = false;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string format_config(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::string& path);
HarnessEnv make_env(const RunConfig& cfg);

// Shortest decimal that parses back to the same double.
std::string format_double(double x);

std::string field_to_json(const SpectralField& f);
SpectralField field_from_json(const std::string& text);
void save_field(const SpectralField& f, const std::string& path);
SpectralField load_field(const std::string& path);

std::string report_json(const ExperimentReport& r, const RunConfig& cfg);
std::string report_csv(const ExperimentReport& r);
// Writes <dir>/<preset>.json and <dir>/<preset>.csv; returns the JSON path.
std::string write_report(const ExperimentReport& r, const RunConfig& cfg, const std::string& dir);

// Merge every report CSV in `dir` into `out`; returns the number of data rows written.
std::size_t summarize_reports(const std::string& dir, const std::string& out);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

}  // namespace tnls
