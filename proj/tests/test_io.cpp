#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <unistd.h>

#include "torus_nls/errors.hpp"
#include "torus_nls/io.hpp"
#include "torus_nls/sampling.hpp"

using namespace tnls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("torus_nls_io_" + std::to_string(::getpid())) / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const char* kMinimal = "bandlimit = 4\nT = 0.5\nn = 6\n";

}  // namespace

TEST_CASE("config parsing") {
    const RunConfig c = parse_config(
        "# run\n"
        "bandlimit = 6   # lattice\n"
        "T = 0.25\n"
        "n = 12\n"
        "theta = 1, 2.5 3\n"
        "p = 2.5\n"
        "profile = smooth\n"
        "seed = 99\n"
        "euclidean_bracket = true\n");
    CHECK(c.bandlimit == 6);
    CHECK(c.grid.T == 0.25);
    CHECK(c.grid.n == 12);
    CHECK(c.metric.theta == std::array<double, 3>{1.0, 2.5, 3.0});
    CHECK(c.p == 2.5);
    CHECK(c.p_set);
    CHECK_FALSE(c.sign_set);
    CHECK(c.profile == Profile::smooth);
    CHECK(c.seed == 99u);
    CHECK(c.metric.euclidean_bracket);
    CHECK_FALSE(parse_config(kMinimal).p_set);
}

TEST_CASE("config errors name the offending key or line") {
    auto key_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.key;
        }
        return std::string("<none>");
    };
    CHECK(key_of("bandlimit = 4\nT = 1\n") == "n");
    CHECK(key_of(std::string(kMinimal) + "this line is wrong\n") == "line 4");
    CHECK(key_of(std::string(kMinimal) + "bandlimit = 5\n") == "bandlimit");
    CHECK(key_of(std::string(kMinimal) + "colour = red\n") == "colour");
    CHECK(key_of(std::string(kMinimal) + "p = two\n") == "p");
    CHECK(key_of(std::string(kMinimal) + "theta = 1, 2\n") == "theta");
    CHECK(key_of(std::string(kMinimal) + "sign = 3\n") == "sign");
    CHECK(key_of(std::string(kMinimal) + "profile = fuzzy\n") == "profile");
    CHECK(key_of("bandlimit = 4\nT = 1\nn = 1\n") == "n");
    CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), UsageError);
}

TEST_CASE("config round trip") {
    RunConfig c = parse_config(kMinimal);
    c.metric.theta = {1.0, 0.1 + 0.2, std::sqrt(5.0)};
    c.p = 7.0 / 3.0;
    c.p_set = true;
    c.amplitude = 1e-3 / 3.0;
    const RunConfig back = parse_config(format_config(c));
    CHECK(back.metric.theta == c.metric.theta);
    CHECK(back.p == c.p);
    CHECK(back.p_set);
    CHECK_FALSE(back.seed_set);
    CHECK(back.amplitude == c.amplitude);
    CHECK(format_config(back) == format_config(c));
    const fs::path d = scratch("cfg");
    save_config(c, (d / "run.cfg").string());
    CHECK(format_config(load_config((d / "run.cfg").string())) == format_config(c));
}

TEST_CASE("shortest double formatting round-trips (property)") {
    Rng rng(4);
    for (int k = 0; k < 1000; ++k) {
        const double x = rng.normal() * std::pow(10.0, rng.uniform_int(-280, 280));
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
}

TEST_CASE("field files round-trip bit-exactly") {
    Rng rng(12);
    TorusMetric m = generic_metric();
    m.theta[1] = 0.7;
    const SpectralField f = random_field(m, 3, rng, Support::everything(), 1.0);
    const SpectralField g = field_from_json(field_to_json(f));
    CHECK(g.bandlimit() == 3);
    CHECK(g.metric() == f.metric());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
    const fs::path d = scratch("field");
    save_field(f, (d / "u.field.json").string());
    const SpectralField h = load_field((d / "u.field.json").string());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(h[i] == f[i]);
    CHECK_THROWS_AS(field_from_json("{\"bandlimit\": 1}"), UsageError);
    CHECK_THROWS_AS(field_from_json("not json"), UsageError);
}

TEST_CASE("reports are deterministic and summaries merge every row") {
    RunConfig cfg = parse_config(kMinimal);
    HarnessEnv env = make_env(cfg);
    EstimateSpec s;
    s.name = "toy_io";
    s.family = "toy";
    s.dyadic_range = {1, 2, 4};
    s.bandlimit_for = [](int N, int) { return N; };
    s.trials = 3;
    s.measure = [](TrialContext& c) { return Measurement{c.rng.uniform() * c.N, 1.0}; };
    const ExperimentReport r = run_estimate(s, env);
    CHECK(report_json(r, cfg) == report_json(run_estimate(s, env), cfg));
    const std::string csv = report_csv(r);
    CHECK(csv.rfind("preset,sampler,N,N2,trial,lhs,rhs,ratio,ok\n", 0) == 0);

    const fs::path d = scratch("reports");
    write_report(r, cfg, d.string());
    EstimateSpec s2 = s;
    s2.name = "toy_io_2";
    s2.trials = 2;
    write_report(run_estimate(s2, env), cfg, d.string());
    CHECK(fs::exists(d / "toy_io.json"));
    const std::size_t rows = summarize_reports(d.string(), (d / "summary.csv").string());
    CHECK(rows == 3 * 3 + 3 * 2);
    // Re-summarizing ignores the previous summary.
    CHECK(summarize_reports(d.string(), (d / "summary.csv").string()) == rows);
    CHECK_THROWS_AS(summarize_reports((d / "missing").string(), (d / "x.csv").string()), UsageError);
}
