#include "torus_nls/io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "torus_nls/errors.hpp"

namespace tnls {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    T out{};
    const char* end = v.data() + v.size();
    auto res = std::from_chars(v.data(), end, out);
    if (res.ec != std::errc() || res.ptr != end) throw ConfigError(key, "cannot parse '" + v + "' as a number");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(key, "expected true or false, got '" + v + "'");
}

std::array<double, 3> parse_triple(const std::string& key, std::string v) {
    std::replace(v.begin(), v.end(), ',', ' ');
    std::istringstream ss(v);
    std::array<double, 3> out{};
    std::string tok;
    int k = 0;
    while (ss >> tok) {
        if (k == 3) throw ConfigError(key, "expected three numbers");
        out[k++] = parse_number<double>(key, tok);
    }
    if (k != 3) throw ConfigError(key, "expected three numbers");
    return out;
}

void set_key(RunConfig& c, const std::string& key, const std::string& v) {
    if (key == "theta") c.metric.theta = parse_triple(key, v);
    else if (key == "laplace_scale") c.metric.laplace_scale = parse_number<double>(key, v);
    else if (key == "euclidean_bracket") c.metric.euclidean_bracket = parse_bool(key, v);
    else if (key == "p") c.p = parse_number<double>(key, v), c.p_set = true;
    else if (key == "sign") c.sign = parse_number<int>(key, v), c.sign_set = true;
    else if (key == "bandlimit") c.bandlimit = parse_number<int>(key, v);
    else if (key == "T") c.grid.T = parse_number<double>(key, v);
    else if (key == "n") c.grid.n = parse_number<int>(key, v);
    else if (key == "oversample") c.oversample = parse_number<int>(key, v);
    else if (key == "profile") {
        try {
            c.profile = parse_profile(v);
        } catch (const UsageError&) {
            throw ConfigError(key, "expected smooth or sharp, got '" + v + "'");
        }
    } else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, v), c.seed_set = true;
    else if (key == "output_dir") c.output_dir = v;
    else if (key == "amplitude") c.amplitude = parse_number<double>(key, v);
    else if (key == "tol") c.tol = parse_number<double>(key, v);
    else if (key == "max_iter") c.max_iter = parse_number<int>(key, v);
    else throw ConfigError(key, "unknown key");
}

void check_config(const RunConfig& c) {
    for (double t : c.metric.theta)
        if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("theta", "entries must be positive and finite");
    if (!(c.metric.laplace_scale > 0.0) || !std::isfinite(c.metric.laplace_scale))
        throw ConfigError("laplace_scale", "must be positive");
    if (!(c.p > 0.0) || !std::isfinite(c.p)) throw ConfigError("p", "must be positive");
    if (c.sign < -1 || c.sign > 1) throw ConfigError("sign", "must be -1, 0 or 1");
    if (c.bandlimit < 0) throw ConfigError("bandlimit", "must be non-negative");
    if (!(c.grid.T > 0.0) || !std::isfinite(c.grid.T)) throw ConfigError("T", "must be positive");
    if (c.grid.n < 2) throw ConfigError("n", "must be at least 2");
    if (c.oversample < 1) throw ConfigError("oversample", "must be at least 1");
    if (c.output_dir.empty()) throw ConfigError("output_dir", "must not be empty");
    if (!(c.amplitude >= 0.0)) throw ConfigError("amplitude", "must be non-negative");
    if (!(c.tol > 0.0)) throw ConfigError("tol", "must be positive");
    if (c.max_iter < 1) throw ConfigError("max_iter", "must be at least 1");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = "line " + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where, "missing key");
        if (value.empty()) throw ConfigError(key, where + ": missing value");
        if (!seen.insert(key).second) throw ConfigError(key, where + ": duplicate key");
        try {
            set_key(c, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(key, where + ": " + std::string(e.what()).substr(key.size() + 2));
        }
    }
    for (const char* req : {"bandlimit", "T", "n"})
        if (!seen.count(req)) throw ConfigError(req, "required key missing");
    check_config(c);
    return c;
}

RunConfig load_config(const std::string& path) { return parse_config(read_text(path)); }

std::string format_config(const RunConfig& c) {
    std::ostringstream o;
    const auto& th = c.metric.theta;
    o << "theta = " << format_double(th[0]) << ", " << format_double(th[1]) << ", " << format_double(th[2]) << "\n";
    o << "laplace_scale = " << format_double(c.metric.laplace_scale) << "\n";
    if (c.metric.euclidean_bracket) o << "euclidean_bracket = true\n";
    if (c.p_set) o << "p = " << format_double(c.p) << "\n";
    if (c.sign_set) o << "sign = " << c.sign << "\n";
    o << "bandlimit = " << c.bandlimit << "\n";
    o << "T = " << format_double(c.grid.T) << "\n";
    o << "n = " << c.grid.n << "\n";
    o << "oversample = " << c.oversample << "\n";
    o << "profile = " << profile_name(c.profile) << "\n";
    if (c.seed_set) o << "seed = " << c.seed << "\n";
    o << "output_dir = " << c.output_dir << "\n";
    o << "amplitude = " << format_double(c.amplitude) << "\n";
    o << "tol = " << format_double(c.tol) << "\n";
    o << "max_iter = " << c.max_iter << "\n";
    return o.str();
}

void save_config(const RunConfig& cfg, const std::string& path) { write_text(path, format_config(cfg)); }

HarnessEnv make_env(const RunConfig& c) {
    HarnessEnv e;
    e.metric = c.metric;
    e.bandlimit = c.bandlimit;
    e.grid = c.grid;
    e.oversample = c.oversample;
    e.profile = c.profile;
    return e;
}

namespace {

json metric_json(const TorusMetric& m) {
    json j{{"theta", m.theta}, {"laplace_scale", m.laplace_scale}};
    if (m.euclidean_bracket) j["euclidean_bracket"] = true;
    return j;
}

const json& require(const json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError(key, "missing");
    return j.at(key);
}

double number(const json& j, const std::string& key) {
    if (!j.is_number()) throw ConfigError(key, "expected a number");
    return j.get<double>();
}

}  // namespace

std::string field_to_json(const SpectralField& f) {
    json coeffs = json::array();
    for (const cplx& z : f.coeffs()) coeffs.push_back(json::array({z.real(), z.imag()}));
    json j{{"metric", metric_json(f.metric())}, {"bandlimit", f.bandlimit()}, {"coeffs", std::move(coeffs)}};
    return j.dump() + "\n";
}

SpectralField field_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed field JSON: ") + e.what());
    }
    const json& mj = require(j, "metric");
    TorusMetric m;
    const json& th = require(mj, "theta");
    if (!th.is_array() || th.size() != 3) throw ConfigError("theta", "expected three numbers");
    for (int k = 0; k < 3; ++k) m.theta[k] = number(th[k], "theta");
    m.laplace_scale = number(require(mj, "laplace_scale"), "laplace_scale");
    if (mj.contains("euclidean_bracket")) {
        if (!mj["euclidean_bracket"].is_boolean()) throw ConfigError("euclidean_bracket", "expected a boolean");
        m.euclidean_bracket = mj["euclidean_bracket"].get<bool>();
    }
    try {
        m.validate();
    } catch (const UsageError& e) {
        throw ConfigError("metric", e.what());
    }
    const json& bj = require(j, "bandlimit");
    if (!bj.is_number_integer() || bj.get<int>() < 0) throw ConfigError("bandlimit", "expected a non-negative integer");
    SpectralField f(m, bj.get<int>());
    const json& cj = require(j, "coeffs");
    if (!cj.is_array() || cj.size() != f.size())
        throw ConfigError("coeffs", "expected " + std::to_string(f.size()) + " [re, im] pairs");
    for (std::size_t i = 0; i < f.size(); ++i) {
        const json& z = cj[i];
        if (!z.is_array() || z.size() != 2) throw ConfigError("coeffs", "entry " + std::to_string(i) + " is not [re, im]");
        f[i] = cplx(number(z[0], "coeffs"), number(z[1], "coeffs"));
    }
    return f;
}

void save_field(const SpectralField& f, const std::string& path) { write_text(path, field_to_json(f)); }

SpectralField load_field(const std::string& path) { return field_from_json(read_text(path)); }

namespace {

json spec_json(const EstimateSpec& s) {
    json samplers = json::array();
    for (const auto& sp : s.samplers)
        samplers.push_back({{"kind", sampler_name(sp.kind)}, {"amplitude", sp.amplitude}, {"pieces", sp.pieces}});
    return json{{"name", s.name},
                {"family", s.family},
                {"description", s.description},
                {"lhs", s.lhs_name},
                {"rhs", s.rhs_name},
                {"p", s.p},
                {"sign", s.sign},
                {"predicted_exponent", s.predicted_exponent},
                {"dyadic_range", s.dyadic_range},
                {"secondary_range", s.secondary_range},
                {"samplers", samplers},
                {"trials", s.trials},
                {"seed", s.seed},
                {"slack", s.slack},
                {"ratio_cap", s.ratio_cap},
                {"fit_slope", s.fit_slope},
                {"shared_data", s.shared_data},
                {"time_steps", s.time_steps},
                {"sampled_sup", s.sampled_sup}};
}

json env_json(const HarnessEnv& e) {
    return json{{"metric", metric_json(e.metric)},
                {"bandlimit", e.bandlimit},
                {"grid", {{"T", e.grid.T}, {"n", e.grid.n}}},
                {"oversample", e.oversample},
                {"profile", profile_name(e.profile)},
                {"cutoff",
                 {{"smooth", "phi(r) = 1 for r <= 1, 0 for r >= 2, g(2-r)/(g(2-r)+g(r-1)) between, g(t) = exp(-1/t)"},
                  {"sharp", "phi(r) = 1 for r <= 1, else 0"},
                  {"dyadic", "psi_N = phi(|xi|/N) - phi(2|xi|/N), psi_1 = phi(|xi|)"}}},
                {"threads", e.threads},
                {"unsafe", e.unsafe},
                {"allow_large_T", e.allow_large_T}};
}

const char* const kCsvHeader[] = {"preset", "sampler", "N", "N2", "trial", "lhs", "rhs", "ratio", "ok"};

}  // namespace

std::string report_json(const ExperimentReport& r, const RunConfig& cfg) {
    json ratios = json::array();
    for (const auto& t : r.records) {
        json row{{"N", t.N}, {"trial", t.trial}, {"sampler", t.sampler}, {"lhs", t.lhs},
                 {"rhs", t.rhs}, {"ratio", t.ratio}, {"ok", t.ok}};
        if (!r.spec.secondary_range.empty()) row["N2"] = t.N2;
        if (!t.note.empty()) row["note"] = t.note;
        ratios.push_back(std::move(row));
    }
    json maxr = json::array();
    for (const auto& [N, v] : r.max_ratio) maxr.push_back({{"N", N}, {"value", v}});
    json env = env_json(r.env);
    env["seed"] = r.spec.seed;
    json j{{"preset", r.spec.name},
           {"spec", spec_json(r.spec)},
           {"ratios", std::move(ratios)},
           {"max_ratio", std::move(maxr)},
           {"slope", r.slope ? json{{"value", r.slope->slope}, {"intercept", r.slope->intercept},
                                    {"residual", r.slope->residual}}
                             : json(nullptr)},
           {"boundedness", {{"bottom_max", r.bottom_max}, {"top_max", r.top_max}, {"uniformity", r.uniformity}}},
           {"degenerate", r.degenerate},
           {"structural_ok", r.structural_ok},
           {"verdict", verdict_name(r.verdict)},
           {"verdict_label", verdict_label(r.verdict, r.spec)},
           {"environment", std::move(env)},
           {"config", format_config(cfg)}};
    return j.dump(2) + "\n";
}

std::string report_csv(const ExperimentReport& r) {
    std::ostringstream o;
    for (std::size_t k = 0; k < std::size(kCsvHeader); ++k) o << (k ? "," : "") << kCsvHeader[k];
    o << "\n";
    for (const auto& t : r.records)
        o << r.spec.name << "," << t.sampler << "," << t.N << "," << t.N2 << "," << t.trial << ","
          << format_double(t.lhs) << "," << format_double(t.rhs) << "," << format_double(t.ratio) << ","
          << (t.ok ? 1 : 0) << "\n";
    return o.str();
}

std::string write_report(const ExperimentReport& r, const RunConfig& cfg, const std::string& dir) {
    const fs::path base = fs::path(dir) / r.spec.name;
    const std::string jpath = base.string() + ".json";
    write_text(jpath, report_json(r, cfg));
    write_text(base.string() + ".csv", report_csv(r));
    return jpath;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::size_t summarize_reports(const std::string& dir, const std::string& out) {
    if (!fs::is_directory(dir)) throw UsageError("'" + dir + "' is not a directory");
    std::vector<fs::path> files;
    const fs::path outp = fs::absolute(out).lexically_normal();
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".csv" && fs::absolute(e.path()).lexically_normal() != outp)
            files.push_back(e.path());
    std::sort(files.begin(), files.end());

    std::ostringstream o;
    for (std::size_t k = 0; k < std::size(kCsvHeader); ++k) o << (k ? "," : "") << kCsvHeader[k];
    o << "\n";
    std::size_t rows = 0;
    for (const auto& f : files) {
        std::istringstream in(read_text(f.string()));
        std::string line;
        if (!std::getline(in, line)) continue;
        const auto header = split_csv(trim(line));
        std::map<std::string, std::size_t> col;
        for (std::size_t k = 0; k < header.size(); ++k) col[header[k]] = k;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty()) continue;
            const auto cells = split_csv(line);
            for (std::size_t k = 0; k < std::size(kCsvHeader); ++k) {
                const std::string name = kCsvHeader[k];
                std::string v;
                auto it = col.find(name);
                if (it != col.end() && it->second < cells.size()) v = cells[it->second];
                else if (name == "preset") v = f.stem().string();
                o << (k ? "," : "") << v;
            }
            o << "\n";
            ++rows;
        }
    }
    write_text(out, o.str());
    return rows;
}

}  // namespace tnls
