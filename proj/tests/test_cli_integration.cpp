// End-to-end checks of the command-line tool; argv[1] is the binary.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "torus_nls/io.hpp"
#include "torus_nls/sampling.hpp"

using namespace tnls;
namespace fs = std::filesystem;

namespace {

std::string g_tool;
fs::path g_dir;

struct Run {
    int code;
    std::string out;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

Run run(const std::string& args) {
    const fs::path log = g_dir / "stdout.txt";
    const std::string cmd = "env -u TORUS_NLS_SEED " + quote(g_tool) + " " + args + " > " + quote(log.string()) +
                            " 2> " + quote((g_dir / "stderr.txt").string());
    const int status = std::system(cmd.c_str());
    Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, read_text(log.string())};
    return r;
}

std::string path(const std::string& name) { return (g_dir / name).string(); }

void write_cfg(const std::string& name, const std::string& text) { write_text(path(name), text); }

}  // namespace

TEST_CASE("help and argument errors") {
    CHECK(run("--help").code == 0);
    CHECK(run("").code == 2);
    CHECK(run("verify").code == 2);
    CHECK(run("norms --field x --norm bogus").code == 2);
}

TEST_CASE("verify on defaults passes and writes a report") {
    const Run r = run("verify bony_convergence --threads 1 --out " + quote(path("rep")));
    CHECK(r.code == 0);
    CHECK(r.out.find("bony_convergence: pass") != std::string::npos);
    CHECK(fs::exists(path("rep/bony_convergence.json")));
    CHECK(fs::exists(path("rep/bony_convergence.csv")));
}

TEST_CASE("verify error paths") {
    CHECK(run("verify no_such_preset --threads 1").code == 2);
    write_cfg("bad.cfg", "bandlimit = 4\nT = 0.5\nthis is not a setting\nn = 4\n");
    CHECK(run("verify bony_convergence --threads 1 --config " + quote(path("bad.cfg"))).code == 2);
    write_cfg("missing.cfg", "bandlimit = 4\nT = 0.5\n");
    CHECK(run("verify bony_convergence --threads 1 --config " + quote(path("missing.cfg"))).code == 2);
    write_cfg("huge.cfg", "bandlimit = 20\nT = 0.5\nn = 4\n");
    CHECK(run("verify bony_convergence --threads 1 --config " + quote(path("huge.cfg"))).code == 3);
    CHECK(run("solve --config " + quote(path("huge.cfg")) + " --out " + quote(path("s0"))).code == 3);
    write_cfg("p5.cfg", "bandlimit = 4\nT = 0.5\nn = 4\np = 5\n");
    CHECK(run("verify cubic_main --threads 1 --config " + quote(path("p5.cfg"))).code == 2);
    CHECK(run("verify --threads 1 --trials 0 bony_convergence").code == 2);
}

TEST_CASE("norms of a stored zero field") {
    save_field(SpectralField(generic_metric(), 2), path("zero.field.json"));
    for (const char* n : {"hs", "lp", "y", "v2"}) {
        const Run r = run(std::string("norms --norm ") + n + " --field " + quote(path("zero.field.json")));
        CHECK(r.code == 0);
        CHECK(r.out == "0\n");
    }
    CHECK(run("norms --norm hs --field " + quote(path("absent.field.json"))).code == 2);
    CHECK(run("norms --norm lp --q 0.5 --field " + quote(path("zero.field.json"))).code == 2);
}

TEST_CASE("field generation, free flow and norms round trip") {
    CHECK(run("field shell --bandlimit 4 --N 4 --amplitude 2 --s 0.5 --seed 3 --out " + quote(path("f.field.json")))
              .code == 0);
    const SpectralField f = load_field(path("f.field.json"));
    CHECK(sobolev_norm(f, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
    const Run hs = run("norms --norm hs --s 0.5 --field " + quote(path("f.field.json")));
    CHECK(hs.code == 0);
    CHECK(std::stod(hs.out) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(run("field free-flow --in " + quote(path("f.field.json")) + " --t 0.3 --out " + quote(path("g.field.json")))
              .code == 0);
    CHECK(load_field(path("g.field.json")).l2_norm() == doctest::Approx(f.l2_norm()).epsilon(1e-13));
    // Same seed, same bytes.
    CHECK(run("field random --bandlimit 2 --seed 5 --out " + quote(path("a.field.json"))).code == 0);
    CHECK(run("field random --bandlimit 2 --seed 5 --out " + quote(path("b.field.json"))).code == 0);
    CHECK(read_text(path("a.field.json")) == read_text(path("b.field.json")));
    CHECK(run("field shell --bandlimit 2 --N 8 --out " + quote(path("c.field.json"))).code == 2);
}

TEST_CASE("solve writes its artifacts") {
    write_cfg("solve.cfg", "bandlimit = 3\nT = 0.05\nn = 6\np = 2\namplitude = 0.01\n");
    const Run r = run("solve --config " + quote(path("solve.cfg")) + " --seed 2 --out " + quote(path("sol")));
    CHECK(r.code == 0);
    CHECK(fs::exists(path("sol/diagnostics.json")));
    CHECK(fs::exists(path("sol/u0.field.json")));
    CHECK(fs::exists(path("sol/frames/frame_0005.field.json")));
    CHECK(run("solve --method splitstep --config " + quote(path("solve.cfg")) + " --out " + quote(path("sol2"))).code ==
          0);
    write_cfg("big.cfg", "bandlimit = 2\nT = 1\nn = 4\np = 2\namplitude = 50\nmax_iter = 3\n");
    CHECK(run("solve --config " + quote(path("big.cfg")) + " --out " + quote(path("sol3"))).code == 3);
    CHECK(fs::exists(path("sol3/diagnostics.json")));
}

TEST_CASE("report summarize merges report CSVs") {
    CHECK(run("verify embedding_checks --threads 1 --out " + quote(path("rep"))).code == 0);
    const Run r = run("report summarize " + quote(path("rep")));
    CHECK(r.code == 0);
    CHECK(r.out.find("rows ->") != std::string::npos);
    CHECK(fs::exists(path("rep/summary.csv")));
    CHECK(run("report summarize " + quote(path("nowhere"))).code == 2);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <torus-nls binary> [doctest options]\n", argv[0]);
        return 2;
    }
    g_tool = fs::absolute(argv[1]).string();
    g_dir = fs::temp_directory_path() / ("torus_nls_cli_" + std::to_string(::getpid()));
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    const int rc = ctx.run();
    fs::remove_all(g_dir);
    return rc;
}
