#include <doctest.h>
#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sandlab/toolkit_io.hpp"

using namespace sandlab;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli_main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& rel) { return (fs::path(SANDLAB_TEST_DATA) / rel).string(); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "sandlab_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("distance") {
    const auto r = run({"distance", "--metric", "ground", data("configs/zero.cfg"), data("configs/flip4.cfg")});
    CHECK(r.code == 0);
    CHECK(r.out == "2^-4\n");
    CHECK(run({"distance", data("configs/zero.cfg"), data("configs/zero.cfg")}).out == "0\n");
    CHECK(run({"distance", "--metric", "zeta", data("configs/zero.cfg"), data("configs/spike2.cfg")}).out == "2^-1\n");
    CHECK(run({"distance", "--metric", "cosine", data("configs/zero.cfg"), data("configs/zero.cfg")}).code == 2);
}

TEST_CASE("simulate and render") {
    const auto traj = scratch("spike.jsonl");
    const auto r = run({"simulate", "--rule", data("rules/collapse.sarule"), "--config", data("configs/spike2.cfg"),
                        "--steps", "2", "--out", traj.string()});
    CHECK(r.code == 0);
    CHECK(slurp(traj) == slurp(data("golden/collapse_spike2.jsonl")));

    const auto ascii = run({"render", "--traj", traj.string(), "--format", "ascii"});
    CHECK(ascii.code == 0);
    CHECK(ascii.out == slurp(data("golden/collapse_spike2.txt")));
    const auto svg = run({"render", "--traj", traj.string(), "--format", "svg"});
    CHECK(svg.out == slurp(data("golden/collapse_spike2.svg")));

    const auto again = run({"simulate", "--rule", data("rules/collapse.sarule"), "--config", data("configs/spike2.cfg"),
                            "--steps", "2"});
    CHECK(again.out == slurp(traj));
}

TEST_CASE("encode") {
    const auto r = run({"encode", "--config", data("configs/spike2.cfg"), "--hlo", "-2", "--hhi", "2", "--vlo", "-1",
                        "--vhi", "3"});
    CHECK(r.code == 0);
    CHECK(r.out == "00000\n00100\n00100\n11111\n11111\n");
}

TEST_CASE("sa2ca and check-sa") {
    const auto ca = scratch("bridge.carule");
    CHECK(run({"sa2ca", "--rule", data("rules/collapse.sarule"), "--out", ca.string()}).code == 0);
    CHECK(slurp(ca) == slurp(data("ca/bridge_collapse.carule")));

    const auto ext = scratch("extracted.sarule");
    const auto r = run({"check-sa", "--ca", ca.string(), "--extract", ext.string()});
    CHECK(r.code == 0);
    CHECK(r.out == "invariance windows: 16807\ncolumn windows: 2592\nIS_SA\n");
    CHECK(slurp(ext) == slurp(data("golden/extracted_collapse.sarule")));

    const auto bad = run({"check-sa", "--ca", data("ca/constant_one.carule")});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("NOT_SA\nwitness: COLUMN_PRESERVATION index 0") != std::string::npos);
}

TEST_CASE("outputs do not depend on the worker count") {
    const int saved = omp_get_max_threads();
    std::vector<std::string> outs;
    for (int threads : {1, 4}) {
        omp_set_num_threads(threads);
        const auto ext = scratch("ext_" + std::to_string(threads) + ".sarule");
        const auto r = run({"check-sa", "--ca", data("ca/bridge_collapse.carule"), "--extract", ext.string()});
        outs.push_back(r.out + slurp(ext));
        outs.push_back(run({"check-sa", "--ca", data("ca/constant_one.carule")}).out);
        outs.push_back(run({"period-search", "--rule", data("rules/collapse.sarule"), "--max-sum", "3"}).out);
    }
    omp_set_num_threads(saved);
    CHECK(outs[0] == outs[3]);
    CHECK(outs[1] == outs[4]);
    CHECK(outs[2] == outs[5]);
}

TEST_CASE("reduce-ca") {
    const auto r = run({"reduce-ca", "--ca", data("ca/min2.carule")});
    CHECK(r.code == 0);
    CHECK(r.out == slurp(data("rules/reduce_min2.sarule")));
    const auto shift = run({"reduce-ca", "--ca", data("ca/shift2.carule")});
    CHECK(shift.code == 1);
    CHECK(shift.err.find("not spreading") != std::string::npos);
}

TEST_CASE("flatten and period-search") {
    const auto f = run({"flatten", "--rule", data("rules/collapse.sarule"), "--config", data("configs/spike2.cfg")});
    CHECK(f.code == 0);
    CHECK(f.out == "CONVERGED limit 0 steps 2\n");
    const auto g = run({"flatten", "--rule", data("rules/collapse.sarule"), "--config", data("configs/figure_low.cfg")});
    CHECK(g.code == 0);
    CHECK(g.out.rfind("CONVERGED limit -2", 0) == 0);
    const auto id = run({"flatten", "--rule", data("rules/identity.sarule"), "--config", data("configs/spike2.cfg"),
                         "--budget", "20"});
    CHECK(id.code == 1);
    CHECK(id.out.rfind("NOT_CONVERGED", 0) == 0);
    CHECK(run({"flatten", "--rule", data("rules/collapse.sarule"), "--config", data("configs/infinities.cfg")}).code == 1);

    CHECK(run({"period-search", "--rule", data("rules/identity.sarule")}).out == "PERIODIC n 0 p 1 drift 0\n");
    CHECK(run({"period-search", "--rule", data("rules/raise.sarule")}).out == "PERIODIC n 0 p 1 drift 1\n");
    const auto n = run({"period-search", "--rule", data("rules/collapse.sarule"), "--max-sum", "3"});
    CHECK(n.code == 1);
    CHECK(n.out.rfind("REFUTED a 0 b 3\nwitness ", 0) == 0);
}

TEST_CASE("usage and parse errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"simulate", "--rule", data("rules/collapse.sarule")}).code == 2);
    CHECK(run({"--help"}).code == 0);

    const auto bad_rule = scratch("bad.sarule");
    std::ofstream(bad_rule) << "sarule v1\ndim 1\nradius 1\ncase R[2] < 0 => -1\ndefault => 0\n";
    const auto r = run({"flatten", "--rule", bad_rule.string(), "--config", data("configs/spike2.cfg")});
    CHECK(r.code == 2);
    CHECK(r.err == bad_rule.string() + ":4:8: offset 2 out of range [-1, 1]\n");

    CHECK(run({"simulate", "--rule", "/nonexistent/x.sarule", "--config", data("configs/spike2.cfg")}).code == 2);
}

TEST_CASE("the enumeration budget comes from the environment") {
    ::setenv("SANDLAB_BUDGET", "1000", 1);
    const auto r = run({"check-sa", "--ca", data("ca/bridge_collapse.carule")});
    ::unsetenv("SANDLAB_BUDGET");
    CHECK(r.code == 1);
    CHECK(r.err.find("budget") != std::string::npos);
    CHECK(run({"check-sa", "--ca", data("ca/bridge_collapse.carule")}).code == 0);
}
