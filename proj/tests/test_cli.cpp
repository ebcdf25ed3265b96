#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "fgl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = fgl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("fgl_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("ode command reports ln 2") {
    const auto dir = scratch("ode");
    const auto r = invoke({"ode", "--out-dir", dir.string(), "--ode.f0", "2"});
    REQUIRE(r.code == fgl::cli::kExitOk);
    const auto summary = read_json(dir / "ode_summary.json");
    CHECK(summary["blowup_time"].get<double>() == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(summary["command"] == "ode");
    CHECK(fs::exists(dir / "ode_trajectory.csv"));
    CHECK(r.out.find("ode:") == 0);
}

TEST_CASE("simulate with constant data") {
    const auto dir = scratch("simulate");
    const auto r = invoke({"simulate", "--out-dir", dir.string(), "--initial.profile", "constant",
                           "--initial.amplitude=2", "--grid.points", "64", "--evolution.p", "2"});
    REQUIRE(r.code == fgl::cli::kExitOk);
    const auto summary = read_json(dir / "simulate_summary.json");
    CHECK(summary["blew_up"] == true);
    CHECK(summary["t_detected"].get<double>() == doctest::Approx(0.5).epsilon(1e-3));

    const auto csv = slurp(dir / "simulate_timeseries.csv");
    CHECK(csv.rfind("t,dt,mass,h1,lp1,sup,Q_s1_R1,Q_s0.5_R1\n", 0) == 0);

    const auto manifest = read_json(dir / "simulate_manifest.json");
    for (const auto& name : manifest["outputs"]) CHECK(fs::exists(dir / name.get<std::string>()));
    CHECK(manifest["config"]["initial.amplitude"] == "2");
    CHECK(manifest["config"].contains("evolution.theta"));
    CHECK(manifest.contains("seed"));

    const auto plots = read_json(dir / "simulate_plots.json");
    for (const auto& c : plots["curves"]) CHECK(fs::exists(dir / c["file"].get<std::string>()));
}

TEST_CASE("configuration errors exit with 1") {
    auto r = invoke({"simulate", "--config", "/nonexistent/dir/run.ini"});
    CHECK(r.code == fgl::cli::kExitUsage);
    CHECK(r.err.find("/nonexistent/dir/run.ini") != std::string::npos);

    const auto dir = scratch("errors");
    r = invoke({"simulate", "--out-dir", dir.string(), "--evolution.tmax", "3"});
    CHECK(r.code == fgl::cli::kExitUsage);
    CHECK(r.err.find("evolution.tmax") != std::string::npos);

    r = invoke({"launch"});
    CHECK(r.code == fgl::cli::kExitUsage);
    r = invoke({"simulate", "--out-dir", dir.string(), "--evolution.theta", "1.5"});
    CHECK(r.code == fgl::cli::kExitUsage);
    r = invoke({"simulate", "--out-dir", dir.string(), "--evolution.p", "two"});
    CHECK(r.code == fgl::cli::kExitUsage);
}

TEST_CASE("refusal and numerical failure exit codes") {
    const auto dir = scratch("codes");
    auto r = invoke({"threshold", "--out-dir", dir.string(), "--evolution.p", "3", "--initial.amplitude", "0.5"});
    CHECK(r.code == fgl::cli::kExitUsage);
    CHECK(r.err.find("supercritical") != std::string::npos);

    r = invoke({"commutator", "--out-dir", dir.string(), "--commutator.scales", "1", "--commutator.method", "power",
                "--commutator.max_iterations", "3", "--run.check_stability", "false"});
    CHECK(r.code == fgl::cli::kExitNumerical);
}

TEST_CASE("config file, overrides and output directory precedence") {
    const auto dir = scratch("config");
    const auto ini = dir / "run.ini";
    {
        std::ofstream f(ini);
        f << "# homogeneous run\n[initial]\nprofile = constant\namplitude = 4\n\n[grid]\npoints = 32\n"
          << "[run]\nout_dir = " << (dir / "from_config").string() << "\n";
    }
    auto r = invoke({"simulate", "--config", ini.string()});
    REQUIRE(r.code == 0);
    CHECK(read_json(dir / "from_config" / "simulate_summary.json")["t_detected"].get<double>() ==
          doctest::Approx(0.25).epsilon(1e-3));

    ::setenv(fgl::cli::kOutDirVariable, (dir / "from_env").string().c_str(), 1);
    r = invoke({"simulate", "--config", ini.string(), "--initial.amplitude", "8"});
    REQUIRE(r.code == 0);
    CHECK(read_json(dir / "from_env" / "simulate_summary.json")["t_detected"].get<double>() ==
          doctest::Approx(0.125).epsilon(1e-3));

    r = invoke({"simulate", "--config", ini.string(), "--out-dir", (dir / "from_flag").string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "from_flag" / "simulate_summary.json"));
    ::unsetenv(fgl::cli::kOutDirVariable);
}

TEST_CASE("config parser") {
    using fgl::cli::Config;
    auto c = Config::parse("[a]\nx = 1.5 ; note\ny = 1, 2,3\nflag = true\n");
    CHECK(c.real("a.x", 0) == 1.5);
    CHECK(c.reals("a.y", {}) == std::vector<double>{1, 2, 3});
    CHECK(c.flag("a.flag", false));
    CHECK(c.integer("a.missing", 7) == 7);
    CHECK(c.resolved().at("a.missing") == "7");
    CHECK_NOTHROW(c.reject_unknown());

    auto extra = Config::parse("[a]\nx = 1\nz = 2\n");
    (void)extra.real("a.x", 0);
    CHECK_THROWS_AS(extra.reject_unknown(), fgl::cli::ConfigError);
    CHECK_THROWS_AS(Config::parse("x = 1\n"), fgl::cli::ConfigError);
    CHECK_THROWS_AS(Config::parse("[a]\nnonsense\n"), fgl::cli::ConfigError);
    auto bad = Config::parse("[a]\nx = 1.5q\n");
    CHECK_THROWS_AS(bad.real("a.x", 0), fgl::cli::ConfigError);
    CHECK(fgl::cli::format_real(0.1) == "0.1");
}

TEST_CASE("outputs are byte-identical across reruns") {
    const auto dir = scratch("determinism");
    const std::vector<std::string> args{"sweep", "--grid.points", "256", "--sweep.amplitudes", "8,16,32",
                                        "--workers", "3", "--out-dir", dir.string()};
    REQUIRE(invoke(args).code == 0);
    std::map<std::string, std::string> first;
    for (const auto& e : fs::directory_iterator(dir)) first[e.path().filename().string()] = slurp(e.path());
    REQUIRE(invoke(args).code == 0);
    for (const auto& [name, body] : first) {
        const auto again = slurp(dir / name);
        if (name == "sweep_manifest.json") {
            auto x = json::parse(body), y = json::parse(again);
            x.erase("timestamps");
            y.erase("timestamps");
            CHECK(x == y);
        } else {
            CHECK_MESSAGE(body == again, name);
        }
    }
}
