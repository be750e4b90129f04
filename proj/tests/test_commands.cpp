#include "neurospike/commands.hpp"

#include "neurospike/config.hpp"
#include "neurospike/report.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

using namespace nspike;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("neurospike-test-" + tag);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    return line;
}

RunConfig short_median(const fs::path& out) {
    RunConfig cfg;
    cfg.scenario = "median5";
    cfg.out_dir = out;
    cfg.overrides = {"t_end=0.5"};
    return cfg;
}

}  // namespace

TEST_CASE("mode names", "[cli]") {
    for (Mode m : {Mode::neurospike, Mode::continuous, Mode::blended, Mode::all}) CHECK(parse_mode(mode_name(m)) == m);
    CHECK_THROWS_AS(parse_mode("spiky"), std::invalid_argument);
}

TEST_CASE("run writes every artifact", "[cli]") {
    const fs::path out = fresh_dir("all");
    RunConfig cfg = short_median(out);
    cfg.mode = Mode::all;
    std::ostringstream log;
    const CommandOutcome res = run_command(cfg, log);
    CHECK(res.exit_code == 0);
    for (const char* tag : {"neurospike", "continuous", "blended"}) {
        CHECK(first_line(out / (std::string(tag) + "_states.csv")) == "t,agent,dim,value");
        CHECK(fs::exists(out / (std::string(tag) + "_states.svg")));
    }
    CHECK(first_line(out / "neurospike_spikes.csv") == "t,agent,dim,sign");
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary["pass"] == true);
    CHECK(summary["scenario"]["t_end"] == 0.5);
    CHECK(summary["neurospike"]["spikes"]["total_spikes"].get<int>() > 0);
    CHECK(summary["neurospike"].contains("sync_vs_continuous"));
}

TEST_CASE("floats are written with 17 significant digits", "[cli]") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(3.0) == "3");
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 10000; ++i) {
        const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("phase portraits appear for planar agents", "[cli]") {
    const fs::path out = fresh_dir("phase");
    RunConfig cfg;
    cfg.scenario = "lienard4";
    cfg.out_dir = out;
    cfg.overrides = {"t_end=1", "coupling_start=0.5"};
    std::ostringstream log;
    CHECK(run_command(cfg, log).exit_code == 0);
    CHECK(slurp(out / "neurospike_phase.svg").find("<polyline") != std::string::npos);
}

TEST_CASE("sparser spikes with a larger amplitude", "[cli]") {
    std::ostringstream log;
    const fs::path a = fresh_dir("a15");
    const fs::path b = fresh_dir("a50");
    RunConfig cfg = short_median(a);
    run_command(cfg, log);
    cfg.out_dir = b;
    cfg.overrides.push_back("alpha=0.5");
    run_command(cfg, log);
    const auto sa = nlohmann::json::parse(slurp(a / "summary.json"));
    const auto sb = nlohmann::json::parse(slurp(b / "summary.json"));
    CHECK(sb["neurospike"]["spikes"]["total_spikes"].get<int>() <
          sa["neurospike"]["spikes"]["total_spikes"].get<int>());
}

TEST_CASE("identical runs give byte-identical traces", "[cli]") {
    std::ostringstream log;
    const fs::path a = fresh_dir("det-a");
    const fs::path b = fresh_dir("det-b");
    RunConfig cfg = short_median(a);
    run_command(cfg, log);
    cfg.out_dir = b;
    run_command(cfg, log);
    CHECK(slurp(a / "neurospike_states.csv") == slurp(b / "neurospike_states.csv"));
    CHECK(slurp(a / "neurospike_spikes.csv") == slurp(b / "neurospike_spikes.csv"));
}

TEST_CASE("unknown override fails before any output", "[cli]") {
    const fs::path out = fresh_dir("bad");
    RunConfig cfg = short_median(out);
    cfg.overrides.push_back("warp=9");
    std::ostringstream log;
    const CommandOutcome res = run_command(cfg, log);
    CHECK(res.exit_code == 2);
    CHECK(res.failures == std::vector<std::string>{"config"});
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("output directory from the environment", "[cli]") {
    const fs::path out = fresh_dir("env");
    RunConfig cfg = short_median(out);
    cfg.out_dir.reset();
    ::setenv(kOutEnv, out.c_str(), 1);
    CHECK(output_dir(cfg) == out);
    std::ostringstream log;
    CHECK(run_command(cfg, log).exit_code == 0);
    CHECK(fs::exists(out / "summary.json"));
    cfg.out_dir = out / "explicit";
    CHECK(output_dir(cfg) == out / "explicit");
    ::unsetenv(kOutEnv);
    cfg.out_dir.reset();
    CHECK(output_dir(cfg) == "out");
}

TEST_CASE("verify battery", "[cli]") {
    std::ostringstream log;
    RunConfig cfg = short_median(fresh_dir("verify"));
    const CommandOutcome ok = verify_command(cfg, log);
    CHECK(ok.exit_code == 0);
    CHECK(ok.record["checks"].size() == 5);

    cfg.overrides.push_back("mu=0.01");
    const CommandOutcome leaky = verify_command(cfg, log);
    CHECK(leaky.exit_code == 0);
    bool skipped = false;
    for (const auto& c : leaky.record["checks"]) {
        if (c["check"] == "amp_bound") skipped = c["status"] == "skipped";
    }
    CHECK(skipped);

    cfg.overrides = {"t_end=0.5", "zeno_guard=1"};
    const CommandOutcome tripped = verify_command(cfg, log);
    CHECK(tripped.exit_code == 1);
    CHECK(tripped.failures == std::vector<std::string>{"simulation"});
    CHECK(log.str().find("FAIL simulation") != std::string::npos);
}

TEST_CASE("scenario listing", "[cli]") {
    std::ostringstream out;
    CHECK(scenarios_command(out) == 0);
    CHECK(out.str().find("median5") != std::string::npos);
    CHECK(out.str().find("lienard4") != std::string::npos);
}
