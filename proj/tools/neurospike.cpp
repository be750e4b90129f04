#include "neurospike/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

void add_run_options(CLI::App& cmd, nspike::RunConfig& cfg, std::string& mode, std::string& out) {
    cmd.add_option("scenario", cfg.scenario, "Scenario file or bundled name")->required();
    cmd.add_option("--mode", mode, "neurospike, continuous, blended or all")
        ->check(CLI::IsMember({"neurospike", "continuous", "blended", "all"}));
    cmd.add_option("--set", cfg.overrides, "Override a scenario key, e.g. --set alpha=0.5 (repeatable)")
        ->allow_extra_args(false);
    cmd.add_option("--out", out, "Output directory (default: $NEUROSPIKE_OUT, then ./out)");
    cmd.add_option("--seed", cfg.seed, "Seed for randomized checks");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spike-coupled multi-agent synchronization simulator"};
    app.require_subcommand(1);

    nspike::RunConfig cfg;
    std::string mode = "neurospike";
    std::string out;

    CLI::App* run = app.add_subcommand("run", "Simulate a scenario and write traces, plots and a summary");
    add_run_options(*run, cfg, mode, out);
    CLI::App* verify = app.add_subcommand("verify", "Run the property battery on a scenario");
    add_run_options(*verify, cfg, mode, out);
    CLI::App* list = app.add_subcommand("scenarios", "List bundled scenarios");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        return nspike::scenarios_command(std::cout);
    }
    cfg.mode = nspike::parse_mode(mode);
    if (!out.empty()) {
        cfg.out_dir = out;
    }
    try {
        const auto outcome = run->parsed() ? nspike::run_command(cfg, std::cout) : nspike::verify_command(cfg, std::cout);
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
