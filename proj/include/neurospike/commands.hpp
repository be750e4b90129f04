#pragma once

#include "neurospike/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace nspike {

enum class Mode { neurospike, continuous, blended, all };

/// Throws std::invalid_argument for anything but the four mode names.
Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

/// Environment variable that supplies the output directory when --out is absent.
inline constexpr const char* kOutEnv = "NEUROSPIKE_OUT";

struct RunConfig {
    std::string scenario;                   // path or bundled name
    std::optional<std::filesystem::path> out_dir;
    Mode mode = Mode::neurospike;
    std::vector<std::string> overrides;     // key=value, applied in order
    std::optional<std::uint64_t> seed;
};

/// --out, else $NEUROSPIKE_OUT, else ./out.
std::filesystem::path output_dir(const RunConfig& cfg);

/// Parses, applies every override and the seed, then validates. Any error
/// surfaces before a single step is integrated.
Scenario load_scenario(const RunConfig& cfg);

struct CommandOutcome {
    int exit_code = 0;
    nlohmann::json record;              // what went to summary.json / verify.json
    std::vector<std::string> failures;  // failing check names, also in `record`
};

/// Runs the selected solver(s), writes <mode>_states.csv, neurospike_spikes.csv,
/// SVG plots and summary.json. Exit 0 iff every enabled check passes, 1 on a
/// failed check, 2 on a configuration error.
CommandOutcome run_command(const RunConfig& cfg, std::ostream& log);

/// Property battery on one scenario: amplification bound (skipped when
/// μ != 0), dwell floor, determinism double run, bounding-lemma sampler.
/// Writes verify.json. Same exit code convention as run_command.
CommandOutcome verify_command(const RunConfig& cfg, std::ostream& log);

/// Lists the bundled scenarios; always 0.
int scenarios_command(std::ostream& out);

}  // namespace nspike
