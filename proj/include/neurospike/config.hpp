#pragma once

#include "neurospike/scenario.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nspike {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario file grammar (line oriented, `#` starts a comment):
///
///     key = value                 scalar settings, before any section
///     [edges]                     one `sender receiver` pair per line, 1-based
///     [agents]                    one line per agent, in agent order:
///                                   sign c=<target>
///                                   harmonic a1=<v> a2=<v>
///                                   vdp nu=<v>
///                                   linear A=<r1c1>,<r1c2>;<r2c1>,<r2c2> b=<v>,<v>
///     [initial_states]            one line per agent, n values
///     [initial_potentials]        optional, one line per agent, 2n values
///                                 ordered (positive, negative) per coordinate
///
/// Scalar keys: name, nodes, directed, k, alpha, delta, mu, dt, t_end,
/// coupling_start, sample_period, zeno_guard, seed. Giving `delta` pins the
/// threshold and k is derived from it; otherwise delta = alpha / k.
/// Missing initial states default to the target for `sign` agents and 0
/// otherwise; missing potentials default to 0; sample_period defaults to dt.
Scenario parse_scenario_text(std::string_view text, const std::string& origin = "<string>");

/// Reads a file, or a bundled scenario when `path` names one (with or
/// without the .cfg suffix) and no such file exists.
Scenario parse_scenario(const std::string& path);

/// Canonical text form; parse_scenario_text(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

std::uint64_t scenario_digest(const Scenario& s);

/// Keys accepted by apply_override.
const std::vector<std::string>& override_keys();

/// Applies one `key=value` override and re-resolves the gain relation.
/// Setting k unpins delta; setting delta pins it. Throws ConfigError for an
/// unknown key or an unparsable value. Call validate() after the last one.
void apply_override(Scenario& s, const std::string& assignment);

struct BundledScenario {
    std::string name;
    std::string description;
    std::string text;
};

const std::vector<BundledScenario>& bundled_scenarios();

}  // namespace nspike
