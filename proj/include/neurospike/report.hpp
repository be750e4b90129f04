#pragma once

#include "neurospike/analysis.hpp"
#include "neurospike/simulator.hpp"

#include <json.hpp>

#include <filesystem>
#include <limits>
#include <string>

namespace nspike {

/// %.17g, which round-trips every double.
std::string format_double(double v);

/// `t,agent,dim,value` rows, one per sample and coordinate; agents and
/// dimensions are 1-based.
std::string states_csv(const Trace& trace);

/// `t,agent,dim,sign` rows in firing order.
std::string spikes_csv(const Trace& trace);

void write_text(const std::filesystem::path& path, const std::string& text);

nlohmann::json to_json(const SpikeStats& stats);
nlohmann::json to_json(const SyncReport& report);
nlohmann::json to_json(const AmpBoundReport& report);
nlohmann::json to_json(const DwellReport& report);
nlohmann::json to_json(const LemmaCheck& check);

struct PlotOptions {
    std::string title;
    double marker = std::numeric_limits<double>::quiet_NaN();  // vertical line, e.g. coupling start
    bool raster = true;
};

/// One panel per state dimension, plus a spike raster underneath when the
/// trace carries spikes.
std::string state_plot_svg(const Trace& trace, const PlotOptions& options);

/// x₁ against x₂ for every agent (n = 2 only). Samples before `options.marker`
/// are drawn faded; `reference`, when given, is overlaid dashed.
std::string phase_plot_svg(const Trace& trace, const Trace* reference, const PlotOptions& options);

}  // namespace nspike
