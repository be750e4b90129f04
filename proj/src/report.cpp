#include "neurospike/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nspike {

using nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string states_csv(const Trace& trace) {
    std::string out = "t,agent,dim,value\n";
    out.reserve(trace.states.size() * 48);
    for (std::size_t j = 0; j < trace.size(); ++j) {
        const std::string t = format_double(trace.times[j]);
        for (int i = 0; i < trace.n_agents; ++i) {
            for (int d = 0; d < trace.state_dim; ++d) {
                out += t;
                out += ',';
                out += std::to_string(i + 1);
                out += ',';
                out += std::to_string(d + 1);
                out += ',';
                out += format_double(trace.value(j, i, d));
                out += '\n';
            }
        }
    }
    return out;
}

std::string spikes_csv(const Trace& trace) {
    std::string out = "t,agent,dim,sign\n";
    out.reserve(trace.spikes.size() * 32);
    for (const SpikeEvent& e : trace.spikes) {
        out += format_double(e.time);
        out += ',';
        out += std::to_string(e.source + 1);
        out += ',';
        out += std::to_string(e.dimension + 1);
        out += ',';
        out += e.sign > 0 ? "1" : "-1";
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    f << text;
    if (!f) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

json to_json(const SpikeStats& stats) {
    return {{"total_spikes", stats.total_spikes},
            {"duration", stats.duration},
            {"per_agent_rate", stats.per_agent_rate},
            {"mean_rate", stats.mean_rate},
            {"payload_bits_per_s", stats.payload_rate},
            {"steady_window", {stats.steady.begin, stats.steady.end}},
            {"steady_rate", stats.steady_rate},
            {"predicted_rate", stats.predicted_rate}};
}

json to_json(const SyncReport& report) {
    return {{"window", {report.window.begin, report.window.end}},
            {"tail_sup", report.tail_sup},
            {"max_tail_sup", report.max_tail_sup()}};
}

json to_json(const AmpBoundReport& report) {
    json amps = json::array();
    for (const AmpBound& a : report.amps) {
        amps.push_back({{"agent", a.agent + 1},
                        {"dim", a.dim + 1},
                        {"max_abs_integral", a.max_abs_integral},
                        {"slack", a.slack},
                        {"pass", a.pass}});
    }
    return {{"bound", report.bound}, {"pass", report.pass}, {"amplifiers", amps}};
}

json to_json(const DwellReport& report) {
    json neurons = json::array();
    for (const DwellStat& s : report.neurons) {
        neurons.push_back({{"agent", s.agent + 1},
                           {"dim", s.dim + 1},
                           {"sign", s.sign},
                           {"min_gap", s.min_gap ? json(*s.min_gap) : json(nullptr)},
                           {"floor", std::isfinite(s.floor) ? json(s.floor) : json(nullptr)},
                           {"pass", s.pass}});
    }
    return {{"pass", report.pass}, {"neurons", neurons}};
}

json to_json(const LemmaCheck& check) {
    return {{"samples", check.samples},
            {"threshold", check.threshold},
            {"worst_margin", check.worst_margin},
            {"pass", check.pass}};
}

// -- SVG ---------------------------------------------------------------------

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr double kWidth = 800.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kPanel = 220.0;
constexpr std::size_t kMaxPoints = 4000;

struct Axis {
    double lo, hi, pix_lo, pix_hi;
    double operator()(double v) const {
        const double span = hi > lo ? hi - lo : 1.0;
        return pix_lo + (v - lo) / span * (pix_hi - pix_lo);
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

void frame(std::ostringstream& svg, const Axis& x, const Axis& y, const std::string& ylabel) {
    svg << "<rect x='" << num(x.pix_lo) << "' y='" << num(y.pix_hi) << "' width='" << num(x.pix_hi - x.pix_lo)
        << "' height='" << num(y.pix_lo - y.pix_hi) << "' fill='none' stroke='#444'/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double yv = y.lo + (y.hi - y.lo) * k / 4.0;
        svg << "<text x='" << num(x.pix_lo - 6) << "' y='" << num(y(yv) + 4)
            << "' font-size='10' text-anchor='end'>" << label(yv) << "</text>\n";
    }
    svg << "<text x='14' y='" << num((y.pix_lo + y.pix_hi) / 2) << "' font-size='12' transform='rotate(-90 14 "
        << num((y.pix_lo + y.pix_hi) / 2) << ")' text-anchor='middle'>" << escape(ylabel) << "</text>\n";
}

void time_ticks(std::ostringstream& svg, const Axis& x, double y_pix) {
    for (int k = 0; k <= 5; ++k) {
        const double tv = x.lo + (x.hi - x.lo) * k / 5.0;
        svg << "<text x='" << num(x(tv)) << "' y='" << num(y_pix + 14) << "' font-size='10' text-anchor='middle'>"
            << label(tv) << "</text>\n";
    }
}

void marker_line(std::ostringstream& svg, const Axis& x, double top, double bottom, double at) {
    if (std::isnan(at) || at <= x.lo || at >= x.hi) {
        return;
    }
    svg << "<line x1='" << num(x(at)) << "' y1='" << num(top) << "' x2='" << num(x(at)) << "' y2='" << num(bottom)
        << "' stroke='#888' stroke-dasharray='4 3'/>\n";
}

std::pair<double, double> padded(double lo, double hi) {
    if (!(hi > lo)) {
        return {lo - 1.0, hi + 1.0};
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

}  // namespace

std::string state_plot_svg(const Trace& trace, const PlotOptions& options) {
    if (trace.size() == 0) {
        throw std::invalid_argument("state_plot_svg: empty trace");
    }
    const int n = trace.state_dim;
    const bool raster = options.raster && !trace.spikes.empty();
    const double raster_h = raster ? 14.0 * 2 * trace.n_agents + 30.0 : 0.0;
    const double height = 40.0 + n * (kPanel + 30.0) + raster_h + 20.0;
    const std::size_t stride = std::max<std::size_t>(1, trace.size() / kMaxPoints);

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << num(height)
        << "' font-family='sans-serif'>\n<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << kWidth / 2 << "' y='22' font-size='14' text-anchor='middle'>" << escape(options.title)
        << "</text>\n";

    const Axis tx{trace.times.front(), trace.times.back(), kLeft, kWidth - kRight};
    double top = 40.0;
    for (int d = 0; d < n; ++d) {
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t j = 0; j < trace.size(); ++j) {
            for (int i = 0; i < trace.n_agents; ++i) {
                lo = std::min(lo, trace.value(j, i, d));
                hi = std::max(hi, trace.value(j, i, d));
            }
        }
        const auto [ylo, yhi] = padded(lo, hi);
        const Axis y{ylo, yhi, top + kPanel, top};
        frame(svg, tx, y, "x" + std::to_string(d + 1));
        marker_line(svg, tx, top, top + kPanel, options.marker);
        for (int i = 0; i < trace.n_agents; ++i) {
            svg << "<polyline fill='none' stroke-width='1.2' stroke='" << kPalette[i % kPalette.size()]
                << "' points='";
            for (std::size_t j = 0; j < trace.size(); j += stride) {
                svg << num(tx(trace.times[j])) << ',' << num(y(trace.value(j, i, d))) << ' ';
            }
            svg << num(tx(trace.times.back())) << ',' << num(y(trace.value(trace.size() - 1, i, d))) << "'/>\n";
        }
        time_ticks(svg, tx, top + kPanel);
        top += kPanel + 30.0;
    }

    if (raster) {
        // One row per neuron; ticks are merged per pixel column to keep the
        // file small on long runs.
        const double row = 14.0;
        const int rows = 2 * trace.n_agents;
        svg << "<text x='" << kLeft << "' y='" << num(top + 4) << "' font-size='11'>spikes (+ above, - below, per agent)</text>\n";
        top += 10.0;
        std::vector<std::set<int>> columns(rows);
        for (const SpikeEvent& e : trace.spikes) {
            const int r = 2 * e.source + (e.sign > 0 ? 0 : 1);
            columns[r].insert(static_cast<int>(std::lround(tx(e.time) * 2.0)));
        }
        for (int r = 0; r < rows; ++r) {
            const double y0 = top + r * row;
            const char* color = kPalette[(r / 2) % kPalette.size()];
            svg << "<path stroke='" << color << "' stroke-width='0.5' stroke-opacity='" << (r % 2 == 0 ? "1" : "0.5")
                << "' d='";
            for (int c : columns[r]) {
                svg << 'M' << num(c / 2.0) << ',' << num(y0 + 1) << 'v' << num(row - 2);
            }
            svg << "'/>\n";
        }
        svg << "<rect x='" << kLeft << "' y='" << num(top) << "' width='" << num(kWidth - kRight - kLeft)
            << "' height='" << num(rows * row) << "' fill='none' stroke='#444'/>\n";
        marker_line(svg, tx, top, top + rows * row, options.marker);
        time_ticks(svg, tx, top + rows * row);
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string phase_plot_svg(const Trace& trace, const Trace* reference, const PlotOptions& options) {
    if (trace.state_dim != 2 || (reference && reference->state_dim != 2)) {
        throw std::invalid_argument("phase_plot_svg: needs a two-dimensional state");
    }
    if (trace.size() == 0) {
        throw std::invalid_argument("phase_plot_svg: empty trace");
    }
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    auto extend = [&](const Trace& tr) {
        for (std::size_t j = 0; j < tr.size(); ++j) {
            for (int i = 0; i < tr.n_agents; ++i) {
                x_lo = std::min(x_lo, tr.value(j, i, 0));
                x_hi = std::max(x_hi, tr.value(j, i, 0));
                y_lo = std::min(y_lo, tr.value(j, i, 1));
                y_hi = std::max(y_hi, tr.value(j, i, 1));
            }
        }
    };
    extend(trace);
    if (reference) {
        extend(*reference);
    }
    const auto [xl, xh] = padded(x_lo, x_hi);
    const auto [yl, yh] = padded(y_lo, y_hi);
    const double side = 600.0;
    const Axis ax{xl, xh, kLeft, kLeft + side};
    const Axis ay{yl, yh, 40.0 + side, 40.0};

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << num(kLeft + side + kRight) << "' height='"
        << num(side + 80.0) << "' font-family='sans-serif'>\n<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << num(kLeft + side / 2) << "' y='22' font-size='14' text-anchor='middle'>"
        << escape(options.title) << "</text>\n";
    frame(svg, ax, ay, "x2");
    for (int k = 0; k <= 4; ++k) {
        const double xv = xl + (xh - xl) * k / 4.0;
        svg << "<text x='" << num(ax(xv)) << "' y='" << num(40.0 + side + 14) << "' font-size='10' text-anchor='middle'>"
            << label(xv) << "</text>\n";
    }
    svg << "<text x='" << num(kLeft + side / 2) << "' y='" << num(side + 72.0)
        << "' font-size='12' text-anchor='middle'>x1</text>\n";

    auto polyline = [&](const Trace& tr, int agent, std::size_t from, std::size_t to, const char* color,
                        const char* extra) {
        if (to <= from + 1) {
            return;
        }
        const std::size_t stride = std::max<std::size_t>(1, (to - from) / kMaxPoints);
        svg << "<polyline fill='none' stroke='" << color << "' " << extra << " points='";
        for (std::size_t j = from; j < to; j += stride) {
            svg << num(ax(tr.value(j, agent, 0))) << ',' << num(ay(tr.value(j, agent, 1))) << ' ';
        }
        svg << num(ax(tr.value(to - 1, agent, 0))) << ',' << num(ay(tr.value(to - 1, agent, 1))) << "'/>\n";
    };

    const std::size_t split =
        std::isnan(options.marker)
            ? 0
            : static_cast<std::size_t>(std::lower_bound(trace.times.begin(), trace.times.end(), options.marker) -
                                       trace.times.begin());
    for (int i = 0; i < trace.n_agents; ++i) {
        const char* color = kPalette[i % kPalette.size()];
        polyline(trace, i, 0, std::min(split + 1, trace.size()), color, "stroke-width='1' stroke-opacity='0.35'");
        polyline(trace, i, split, trace.size(), color, "stroke-width='1'");
    }
    if (reference) {
        polyline(*reference, 0, 0, reference->size(), "#000", "stroke-dasharray='5 3' stroke-width='1.5'");
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace nspike
