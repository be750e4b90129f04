#include "neurospike/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace nspike {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) {
        out.push_back(w);
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Parser {
public:
    Parser(std::string_view text, std::string origin) : text_(text), origin_(std::move(origin)) {}

    Scenario parse();

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError(origin_ + ":" + std::to_string(line_no_) + ": " + what);
    }

    double number(const std::string& field, const std::string& token) const {
        double v = 0.0;
        const char* end = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(token.data(), end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
            fail("field '" + field + "': cannot parse number '" + token + "'");
        }
        return v;
    }

    long long integer(const std::string& field, const std::string& token) const {
        long long v = 0;
        const char* end = token.data() + token.size();
        auto [ptr, ec] = std::from_chars(token.data(), end, v);
        if (ec != std::errc() || ptr != end) {
            fail("field '" + field + "': cannot parse integer '" + token + "'");
        }
        return v;
    }

    void scalar(const std::string& line);
    void edge(const std::string& line);
    void agent(const std::string& line);
    std::vector<double> row(const std::string& field, const std::string& line);

    std::string_view text_;
    std::string origin_;
    int line_no_ = 0;

    std::map<std::string, std::string> scalars_;
    std::map<std::string, int> scalar_lines_;
    std::vector<Edge> edges_;
    std::vector<AgentSpec> agents_;
    std::vector<std::vector<double>> states_;
    std::vector<std::vector<double>> potentials_;
};

void Parser::scalar(const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
        fail("expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    static const std::vector<std::string> known = {"name", "nodes", "directed", "k", "alpha",
                                                   "delta", "mu", "dt", "t_end", "coupling_start",
                                                   "sample_period", "zeno_guard", "seed"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
        fail("unknown key '" + key + "'");
    }
    if (scalars_.count(key)) {
        fail("key '" + key + "' given twice");
    }
    scalars_[key] = value;
    scalar_lines_[key] = line_no_;
}

void Parser::edge(const std::string& line) {
    const auto w = words(line);
    if (w.size() != 2) {
        fail("edge needs 'sender receiver', got '" + line + "'");
    }
    edges_.push_back({static_cast<int>(integer("edges", w[0])) - 1, static_cast<int>(integer("edges", w[1])) - 1});
}

void Parser::agent(const std::string& line) {
    const auto w = words(line);
    std::map<std::string, std::string> params;
    for (std::size_t i = 1; i < w.size(); ++i) {
        const auto eq = w[i].find('=');
        if (eq == std::string::npos) {
            fail("agent parameter '" + w[i] + "' is not key=value");
        }
        params[w[i].substr(0, eq)] = w[i].substr(eq + 1);
    }
    auto take = [&](const std::string& key) {
        auto it = params.find(key);
        if (it == params.end()) {
            fail("agent kind '" + w[0] + "' needs parameter '" + key + "'");
        }
        std::string v = it->second;
        params.erase(it);
        return v;
    };

    std::optional<AgentKind> kind;
    if (w[0] == "sign") {
        kind = SignTracker{number("c", take("c"))};
    } else if (w[0] == "harmonic") {
        const double a1 = number("a1", take("a1"));
        kind = Harmonic{a1, number("a2", take("a2"))};
    } else if (w[0] == "vdp") {
        kind = VanDerPolSource{number("nu", take("nu"))};
    } else if (w[0] == "linear") {
        const auto rows = split(take("A"), ';');
        const auto b = split(take("b"), ',');
        const auto n = static_cast<Eigen::Index>(rows.size());
        LinearAffine la{Eigen::MatrixXd(n, n), Eigen::VectorXd(n)};
        if (static_cast<Eigen::Index>(b.size()) != n) {
            fail("linear agent: b has " + std::to_string(b.size()) + " entries, A has " + std::to_string(n) + " rows");
        }
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto cols = split(rows[r], ',');
            if (static_cast<Eigen::Index>(cols.size()) != n) {
                fail("linear agent: A must be square");
            }
            for (Eigen::Index c = 0; c < n; ++c) {
                la.A(r, c) = number("A", cols[c]);
            }
            la.b[r] = number("b", b[r]);
        }
        kind = std::move(la);
    } else {
        fail("unknown agent kind '" + w[0] + "'");
    }
    if (!params.empty()) {
        fail("agent kind '" + w[0] + "' has no parameter '" + params.begin()->first + "'");
    }
    try {
        agents_.emplace_back(std::move(*kind));
    } catch (const DynamicsError& e) {
        fail(e.what());
    }
}

std::vector<double> Parser::row(const std::string& field, const std::string& line) {
    std::vector<double> out;
    for (const auto& w : words(line)) {
        out.push_back(number(field, w));
    }
    return out;
}

Scenario Parser::parse() {
    std::string section;
    std::istringstream in{std::string(text_)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no_;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                fail("malformed section header '" + line + "'");
            }
            section = line.substr(1, line.size() - 2);
            if (section != "edges" && section != "agents" && section != "initial_states" &&
                section != "initial_potentials") {
                fail("unknown section '" + section + "'");
            }
            continue;
        }
        if (section.empty()) {
            scalar(line);
        } else if (section == "edges") {
            edge(line);
        } else if (section == "agents") {
            agent(line);
        } else if (section == "initial_states") {
            states_.push_back(row("initial_states", line));
        } else {
            potentials_.push_back(row("initial_potentials", line));
        }
    }

    Scenario s;
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = scalars_.find(key);
        if (it == scalars_.end()) {
            return std::nullopt;
        }
        line_no_ = scalar_lines_[key];
        return it->second;
    };
    auto require = [&](const std::string& key) {
        auto v = get(key);
        if (!v) {
            line_no_ = 0;
            fail("missing required key '" + key + "'");
        }
        return *v;
    };

    if (auto v = get("name")) s.name = *v;
    const auto nodes = integer("nodes", require("nodes"));
    const std::string directed = require("directed");
    if (directed != "true" && directed != "false") {
        fail("field 'directed' must be true or false");
    }
    s.alpha = number("alpha", require("alpha"));
    if (auto v = get("delta")) {
        s.delta = number("delta", *v);
        s.delta_pinned = true;
        if (auto kv = get("k")) {
            const double k = number("k", *kv);
            if (std::abs(k - s.alpha / s.delta) > 1e-12 * k) {
                fail("k, alpha and delta are inconsistent (k must equal alpha/delta)");
            }
        }
    } else {
        s.k = number("k", require("k"));
    }
    if (auto v = get("mu")) s.mu = number("mu", *v);
    s.dt = number("dt", require("dt"));
    s.t_end = number("t_end", require("t_end"));
    if (auto v = get("coupling_start")) s.coupling_start = number("coupling_start", *v);
    s.sample_period = s.dt;
    if (auto v = get("sample_period")) s.sample_period = number("sample_period", *v);
    if (auto v = get("zeno_guard")) s.zeno_guard = static_cast<int>(integer("zeno_guard", *v));
    if (auto v = get("seed")) s.seed = static_cast<std::uint64_t>(integer("seed", *v));

    line_no_ = 0;
    try {
        s.graph = build_topology(static_cast<int>(nodes), edges_, directed == "true");
    } catch (const GraphError& e) {
        fail(std::string("edges: ") + e.what());
    }
    s.agents = std::move(agents_);
    if (static_cast<long long>(s.agents.size()) != nodes) {
        fail("[agents] lists " + std::to_string(s.agents.size()) + " agents, nodes = " + std::to_string(nodes));
    }
    const int n = s.state_dim();

    if (states_.empty()) {
        for (const auto& a : s.agents) {
            const auto* sign = std::get_if<SignTracker>(&a.kind());
            for (int d = 0; d < n; ++d) {
                s.initial_states.push_back(sign ? sign->target : 0.0);
            }
        }
    } else {
        if (static_cast<long long>(states_.size()) != nodes) {
            fail("[initial_states] needs one line per agent");
        }
        for (const auto& r : states_) {
            if (static_cast<int>(r.size()) != n) {
                fail("[initial_states] rows need " + std::to_string(n) + " values");
            }
            s.initial_states.insert(s.initial_states.end(), r.begin(), r.end());
        }
    }

    if (potentials_.empty()) {
        s.initial_potentials.assign(s.initial_states.size() * 2, 0.0);
    } else {
        if (static_cast<long long>(potentials_.size()) != nodes) {
            fail("[initial_potentials] needs one line per agent");
        }
        for (const auto& r : potentials_) {
            if (static_cast<int>(r.size()) != 2 * n) {
                fail("[initial_potentials] rows need " + std::to_string(2 * n) + " values");
            }
            s.initial_potentials.insert(s.initial_potentials.end(), r.begin(), r.end());
        }
    }

    try {
        resolve(s);
        validate(s);
    } catch (const ScenarioError& e) {
        throw ConfigError(origin_ + ": invalid scenario: " + e.what());
    }
    return s;
}

}  // namespace

Scenario parse_scenario_text(std::string_view text, const std::string& origin) {
    return Parser(text, origin).parse();
}

Scenario parse_scenario(const std::string& path) {
    if (std::filesystem::is_regular_file(path)) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open " + path);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_scenario_text(buf.str(), path);
    }
    std::string stem = std::filesystem::path(path).filename().string();
    if (stem.size() > 4 && stem.ends_with(".cfg")) {
        stem.resize(stem.size() - 4);
    }
    for (const auto& b : bundled_scenarios()) {
        if (b.name == stem) {
            return parse_scenario_text(b.text, b.name + ".cfg");
        }
    }
    throw ConfigError("no such scenario file or bundled scenario: " + path);
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    const int n = s.state_dim();
    out << "name = " << s.name << "\n";
    out << "nodes = " << s.n_agents() << "\n";
    out << "directed = " << (s.graph.directed() ? "true" : "false") << "\n";
    out << "alpha = " << fmt(s.alpha) << "\n";
    if (s.delta_pinned) {
        out << "delta = " << fmt(s.delta) << "\n";
    } else {
        out << "k = " << fmt(s.k) << "\n";
    }
    out << "mu = " << fmt(s.mu) << "\n";
    out << "dt = " << fmt(s.dt) << "\n";
    out << "t_end = " << fmt(s.t_end) << "\n";
    out << "coupling_start = " << fmt(s.coupling_start) << "\n";
    out << "sample_period = " << fmt(s.sample_period) << "\n";
    out << "zeno_guard = " << s.zeno_guard << "\n";
    out << "seed = " << s.seed << "\n";

    out << "\n[edges]\n";
    for (const Edge& e : s.graph.edges()) {
        // Undirected graphs store both orientations; emit each pair once.
        if (!s.graph.directed() && e.sender > e.receiver) {
            continue;
        }
        out << e.sender + 1 << " " << e.receiver + 1 << "\n";
    }

    out << "\n[agents]\n";
    for (const auto& a : s.agents) {
        if (const auto* st = std::get_if<SignTracker>(&a.kind())) {
            out << "sign c=" << fmt(st->target) << "\n";
        } else if (const auto* h = std::get_if<Harmonic>(&a.kind())) {
            out << "harmonic a1=" << fmt(h->a1) << " a2=" << fmt(h->a2) << "\n";
        } else if (const auto* v = std::get_if<VanDerPolSource>(&a.kind())) {
            out << "vdp nu=" << fmt(v->nu) << "\n";
        } else {
            const auto& la = std::get<LinearAffine>(a.kind());
            out << "linear A=";
            for (Eigen::Index r = 0; r < la.A.rows(); ++r) {
                for (Eigen::Index c = 0; c < la.A.cols(); ++c) {
                    out << (c ? "," : "") << fmt(la.A(r, c));
                }
                out << (r + 1 < la.A.rows() ? ";" : "");
            }
            out << " b=";
            for (Eigen::Index r = 0; r < la.b.size(); ++r) {
                out << (r ? "," : "") << fmt(la.b[r]);
            }
            out << "\n";
        }
    }

    out << "\n[initial_states]\n";
    for (int i = 0; i < s.n_agents(); ++i) {
        for (int d = 0; d < n; ++d) {
            out << (d ? " " : "") << fmt(s.initial_states[static_cast<std::size_t>(i) * n + d]);
        }
        out << "\n";
    }
    out << "\n[initial_potentials]\n";
    for (int i = 0; i < s.n_agents(); ++i) {
        for (int c = 0; c < 2 * n; ++c) {
            out << (c ? " " : "") << fmt(s.initial_potentials[static_cast<std::size_t>(i) * 2 * n + c]);
        }
        out << "\n";
    }
    return out.str();
}

std::uint64_t scenario_digest(const Scenario& s) {
    return fnv1a(serialize_scenario(s));
}

const std::vector<std::string>& override_keys() {
    static const std::vector<std::string> keys = {"k",  "alpha", "delta",         "mu",         "dt",
                                                  "t_end", "coupling_start", "sample_period", "zeno_guard", "seed"};
    return keys;
}

void apply_override(Scenario& s, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override '" + assignment + "' is not key=value");
    }
    const std::string key = trim(std::string_view(assignment).substr(0, eq));
    const std::string value = trim(std::string_view(assignment).substr(eq + 1));
    const auto& keys = override_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError("unknown override key '" + key + "'");
    }

    auto as_number = [&] {
        double v = 0.0;
        const char* end = value.data() + value.size();
        auto [ptr, ec] = std::from_chars(value.data(), end, v);
        if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
            throw ConfigError("override '" + key + "': cannot parse number '" + value + "'");
        }
        return v;
    };
    auto as_integer = [&] {
        long long v = 0;
        const char* end = value.data() + value.size();
        auto [ptr, ec] = std::from_chars(value.data(), end, v);
        if (ec != std::errc() || ptr != end) {
            throw ConfigError("override '" + key + "': cannot parse integer '" + value + "'");
        }
        return v;
    };

    if (key == "k") {
        s.k = as_number();
        s.delta_pinned = false;
    } else if (key == "alpha") {
        s.alpha = as_number();
    } else if (key == "delta") {
        s.delta = as_number();
        s.delta_pinned = true;
    } else if (key == "mu") {
        s.mu = as_number();
    } else if (key == "dt") {
        s.dt = as_number();
    } else if (key == "t_end") {
        s.t_end = as_number();
    } else if (key == "coupling_start") {
        s.coupling_start = as_number();
    } else if (key == "sample_period") {
        s.sample_period = as_number();
    } else if (key == "zeno_guard") {
        s.zeno_guard = static_cast<int>(as_integer());
    } else if (key == "seed") {
        s.seed = static_cast<std::uint64_t>(as_integer());
    }
    try {
        resolve(s);
    } catch (const ScenarioError& e) {
        throw ConfigError(std::string("override '") + assignment + "': " + e.what());
    }
}

}  // namespace nspike
