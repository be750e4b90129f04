#include "neurospike/commands.hpp"

#include "neurospike/analysis.hpp"
#include "neurospike/config.hpp"
#include "neurospike/report.hpp"
#include "neurospike/simulator.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <stdexcept>

namespace nspike {

namespace fs = std::filesystem;
using nlohmann::json;

Mode parse_mode(const std::string& name) {
    if (name == "neurospike") return Mode::neurospike;
    if (name == "continuous") return Mode::continuous;
    if (name == "blended") return Mode::blended;
    if (name == "all") return Mode::all;
    throw std::invalid_argument("unknown mode '" + name + "' (neurospike, continuous, blended, all)");
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::neurospike: return "neurospike";
        case Mode::continuous: return "continuous";
        case Mode::blended: return "blended";
        case Mode::all: return "all";
    }
    return "?";
}

fs::path output_dir(const RunConfig& cfg) {
    if (cfg.out_dir) {
        return *cfg.out_dir;
    }
    if (const char* env = std::getenv(kOutEnv); env && *env) {
        return env;
    }
    return "out";
}

Scenario load_scenario(const RunConfig& cfg) {
    Scenario s = parse_scenario(cfg.scenario);
    for (const std::string& assignment : cfg.overrides) {
        apply_override(s, assignment);
    }
    if (cfg.seed) {
        s.seed = *cfg.seed;
    }
    validate(s);
    return s;
}

namespace {

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json scenario_json(const Scenario& s) {
    return {{"name", s.name},
            {"digest", hex64(scenario_digest(s))},
            {"agents", s.n_agents()},
            {"state_dim", s.state_dim()},
            {"k", s.k},
            {"alpha", s.alpha},
            {"delta", s.delta},
            {"mu", s.mu},
            {"dt", s.dt},
            {"t_end", s.t_end},
            {"coupling_start", s.coupling_start},
            {"seed", s.seed}};
}

CommandOutcome config_failure(const std::exception& e, std::ostream& log) {
    log << "error: " << e.what() << '\n';
    CommandOutcome out;
    out.exit_code = 2;
    out.failures = {"config"};
    out.record = {{"pass", false}, {"failures", out.failures}, {"error", e.what()}};
    return out;
}

// Solver output or the reason it has none.
struct Solved {
    std::optional<Trace> trace;
    std::string error;
};

Solved solve(const std::function<Trace()>& fn) {
    Solved r;
    try {
        r.trace = fn();
    } catch (const SimulationError& e) {
        r.error = e.what();
    }
    return r;
}

void emit_trace(const fs::path& dir, const std::string& tag, const Trace& trace, const Scenario& s,
                const Trace* reference) {
    write_text(dir / (tag + "_states.csv"), states_csv(trace));
    if (tag == "neurospike") {
        write_text(dir / (tag + "_spikes.csv"), spikes_csv(trace));
    }
    PlotOptions opts;
    opts.title = s.name + " / " + tag;
    if (s.coupling_start > 0.0) {
        opts.marker = s.coupling_start;
    }
    write_text(dir / (tag + "_states.svg"), state_plot_svg(trace, opts));
    if (trace.state_dim == 2) {
        write_text(dir / (tag + "_phase.svg"), phase_plot_svg(trace, reference, opts));
    }
}

}  // namespace

CommandOutcome run_command(const RunConfig& cfg, std::ostream& log) {
    Scenario s;
    try {
        s = load_scenario(cfg);
    } catch (const std::exception& e) {
        return config_failure(e, log);
    }
    const fs::path dir = output_dir(cfg);
    fs::create_directories(dir);

    const bool all = cfg.mode == Mode::all;
    const bool want_ns = all || cfg.mode == Mode::neurospike;
    const bool want_ct = all || cfg.mode == Mode::continuous;
    const bool want_bl = all || cfg.mode == Mode::blended || want_ns || want_ct;  // reference for sync reports

    const auto clock_start = std::chrono::steady_clock::now();
    const auto policy = all ? std::launch::async : std::launch::deferred;
    const std::vector<double> s0 = mean_initial_state(s);
    std::future<Solved> ns, ct, bl;
    if (want_ns) ns = std::async(policy, [&] { return solve([&] { return run(s); }); });
    if (want_ct) ct = std::async(policy, [&] { return solve([&] { return run_continuous(s); }); });
    if (want_bl) bl = std::async(policy, [&] { return solve([&] { return run_blended(s, s0); }); });
    Solved ns_r = want_ns ? ns.get() : Solved{};
    Solved ct_r = want_ct ? ct.get() : Solved{};
    Solved bl_r = want_bl ? bl.get() : Solved{};
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start).count();

    CommandOutcome out;
    json record = {{"scenario", scenario_json(s)}, {"mode", mode_name(cfg.mode)}, {"wall_clock_s", wall}};
    auto fail = [&](const std::string& name) { out.failures.push_back(name); };

    const Trace* reference = bl_r.trace ? &*bl_r.trace : nullptr;
    if (want_bl) {
        json b = {{"initial_state", s0}};
        if (reference) {
            emit_trace(dir, "blended", *reference, s, nullptr);
        } else {
            b["error"] = bl_r.error;
            fail("blended.simulation");
        }
        record["blended"] = b;
    }

    if (want_ct) {
        json c;
        if (ct_r.trace) {
            const Trace& tr = *ct_r.trace;
            emit_trace(dir, "continuous", tr, s, reference);
            const Window w = steady_window(tr);
            if (reference) {
                c["sync_vs_blended"] = to_json(sync_error(tr, *reference, w));
            }
            c["max_pairwise_distance"] = max_pairwise_distance(tr, w);
        } else {
            c["error"] = ct_r.error;
            fail("continuous.simulation");
        }
        record["continuous"] = c;
    }

    if (want_ns) {
        json n;
        if (ns_r.trace) {
            const Trace& tr = *ns_r.trace;
            emit_trace(dir, "neurospike", tr, s, reference);
            const Window w = steady_window(tr);
            n["spikes"] = to_json(spike_statistics(tr, s.delta, w));
            n["max_pairwise_distance"] = max_pairwise_distance(tr, w);
            if (reference) {
                n["sync_vs_blended"] = to_json(sync_error(tr, *reference, w));
                if (tr.state_dim == 2) {
                    n["orbit_distance_to_blended"] = orbit_distances(tr, *reference, w);
                }
            }
            if (ct_r.trace) {
                n["sync_vs_continuous"] = to_json(sync_error(tr, *ct_r.trace, w));
            }
            if (s.mu == 0.0) {
                const AmpBoundReport amp = verify_amp_bound(tr, s);
                n["amp_bound"] = to_json(amp);
                if (!amp.pass) fail("neurospike.amp_bound");
            } else {
                n["amp_bound"] = "skipped: leaky neurons";
            }
            const DwellReport dwell = min_dwell(tr, s);
            n["dwell"] = to_json(dwell);
            if (!dwell.pass) fail("neurospike.dwell");
        } else {
            n["error"] = ns_r.error;
            fail("neurospike.simulation");
        }
        record["neurospike"] = n;
    }

    out.exit_code = out.failures.empty() ? 0 : 1;
    record["failures"] = out.failures;
    record["pass"] = out.failures.empty();
    out.record = record;
    write_text(dir / "summary.json", record.dump(2) + "\n");

    log << s.name << " [" << mode_name(cfg.mode) << "] " << wall << " s -> " << dir.string() << '\n';
    if (ns_r.trace) {
        log << "  spikes: " << ns_r.trace->spikes.size() << '\n';
    }
    for (const std::string& f : out.failures) {
        log << "  FAIL " << f << '\n';
    }
    log << (out.failures.empty() ? "  all checks passed\n" : "  checks failed\n");
    return out;
}

CommandOutcome verify_command(const RunConfig& cfg, std::ostream& log) {
    Scenario s;
    try {
        s = load_scenario(cfg);
    } catch (const std::exception& e) {
        return config_failure(e, log);
    }
    const fs::path dir = output_dir(cfg);
    fs::create_directories(dir);

    CommandOutcome out;
    json checks = json::array();
    auto report = [&](const std::string& name, const std::string& status, json detail) {
        checks.push_back({{"check", name}, {"status", status}, {"detail", std::move(detail)}});
        log << "  " << (status == "pass" ? "PASS" : status == "fail" ? "FAIL" : "SKIP") << ' ' << name << '\n';
        if (status == "fail") {
            out.failures.push_back(name);
        }
    };

    log << "verify " << s.name << '\n';
    std::optional<Trace> first;
    try {
        first = run(s);
        report("simulation", "pass", {{"spikes", first->spikes.size()}});
    } catch (const SimulationError& e) {
        report("simulation", "fail", e.what());
    }

    if (!first) {
        for (const char* name : {"amp_bound", "dwell", "determinism"}) {
            report(name, "skipped", "no trace: simulation failed");
        }
    } else {
        if (s.mu != 0.0) {
            report("amp_bound", "skipped", "bound only holds for mu = 0");
        } else {
            const AmpBoundReport amp = verify_amp_bound(*first, s);
            report("amp_bound", amp.pass ? "pass" : "fail", to_json(amp));
        }
        const DwellReport dwell = min_dwell(*first, s);
        report("dwell", dwell.pass ? "pass" : "fail", to_json(dwell));

        const std::string a = states_csv(*first) + spikes_csv(*first);
        const Trace second = run(s);
        const std::string b = states_csv(second) + spikes_csv(second);
        report("determinism", a == b ? "pass" : "fail",
               {{"first", hex64(fnv1a(a))}, {"second", hex64(fnv1a(b))}});
    }

    const LemmaParams lemma{3.0, 1.0, 3.0, 1.0, 1.0, 1, 1};
    const LemmaCheck lc = sample_check_lemma(lemma, 100000, s.seed);
    report("lemma", lc.pass ? "pass" : "fail", to_json(lc));

    out.exit_code = out.failures.empty() ? 0 : 1;
    out.record = {{"scenario", scenario_json(s)},
                  {"checks", checks},
                  {"failures", out.failures},
                  {"pass", out.failures.empty()}};
    write_text(dir / "verify.json", out.record.dump(2) + "\n");
    log << (out.failures.empty() ? "  all checks passed\n" : "  checks failed\n");
    return out;
}

int scenarios_command(std::ostream& out) {
    for (const BundledScenario& b : bundled_scenarios()) {
        out << b.name << "\t" << b.description << '\n';
    }
    return 0;
}

}  // namespace nspike
