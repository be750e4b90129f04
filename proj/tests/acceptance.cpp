// Acceptance battery. Prints one PASS/FAIL line per criterion and exits 0 iff
// every selected criterion passes. Pass criterion numbers as arguments to run
// a subset.

#include "neurospike/analysis.hpp"
#include "neurospike/config.hpp"
#include "neurospike/report.hpp"
#include "neurospike/simulator.hpp"

#include "fixtures.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

using namespace nspike;

namespace {

// -- pinned tolerances -------------------------------------------------------

constexpr double kMedian = 3.07;
constexpr double kMedianBand = 0.2;
constexpr double kRuntimeLimit = 10.0;  // seconds
constexpr std::size_t kSpikesLow = 4240, kSpikesHigh = 5740;
constexpr double kRate = 333.0, kRateTol = 0.15;
constexpr double kSparseRate = 98.0, kSparseRateTol = 0.20;
constexpr double kSyncBound = 0.3;
constexpr double kOrbitBound = 0.3;
constexpr double kRadiusDrift = 0.01;
constexpr int kRandomScenarios = 50;
constexpr int kLemmaSets = 25;
constexpr std::size_t kLemmaSamples = 100000;

struct Result {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

Scenario median(double alpha = 0.15) {
    Scenario s = parse_scenario("median5");
    apply_override(s, "alpha=" + format_double(alpha));
    validate(s);
    return s;
}

double band_deviation(const Trace& tr, Window w) {
    double worst = 0.0;
    for (std::size_t j = 0; j < tr.size(); ++j) {
        if (!w.contains(tr.times[j])) continue;
        for (int i = 0; i < tr.n_agents; ++i) worst = std::max(worst, std::abs(tr.value(j, i, 0) - kMedian));
    }
    return worst;
}

double tail_vs_blended(const Scenario& s, const Trace& tr) {
    const std::vector<double> s0 = {kMedian};
    return sync_error(tr, run_blended(s, s0), {2.0, 3.0}).max_tail_sup();
}

Result criterion1() {
    const Scenario s = median();
    const auto t0 = std::chrono::steady_clock::now();
    const Trace tr = run(s);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double dev = band_deviation(tr, {2.0, 3.0});
    return {dev <= kMedianBand && secs < kRuntimeLimit,
            "max |x_i - 3.07| on [2,3] = " + fmt("%.4f", dev) + " (<= 0.2), runtime " + fmt("%.3f", secs) + " s"};
}

Result criterion2() {
    const Scenario s = median();
    const Trace tr = run(s);
    const SpikeStats st = spike_statistics(tr, s.delta, steady_window(tr));
    const bool count_ok = st.total_spikes >= kSpikesLow && st.total_spikes <= kSpikesHigh;
    const bool rate_ok = std::abs(st.mean_rate - kRate) <= kRateTol * kRate;
    return {count_ok && rate_ok, std::to_string(st.total_spikes) + " spikes (in [4240, 5740]), mean rate " +
                                     fmt("%.1f", st.mean_rate) + "/s (333 +/- 15%)"};
}

Result criterion3() {
    const Scenario dense = median(0.15), sparse = median(0.5);
    const Trace a = run(dense), b = run(sparse);
    const SpikeStats st = spike_statistics(b, sparse.delta, steady_window(b));
    const double ta = tail_vs_blended(dense, a), tb = tail_vs_blended(sparse, b);
    const bool rate_ok = std::abs(st.mean_rate - kSparseRate) <= kSparseRateTol * kSparseRate;
    return {rate_ok && tb > ta, "alpha=0.5 rate " + fmt("%.1f", st.mean_rate) + "/s (98 +/- 20%), tail_sup " +
                                    fmt("%.4f", tb) + " vs " + fmt("%.4f", ta) + " at alpha=0.15"};
}

Result criterion4() {
    const Scenario s = parse_scenario("lienard4");
    const Trace tr = run(s);
    const Trace ref = run_blended(s, mean_initial_state(s));
    const Window w{25.0, 40.0};
    const double pairwise = max_pairwise_distance(tr, w);
    const double orbit = orbit_distance(tr, ref, w);

    double drift = 0.0;
    for (int i = 0; i < s.n_agents(); ++i) {
        const auto* h = std::get_if<Harmonic>(&s.agents[i].kind());
        if (!h) continue;
        auto radius = [&](std::size_t j) {
            const double x1 = tr.value(j, i, 0), x2 = tr.value(j, i, 1);
            return std::sqrt(h->a2 * x1 * x1 + h->a1 * x2 * x2);
        };
        const double r0 = radius(0);
        for (std::size_t j = 0; j < tr.size() && tr.times[j] < s.coupling_start; ++j) {
            drift = std::max(drift, std::abs(radius(j) - r0) / r0);
        }
    }
    return {pairwise < kSyncBound && orbit < kOrbitBound && drift < kRadiusDrift,
            "(a) pairwise " + fmt("%.4f", pairwise) + " (< 0.3), (b) orbit distance " + fmt("%.4f", orbit) +
                " (< 0.3), (c) radius drift before coupling " + fmt("%.2e", drift) + " (< 1%)"};
}

// Criterion 5 and 6 share the scenario matrix.
struct MatrixRun {
    std::string name;
    std::optional<Trace> trace;
    Scenario scenario;
    std::string error;
};

std::vector<MatrixRun> property_matrix() {
    std::vector<MatrixRun> out;
    auto add = [&](Scenario s) {
        MatrixRun r{s.name, std::nullopt, s, ""};
        try {
            r.trace = run(r.scenario);
        } catch (const SimulationError& e) {
            r.error = e.what();
        }
        out.push_back(std::move(r));
    };
    add(parse_scenario("median5"));
    add(parse_scenario("lienard4"));
    for (int i = 0; i < kRandomScenarios; ++i) add(fixture::random_linear_scenario(1000 + i));
    return out;
}

Result criterion5(const std::vector<MatrixRun>& matrix) {
    int passed = 0;
    double worst_ratio = 0.0;
    std::string first_fail;
    for (const MatrixRun& r : matrix) {
        bool ok = false;
        if (r.trace) {
            const AmpBoundReport rep = verify_amp_bound(*r.trace, r.scenario);
            ok = rep.pass;
            for (const AmpBound& a : rep.amps) worst_ratio = std::max(worst_ratio, a.max_abs_integral / r.scenario.alpha);
        }
        passed += ok;
        if (!ok && first_fail.empty()) first_fail = r.name + (r.error.empty() ? "" : " (" + r.error + ")");
    }
    const int total = static_cast<int>(matrix.size());
    return {passed == total, std::to_string(passed) + "/" + std::to_string(total) +
                                 " scenarios within 2 alpha + slack, worst max|Psi|/alpha = " + fmt("%.3f", worst_ratio) +
                                 (first_fail.empty() ? "" : ", first failure " + first_fail)};
}

Result criterion6(const std::vector<MatrixRun>& matrix) {
    int passed = 0, zeno = 0;
    for (const MatrixRun& r : matrix) {
        if (!r.trace) {
            zeno += r.error.find("zeno") != std::string::npos;
            continue;
        }
        passed += min_dwell(*r.trace, r.scenario).pass;
    }
    const int total = static_cast<int>(matrix.size());
    return {passed == total && zeno == 0, std::to_string(passed) + "/" + std::to_string(total) +
                                              " runs respect the dwell floor, zeno guard trips: " + std::to_string(zeno)};
}

Result criterion7() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int passed = 0;
    double fixture_threshold = 0.0;
    for (int i = 0; i < kLemmaSets; ++i) {
        LemmaParams p;
        if (i == 0) {
            p = {3.0, 1.0, 3.0, 1.0, 1.0, 1, 1};
            fixture_threshold = lemma_threshold(p);
        } else {
            p.p = 0.1 + 9.9 * u(rng);
            p.a = (u(rng) < 0.5 ? -1.0 : 1.0) * (0.01 + 9.99 * u(rng));
            p.kappa = p.p / 3 + 3 * p.a * p.a / p.p + 10.0 * u(rng) + 1e-6;
            p.g = 10.0 * u(rng);
            p.h = 10.0 * u(rng);
            p.n_x = 1 + static_cast<int>(rng() % 3);
            p.n_y = 1 + static_cast<int>(rng() % 3);
        }
        passed += sample_check_lemma(p, kLemmaSamples, 100 + i).pass;
    }
    const bool fixture_ok = std::abs(fixture_threshold - 4.0) < 1e-12;
    return {passed == kLemmaSets && fixture_ok, std::to_string(passed) + "/" + std::to_string(kLemmaSets) +
                                                    " parameter sets pass 1e5 samples, fixture threshold " +
                                                    fmt("%.6g", fixture_threshold) + " (= 4)"};
}

Result criterion8() {
    std::vector<double> gaps;
    for (double alpha : {0.15, 0.075, 0.0375}) {
        const Scenario s = median(alpha);
        gaps.push_back(sync_error(run(s), run_continuous(s), {2.0, 3.0}).max_tail_sup());
    }
    return {gaps[0] > gaps[1] && gaps[1] > gaps[2], "sup gap to the continuous baseline on [2,3]: " +
                                                        fmt("%.4f", gaps[0]) + " > " + fmt("%.4f", gaps[1]) + " > " +
                                                        fmt("%.4f", gaps[2])};
}

Result criterion9() {
    bool same = true;
    std::string detail;
    for (const BundledScenario& b : bundled_scenarios()) {
        const Scenario s = parse_scenario(b.name);
        const Trace x = run(s), y = run(s);
        const bool eq = states_csv(x) == states_csv(y) && spikes_csv(x) == spikes_csv(y);
        same = same && eq;
        detail += (detail.empty() ? "" : ", ") + b.name + (eq ? " identical" : " DIFFERS");
    }
    return {same, detail};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    std::optional<std::vector<MatrixRun>> matrix;
    auto shared_matrix = [&]() -> const std::vector<MatrixRun>& {
        if (!matrix) matrix = property_matrix();
        return *matrix;
    };
    const std::map<int, std::function<Result()>> criteria = {
        {1, criterion1},
        {2, criterion2},
        {3, criterion3},
        {4, criterion4},
        {5, [&] { return criterion5(shared_matrix()); }},
        {6, [&] { return criterion6(shared_matrix()); }},
        {7, criterion7},
        {8, criterion8},
        {9, criterion9},
    };

    bool all = true;
    for (int c : selected) {
        const auto it = criteria.find(c);
        if (it == criteria.end()) {
            std::printf("criterion %d: unknown\n", c);
            all = false;
            continue;
        }
        Result r;
        try {
            r = it->second();
        } catch (const std::exception& e) {
            r = {false, std::string("error: ") + e.what()};
        }
        std::printf("criterion %d %s: %s\n", c, r.pass ? "PASS" : "FAIL", r.detail.c_str());
        std::fflush(stdout);
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
