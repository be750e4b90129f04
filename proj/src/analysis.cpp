#include "neurospike/analysis.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace nspike {

namespace {

std::vector<std::size_t> indices_in(const Trace& trace, Window w) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < trace.size(); ++j) {
        if (w.contains(trace.times[j])) {
            idx.push_back(j);
        }
    }
    return idx;
}

bool same_time(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a));
}

}  // namespace

Window steady_window(const Trace& trace) {
    if (trace.times.empty()) {
        throw AnalysisError("steady_window: empty trace");
    }
    const double t0 = trace.times.front();
    const double t1 = trace.times.back();
    return {t1 - (t1 - t0) / 3.0, t1};
}

double SyncReport::max_tail_sup() const {
    return tail_sup.empty() ? 0.0 : *std::max_element(tail_sup.begin(), tail_sup.end());
}

SyncReport sync_error(const Trace& trace, const Trace& reference, Window window) {
    if (reference.state_dim != trace.state_dim) {
        throw AnalysisError("sync_error: state dimensions differ");
    }
    const bool agentwise = reference.n_agents == trace.n_agents && reference.n_agents != 1;
    if (!agentwise && reference.n_agents != 1) {
        throw AnalysisError("sync_error: reference must have one agent or match the trace");
    }
    const auto mine = indices_in(trace, window);
    const auto theirs = indices_in(reference, window);
    if (mine.empty()) {
        throw AnalysisError("sync_error: no samples in window");
    }
    if (mine.size() != theirs.size()) {
        throw AnalysisError("sync_error: sample grids differ in window");
    }

    SyncReport report;
    report.window = window;
    report.per_agent_error.assign(trace.n_agents, {});
    report.tail_sup.assign(trace.n_agents, 0.0);
    for (std::size_t s = 0; s < mine.size(); ++s) {
        const double t = trace.times[mine[s]];
        if (!same_time(t, reference.times[theirs[s]])) {
            throw AnalysisError("sync_error: sample grids differ at t=" + std::to_string(t));
        }
        report.times.push_back(t);
        for (int i = 0; i < trace.n_agents; ++i) {
            double sq = 0.0;
            for (int d = 0; d < trace.state_dim; ++d) {
                const double diff = trace.value(mine[s], i, d) - reference.value(theirs[s], agentwise ? i : 0, d);
                sq += diff * diff;
            }
            const double err = std::sqrt(sq);
            report.per_agent_error[i].push_back(err);
            report.tail_sup[i] = std::max(report.tail_sup[i], err);
        }
    }
    return report;
}

double max_pairwise_distance(const Trace& trace, Window window) {
    double worst = 0.0;
    for (std::size_t j : indices_in(trace, window)) {
        for (int a = 0; a < trace.n_agents; ++a) {
            for (int b = a + 1; b < trace.n_agents; ++b) {
                double sq = 0.0;
                for (int d = 0; d < trace.state_dim; ++d) {
                    const double diff = trace.value(j, a, d) - trace.value(j, b, d);
                    sq += diff * diff;
                }
                worst = std::max(worst, std::sqrt(sq));
            }
        }
    }
    return worst;
}

SpikeStats spike_statistics(const Trace& trace, double threshold, Window steady) {
    if (trace.times.size() < 2) {
        throw AnalysisError("spike_statistics: trace needs at least two samples");
    }
    if (!(steady.end > steady.begin)) {
        throw AnalysisError("spike_statistics: empty steady window");
    }
    const auto steady_idx = indices_in(trace, steady);
    if (steady_idx.empty()) {
        throw AnalysisError("spike_statistics: no samples in steady window");
    }

    SpikeStats st;
    st.steady = steady;
    st.duration = trace.times.back() - trace.times.front();
    st.total_spikes = trace.spikes.size();

    std::vector<std::size_t> all(trace.n_agents, 0), inside(trace.n_agents, 0);
    for (const SpikeEvent& e : trace.spikes) {
        ++all[e.source];
        if (e.time > steady.begin && e.time <= steady.end) {
            ++inside[e.source];
        }
    }
    const double steady_len = steady.end - steady.begin;
    for (int i = 0; i < trace.n_agents; ++i) {
        st.per_agent_rate.push_back(static_cast<double>(all[i]) / st.duration);
        st.steady_rate.push_back(static_cast<double>(inside[i]) / steady_len);
        double mean_abs = 0.0;
        for (std::size_t j : steady_idx) {
            for (int d = 0; d < trace.state_dim; ++d) {
                mean_abs += std::abs(trace.value(j, i, d));
            }
        }
        st.predicted_rate.push_back(mean_abs / static_cast<double>(steady_idx.size()) / threshold);
    }
    st.payload_rate = st.per_agent_rate;
    double sum = 0.0;
    for (double r : st.per_agent_rate) {
        sum += r;
    }
    st.mean_rate = sum / trace.n_agents;
    return st;
}

AmpBoundReport verify_amp_bound(const Trace& trace, const Scenario& scenario) {
    if (scenario.mu != 0.0) {
        throw AnalysisError("verify_amp_bound: bound only holds for mu = 0");
    }
    if (trace.n_agents != scenario.n_agents() || trace.state_dim != scenario.state_dim()) {
        throw AnalysisError("verify_amp_bound: trace does not match scenario");
    }
    const double alpha = scenario.alpha;
    const double gain = scenario.k;

    AmpBoundReport report;
    report.bound = 2.0 * alpha;
    report.pass = true;

    // Spikes bucketed per amplifier, keeping time order.
    std::vector<std::vector<const SpikeEvent*>> by_amp(trace.width());
    for (const SpikeEvent& e : trace.spikes) {
        by_amp[static_cast<std::size_t>(e.source) * trace.state_dim + e.dimension].push_back(&e);
    }

    // Jumps received by each coordinate, rebuilt from the spike log, so the
    // quadrature can split every sample interval at its jump instants.
    struct Jump {
        double time;
        double size;
    };
    std::vector<std::vector<Jump>> received(trace.width());
    const double gate = scenario.coupling_start - 1e-9 * scenario.dt;
    for (const SpikeEvent& e : trace.spikes) {
        if (e.time < gate) {
            continue;
        }
        for (int r : scenario.graph.receivers_of(e.source)) {
            received[static_cast<std::size_t>(r) * trace.state_dim + e.dimension].push_back(
                {e.time, e.sign * alpha});
        }
    }

    for (int i = 0; i < trace.n_agents; ++i) {
        for (int d = 0; d < trace.state_dim; ++d) {
            const std::size_t cell = static_cast<std::size_t>(i) * trace.state_dim + d;
            const auto& spikes = by_amp[cell];
            const auto& jumps = received[cell];
            std::size_t next = 0;
            std::size_t next_jump = 0;
            long long net = 0;
            double integral = 0.0;
            double worst = 0.0;
            double max_slope = 0.0;
            double max_step = 0.0;
            for (std::size_t j = 0; j < trace.size(); ++j) {
                const double t = trace.times[j];
                if (j > 0) {
                    const double t0 = trace.times[j - 1];
                    const double h = t - t0;
                    const double x0 = trace.value(j - 1, i, d);
                    const double x1 = trace.value(j, i, d);
                    double jumped = 0.0;
                    double tail = 0.0;
                    while (next_jump < jumps.size() && jumps[next_jump].time <= t) {
                        if (jumps[next_jump].time > t0) {
                            jumped += jumps[next_jump].size;
                            tail += jumps[next_jump].size * (t - jumps[next_jump].time);
                        }
                        ++next_jump;
                    }
                    integral += 0.5 * h * (x0 + x1 - jumped) + tail;
                    if (h > 0.0) {
                        max_slope = std::max(max_slope, std::abs(x1 - x0 - jumped) / h);
                        max_step = std::max(max_step, h);
                    }
                }
                while (next < spikes.size() && spikes[next]->time <= t) {
                    net += spikes[next]->sign;
                    ++next;
                }
                worst = std::max(worst, std::abs(alpha * static_cast<double>(net) - gain * integral));
            }
            AmpBound amp;
            amp.agent = i;
            amp.dim = d;
            amp.max_abs_integral = worst;
            amp.slack = gain * max_step * max_slope;
            amp.pass = worst <= report.bound + amp.slack;
            report.pass = report.pass && amp.pass;
            report.amps.push_back(amp);
        }
    }
    return report;
}

DwellReport min_dwell(const Trace& trace, const Scenario& scenario) {
    DwellReport report;
    const int n = trace.state_dim;
    std::vector<double> last(trace.width() * 2, std::numeric_limits<double>::quiet_NaN());
    std::vector<std::optional<double>> gaps(trace.width() * 2);
    for (const SpikeEvent& e : trace.spikes) {
        const std::size_t q = neuron_index(e.source, e.dimension, n, e.sign);
        if (!std::isnan(last[q])) {
            const double gap = e.time - last[q];
            gaps[q] = gaps[q] ? std::min(*gaps[q], gap) : gap;
        }
        last[q] = e.time;
    }
    for (int i = 0; i < trace.n_agents; ++i) {
        for (int d = 0; d < n; ++d) {
            const double peak = trace.peak_abs[static_cast<std::size_t>(i) * n + d];
            for (int sign : {1, -1}) {
                DwellStat st;
                st.agent = i;
                st.dim = d;
                st.sign = sign;
                st.min_gap = gaps[neuron_index(i, d, n, sign)];
                st.floor = peak > 0.0 ? scenario.delta / peak : std::numeric_limits<double>::infinity();
                st.pass = !st.min_gap || *st.min_gap >= st.floor - scenario.dt;
                report.pass = report.pass && st.pass;
                report.neurons.push_back(st);
            }
        }
    }
    return report;
}

bool admissible(const LemmaParams& p) {
    return p.p > 0.0 && p.g >= 0.0 && p.h >= 0.0 && std::isfinite(p.a) && std::isfinite(p.kappa) &&
           p.kappa > p.p / 3.0 + 3.0 * p.a * p.a / p.p;
}

double rho_kappa(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const LemmaParams& params) {
    if (!admissible(params)) {
        throw AnalysisError("rho_kappa: inadmissible parameters (need kappa > p/3 + 3a^2/p)");
    }
    const double nx = x.norm();
    const double ny = y.norm();
    const double quad = params.p * nx * nx + 2.0 * params.a * nx * ny + params.kappa * ny * ny;
    return -quad + params.g * nx + params.h * ny;
}

LemmaConstants lemma_constants(const LemmaParams& params) {
    if (!admissible(params)) {
        throw AnalysisError("lemma_constants: inadmissible parameters (need kappa > p/3 + 3a^2/p)");
    }
    if (params.a == 0.0) {
        throw AnalysisError("lemma_constants: a = 0 is outside the displayed constants");
    }
    const double p = params.p;
    const double a2 = params.a * params.a;
    LemmaConstants c;
    c.zeta = params.kappa - p / 3.0 - 3.0 * a2 / p;
    c.m_xi = std::max(2.0 * p * p / (9.0 * a2) + 1.0, 4.0 * p * p / (9.0 * a2));
    c.m_upsilon = std::max(12.0 * c.zeta / p, 18.0 * a2 / (p * p) + 1.0);
    c.threshold = std::max(9.0 * c.m_xi * params.g * params.g / (p * p),
                           params.h * params.h * c.m_upsilon / (c.zeta * c.zeta));
    return c;
}

double lemma_threshold(const LemmaParams& params) {
    return lemma_constants(params).threshold;
}

LemmaCheck sample_check_lemma(const LemmaParams& params, std::size_t n_samples, std::uint64_t seed) {
    if (params.n_x < 1 || params.n_y < 1) {
        throw AnalysisError("sample_check_lemma: dimensions must be positive");
    }
    const double threshold = lemma_threshold(params);
    const double hi = 1e3 * std::sqrt(threshold + 1.0);
    const double lo = std::max(std::sqrt(threshold) * (1.0 + 1e-6), 1e-9 * hi);
    const double log_span = std::log(hi / lo);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    auto direction = [&](int dim) {
        Eigen::VectorXd v(dim);
        do {
            for (int i = 0; i < dim; ++i) {
                v[i] = normal(rng);
            }
        } while (v.norm() == 0.0);
        return Eigen::VectorXd(v / v.norm());
    };

    LemmaCheck check;
    check.threshold = threshold;
    check.worst_margin = std::numeric_limits<double>::infinity();
    check.pass = true;
    const double half_pi = std::acos(0.0);
    while (check.samples < n_samples) {
        const double r = lo * std::exp(unit(rng) * log_span);
        const double theta = unit(rng) * half_pi;
        const Eigen::VectorXd x = r * std::cos(theta) * direction(params.n_x);
        const Eigen::VectorXd y = r * std::sin(theta) * direction(params.n_y);
        const double nx = x.norm();
        const double ny = y.norm();
        const double r2 = nx * nx + ny * ny;
        if (!(r2 > threshold)) {
            continue;
        }
        ++check.samples;
        const double target = -(params.p / 3.0) * r2;
        const double margin = target - rho_kappa(x, y, params);
        const double scale = params.p * nx * nx + 2.0 * std::abs(params.a) * nx * ny + params.kappa * ny * ny +
                             params.g * nx + params.h * ny + (params.p / 3.0) * r2;
        check.worst_margin = std::min(check.worst_margin, margin);
        if (margin < -1e-12 * scale) {
            check.pass = false;
        }
    }
    return check;
}

std::vector<double> orbit_distances(const Trace& trace, const Trace& reference, Window window) {
    if (trace.state_dim != 2 || reference.state_dim != 2) {
        throw AnalysisError("orbit_distance: needs two-dimensional states");
    }
    std::vector<std::array<double, 2>> ref;
    for (std::size_t j : indices_in(reference, window)) {
        for (int i = 0; i < reference.n_agents; ++i) {
            ref.push_back({reference.value(j, i, 0), reference.value(j, i, 1)});
        }
    }
    if (ref.empty()) {
        throw AnalysisError("orbit_distance: reference has no samples in window");
    }
    std::sort(ref.begin(), ref.end());

    auto nearest = [&](double qx, double qy) {
        const auto start = std::lower_bound(ref.begin(), ref.end(), std::array<double, 2>{qx, qy});
        double best = std::numeric_limits<double>::infinity();
        for (auto it = start; it != ref.end() && (*it)[0] - qx < best; ++it) {
            best = std::min(best, std::hypot((*it)[0] - qx, (*it)[1] - qy));
        }
        for (auto it = start; it != ref.begin();) {
            --it;
            if (qx - (*it)[0] >= best) {
                break;
            }
            best = std::min(best, std::hypot((*it)[0] - qx, (*it)[1] - qy));
        }
        return best;
    };

    std::vector<double> out(trace.n_agents, 0.0);
    for (std::size_t j : indices_in(trace, window)) {
        for (int i = 0; i < trace.n_agents; ++i) {
            out[i] = std::max(out[i], nearest(trace.value(j, i, 0), trace.value(j, i, 1)));
        }
    }
    return out;
}

double orbit_distance(const Trace& trace, const Trace& reference, Window window) {
    const auto all = orbit_distances(trace, reference, window);
    return *std::max_element(all.begin(), all.end());
}

}  // namespace nspike
