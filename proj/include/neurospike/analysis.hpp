#pragma once

#include "neurospike/scenario.hpp"
#include "neurospike/simulator.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace nspike {

class AnalysisError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Closed time interval [begin, end].
struct Window {
    double begin = 0.0;
    double end = 0.0;

    bool contains(double t) const { return t >= begin - 1e-12 && t <= end + 1e-12; }
};

/// Final third of the trace.
Window steady_window(const Trace& trace);

// -- synchronization ---------------------------------------------------------

struct SyncReport {
    Window window;
    std::vector<double> times;
    std::vector<std::vector<double>> per_agent_error;  // [agent][sample]
    std::vector<double> tail_sup;                      // per agent, sup over the window

    double max_tail_sup() const;
};

/// Euclidean distance of every agent to the reference on the shared sample
/// grid inside `window`. A single-agent reference (blended run) is compared
/// with every agent; a reference with as many agents as `trace` is compared
/// agent by agent. Throws AnalysisError if the grids differ in the window.
SyncReport sync_error(const Trace& trace, const Trace& reference, Window window);

/// max over samples in `window` and agent pairs of ‖x_i - x_j‖.
double max_pairwise_distance(const Trace& trace, Window window);

// -- spike statistics --------------------------------------------------------

struct SpikeStats {
    std::size_t total_spikes = 0;
    double duration = 0.0;
    std::vector<double> per_agent_rate;  // spikes/s over the whole trace
    double mean_rate = 0.0;              // mean of per_agent_rate
    std::vector<double> payload_rate;    // bits/s; one bit per spike
    Window steady;
    std::vector<double> steady_rate;     // spikes/s inside the steady window
    std::vector<double> predicted_rate;  // Σ_d mean|x_{i,d}| / Δ inside the steady window
};

/// Throws AnalysisError on an empty window or a trace without samples.
SpikeStats spike_statistics(const Trace& trace, double threshold, Window steady);

// -- amplification error -----------------------------------------------------

struct AmpBound {
    int agent = 0;
    int dim = 0;
    double max_abs_integral = 0.0;  // max_t |α·(net spikes) - (α/Δ)∫x dτ|
    double slack = 0.0;
    bool pass = false;
};

struct AmpBoundReport {
    double bound = 0.0;  // 2α
    std::vector<AmpBound> amps;
    bool pass = false;
};

/// Checks |∫₀ᵗ ψ dτ| <= 2α on the sample grid for every amplifier. ∫x is a
/// trapezoidal sum over the samples, split at the delivered jumps rebuilt
/// from the spike log, so only the smooth flow is approximated. Each amplifier
/// gets a quadrature slack of (α/Δ)·h·max|ẋ| with h the sample period and
/// max|ẋ| the largest jump-free finite-difference slope over the grid.
/// Throws AnalysisError when μ != 0: no bound is claimed for leaky neurons.
AmpBoundReport verify_amp_bound(const Trace& trace, const Scenario& scenario);

// -- dwell time --------------------------------------------------------------

struct DwellStat {
    int agent = 0;
    int dim = 0;
    int sign = 1;
    std::optional<double> min_gap;  // none with fewer than two spikes
    double floor = 0.0;             // Δ / M, M = sup |x_{i,d}|
    bool pass = true;
};

struct DwellReport {
    std::vector<DwellStat> neurons;
    bool pass = true;
};

/// Minimum inter-spike interval per neuron against Δ/M; passes iff
/// min_gap >= floor - dt.
DwellReport min_dwell(const Trace& trace, const Scenario& scenario);

// -- bounding lemma ----------------------------------------------------------

/// Coefficients of ρ_κ(x, y) = -(‖x‖, ‖y‖) [p a; a κ] (‖x‖, ‖y‖)ᵀ + g‖x‖ + h‖y‖.
struct LemmaParams {
    double p = 1.0;
    double a = 0.0;
    double kappa = 1.0;
    double g = 0.0;
    double h = 0.0;
    int n_x = 1;
    int n_y = 1;
};

/// p > 0, g, h >= 0 and κ > p/3 + 3a²/p.
bool admissible(const LemmaParams& params);

double rho_kappa(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const LemmaParams& params);

struct LemmaConstants {
    double zeta = 0.0;     // κ - p/3 - 3a²/p
    double m_xi = 0.0;     // max(2p²/(9a²) + 1, 4p²/(9a²))
    double m_upsilon = 0.0;  // max(12ζ/p, 18a²/p² + 1)
    double threshold = 0.0;  // max(9 M_Ξ g²/p², h² M_Υ / ζ²)
};

/// Throws AnalysisError for inadmissible parameters or a = 0.
LemmaConstants lemma_constants(const LemmaParams& params);
double lemma_threshold(const LemmaParams& params);

struct LemmaCheck {
    std::size_t samples = 0;
    double threshold = 0.0;
    double worst_margin = 0.0;  // min over samples of -(p/3)R² - ρ
    bool pass = false;
};

/// Draws points with ‖x‖² + ‖y‖² > threshold and checks
/// ρ_κ(x, y) <= -(p/3)(‖x‖² + ‖y‖²) at each.
///
/// The radius R = sqrt(‖x‖² + ‖y‖²) is log-uniform on
/// [sqrt(threshold)·(1 + 1e-6), 1e3·sqrt(threshold + 1)] (lower end floored at
/// 1e-9 of the upper when the threshold is 0), the split between ‖x‖ and ‖y‖
/// is a uniform angle, and directions are uniform on the spheres. Comparisons
/// allow 1e-12 of the magnitude of the evaluated terms for rounding.
LemmaCheck sample_check_lemma(const LemmaParams& params, std::size_t n_samples, std::uint64_t seed);

// -- phase plane ---------------------------------------------------------------

/// One-sided discrete Hausdorff distance from each agent's sampled points in
/// `window` to the reference point set in the same window. Needs n = 2.
std::vector<double> orbit_distances(const Trace& trace, const Trace& reference, Window window);

/// max over agents of orbit_distances.
double orbit_distance(const Trace& trace, const Trace& reference, Window window);

}  // namespace nspike
