#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace nspike {

/// One integrate-and-fire neuron: dξ/dt = -μξ + ReLU(input), reset to 0 at ξ >= Δ.
struct NeuronState {
    double potential = 0.0;
    double threshold = 1.0;
    double leak = 0.0;

    friend bool operator==(const NeuronState&, const NeuronState&) = default;
};

/// The whole communication payload of one firing.
struct SpikeEvent {
    double time = 0.0;
    int source = 0;
    int dimension = 0;
    int sign = 1;  // +1 from the positive neuron, -1 from the negative one

    friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

inline double relu(double v) { return v > 0.0 ? v : 0.0; }

/// Advances the potential over `dt` with `input` held constant. The input is
/// rectified here, so callers pass the signed signal (u for the positive
/// neuron, -u for the negative one). The result may exceed the threshold.
NeuronState flow_neuron(const NeuronState& s, double input, double dt);

/// Time until the potential reaches `threshold` under a constant input, or
/// nullopt if it never does. A start at or above threshold returns 0.
std::optional<double> crossing_time(double start, double input, double leak, double threshold);

/// ∫₀^τ ReLU(u0 + slope·s) ds.
double ramp_drive(double u0, double slope, double tau);

/// First τ >= 0 at which start + ramp_drive(u0, slope, τ) reaches
/// `threshold`, or nullopt if it never does. Leak-free neurons only.
std::optional<double> ramp_crossing_time(double start, double u0, double slope, double threshold);

/// Reset after firing. Throws std::domain_error below threshold.
NeuronState jump_neuron(const NeuronState& s);

/// k = α/Δ. Throws std::invalid_argument unless both are positive and finite.
double amp_gain(double amplitude, double threshold);

/// ∫₀ᵗ y dτ for the spike train of one amplifier: α·(#positive − #negative)
/// over events with time <= t. `spikes` must be sorted by time.
double integrated_output(std::span<const SpikeEvent> spikes, double amplitude, double t);

/// Neuromorphic amplifier: a positive and a negative neuron with shared Δ, μ, α.
class NmAmp {
public:
    NmAmp(double amplitude, double threshold, double leak = 0.0,
          double positive_start = 0.0, double negative_start = 0.0);

    double amplitude() const { return amplitude_; }
    double threshold() const { return positive_.threshold; }
    double leak() const { return positive_.leak; }
    double gain() const { return amp_gain(amplitude_, threshold()); }
    const NeuronState& positive() const { return positive_; }
    const NeuronState& negative() const { return negative_; }

    /// Drives the amplifier with `input` held constant on [t0, t0 + duration],
    /// firing at the exact crossing instants. Emitted spikes carry
    /// source/dimension 0 and are appended to `out`.
    void drive(double input, double t0, double duration, std::vector<SpikeEvent>& out);

private:
    NeuronState positive_;
    NeuronState negative_;
    double amplitude_;
};

}  // namespace nspike
