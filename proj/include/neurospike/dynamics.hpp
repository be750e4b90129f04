#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nspike {

/// f(x) = sgn(target - x), scalar. Discontinuous at the target, so it sits
/// outside the globally Lipschitz class; sgn(0) is taken as 0.
struct SignTracker {
    double target = 0.0;
};

/// f(x) = (a1·x₂, -a2·x₁).
struct Harmonic {
    double a1 = 1.0;
    double a2 = 1.0;
};

/// f(x) = (0, ν(1 - x₁²)x₂). Only locally Lipschitz.
struct VanDerPolSource {
    double nu = 5.0;
};

/// f(x) = A·x + b.
struct LinearAffine {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

using AgentKind = std::variant<SignTracker, Harmonic, VanDerPolSource, LinearAffine>;

class DynamicsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Vector field of one agent together with its state dimension.
class AgentSpec {
public:
    explicit AgentSpec(AgentKind kind);

    const AgentKind& kind() const { return kind_; }
    int state_dim() const { return dim_; }
    std::string kind_name() const;
    /// True for kinds satisfying a global Lipschitz bound (Harmonic, LinearAffine).
    bool globally_lipschitz() const;

    /// Writes f(t, x) into `out`. Both spans must have state_dim() entries.
    void eval_into(double t, std::span<const double> x, std::span<double> out) const;

private:
    AgentKind kind_;
    int dim_ = 1;
};

double sgn(double v);

/// f_i(t, x). Throws DynamicsError on a dimension mismatch.
Eigen::VectorXd eval_field(const AgentSpec& spec, double t, const Eigen::VectorXd& x);

/// Arithmetic mean of the member fields evaluated at a common point.
class BlendedField {
public:
    explicit BlendedField(std::vector<AgentSpec> specs);

    int state_dim() const { return dim_; }
    std::size_t size() const { return specs_.size(); }
    const std::vector<AgentSpec>& specs() const { return specs_; }

    void eval_into(double t, std::span<const double> s, std::span<double> out) const;

private:
    std::vector<AgentSpec> specs_;
    int dim_ = 0;
};

Eigen::VectorXd blended_eval(const BlendedField& bf, double t, const Eigen::VectorXd& s);

/// Axis-aligned sampling region.
struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
};

/// Empirical Lipschitz estimate: max ‖f(x) - f(y)‖ / ‖x - y‖ over `samples`
/// random pairs drawn uniformly from `region` at t = 0. For discontinuous
/// kinds this reports the sampled maximum and grows without bound near the
/// discontinuity.
double lipschitz_probe(const AgentSpec& spec, const Box& region, std::size_t samples, std::uint64_t seed);

}  // namespace nspike
