#include "neurospike/dynamics.hpp"

#include <algorithm>
#include <random>

namespace nspike {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

int dimension_of(const AgentKind& kind) {
    return std::visit(Overloaded{
                          [](const SignTracker&) { return 1; },
                          [](const Harmonic&) { return 2; },
                          [](const VanDerPolSource&) { return 2; },
                          [](const LinearAffine& la) {
                              if (la.A.rows() == 0 || la.A.rows() != la.A.cols() || la.b.size() != la.A.rows()) {
                                  throw DynamicsError("LinearAffine: A must be square and match b");
                              }
                              return static_cast<int>(la.A.rows());
                          },
                      },
                      kind);
}

}  // namespace

double sgn(double v) {
    return static_cast<double>((0.0 < v) - (v < 0.0));
}

AgentSpec::AgentSpec(AgentKind kind) : kind_(std::move(kind)), dim_(dimension_of(kind_)) {
    if (const auto* vdp = std::get_if<VanDerPolSource>(&kind_); vdp && !(vdp->nu > 0.0)) {
        throw DynamicsError("VanDerPolSource: nu must be positive");
    }
}

std::string AgentSpec::kind_name() const {
    return std::visit(Overloaded{
                          [](const SignTracker&) { return std::string("sign"); },
                          [](const Harmonic&) { return std::string("harmonic"); },
                          [](const VanDerPolSource&) { return std::string("vdp"); },
                          [](const LinearAffine&) { return std::string("linear"); },
                      },
                      kind_);
}

bool AgentSpec::globally_lipschitz() const {
    return std::holds_alternative<Harmonic>(kind_) || std::holds_alternative<LinearAffine>(kind_);
}

void AgentSpec::eval_into(double /*t*/, std::span<const double> x, std::span<double> out) const {
    std::visit(Overloaded{
                   [&](const SignTracker& s) { out[0] = sgn(s.target - x[0]); },
                   [&](const Harmonic& h) {
                       out[0] = h.a1 * x[1];
                       out[1] = -h.a2 * x[0];
                   },
                   [&](const VanDerPolSource& v) {
                       out[0] = 0.0;
                       out[1] = v.nu * (1.0 - x[0] * x[0]) * x[1];
                   },
                   [&](const LinearAffine& la) {
                       const auto n = la.A.rows();
                       for (Eigen::Index r = 0; r < n; ++r) {
                           double acc = la.b[r];
                           for (Eigen::Index c = 0; c < n; ++c) {
                               acc += la.A(r, c) * x[c];
                           }
                           out[r] = acc;
                       }
                   },
               },
               kind_);
}

Eigen::VectorXd eval_field(const AgentSpec& spec, double t, const Eigen::VectorXd& x) {
    if (x.size() != spec.state_dim()) {
        throw DynamicsError("eval_field: state has dimension " + std::to_string(x.size()) + ", field expects " +
                            std::to_string(spec.state_dim()));
    }
    Eigen::VectorXd out(spec.state_dim());
    spec.eval_into(t, {x.data(), static_cast<std::size_t>(x.size())}, {out.data(), static_cast<std::size_t>(out.size())});
    return out;
}

BlendedField::BlendedField(std::vector<AgentSpec> specs) : specs_(std::move(specs)) {
    if (specs_.empty()) {
        throw DynamicsError("BlendedField: empty agent list");
    }
    dim_ = specs_.front().state_dim();
    for (const auto& s : specs_) {
        if (s.state_dim() != dim_) {
            throw DynamicsError("BlendedField: agents disagree on state dimension");
        }
    }
}

void BlendedField::eval_into(double t, std::span<const double> s, std::span<double> out) const {
    std::vector<double> term(dim_);
    std::fill(out.begin(), out.end(), 0.0);
    for (const auto& spec : specs_) {
        spec.eval_into(t, s, term);
        for (int d = 0; d < dim_; ++d) {
            out[d] += term[d];
        }
    }
    const double inv = 1.0 / static_cast<double>(specs_.size());
    for (int d = 0; d < dim_; ++d) {
        out[d] *= inv;
    }
}

Eigen::VectorXd blended_eval(const BlendedField& bf, double t, const Eigen::VectorXd& s) {
    if (s.size() != bf.state_dim()) {
        throw DynamicsError("blended_eval: dimension mismatch");
    }
    Eigen::VectorXd out(bf.state_dim());
    bf.eval_into(t, {s.data(), static_cast<std::size_t>(s.size())}, {out.data(), static_cast<std::size_t>(out.size())});
    return out;
}

double lipschitz_probe(const AgentSpec& spec, const Box& region, std::size_t samples, std::uint64_t seed) {
    const int n = spec.state_dim();
    if (region.lower.size() != n || region.upper.size() != n) {
        throw DynamicsError("lipschitz_probe: region dimension mismatch");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&] {
        Eigen::VectorXd p(n);
        for (int d = 0; d < n; ++d) {
            p[d] = region.lower[d] + unit(rng) * (region.upper[d] - region.lower[d]);
        }
        return p;
    };

    double best = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const Eigen::VectorXd x = draw();
        const Eigen::VectorXd y = draw();
        const double gap = (x - y).norm();
        if (gap == 0.0) {
            continue;
        }
        best = std::max(best, (eval_field(spec, 0.0, x) - eval_field(spec, 0.0, y)).norm() / gap);
    }
    return best;
}

}  // namespace nspike
