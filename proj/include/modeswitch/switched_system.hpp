#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace modeswitch {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ModeIndex = std::size_t;

/// One mode v of a switched system: the vector field f(., v) and its state Jacobian.
struct ModeDynamics {
    std::string label;
    std::function<Vector(const Vector&)> field;
    std::function<Matrix(const Vector&)> jacobian;
};

/// Running cost L(x) and its gradient dL/dx.
struct RunningCost {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
};

/// A switched dynamical system x' = f(x, v), v drawn from a finite mode set, with
/// running cost L(x).
///
/// Each field must be C^2 in x; the library only checks that the supplied Jacobians
/// agree with finite differences (see check_jacobians), not the smoothness itself.
/// Instances are immutable after construction and safe to share between threads as
/// long as the supplied callables are.
class SwitchedSystem {
public:
    SwitchedSystem(std::string name, std::size_t state_dim, std::vector<ModeDynamics> modes,
                   RunningCost cost);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] std::size_t state_dim() const noexcept { return state_dim_; }
    [[nodiscard]] std::size_t mode_count() const noexcept { return modes_.size(); }
    [[nodiscard]] const ModeDynamics& mode(ModeIndex v) const { return modes_.at(v); }

    [[nodiscard]] Vector field(const Vector& x, ModeIndex v) const { return modes_[v].field(x); }
    [[nodiscard]] Matrix jacobian(const Vector& x, ModeIndex v) const {
        return modes_[v].jacobian(x);
    }
    [[nodiscard]] double cost(const Vector& x) const { return cost_.value(x); }
    [[nodiscard]] Vector cost_gradient(const Vector& x) const { return cost_.gradient(x); }

    /// Copy of this system with one mode's Jacobian replaced. Used to build negative controls.
    [[nodiscard]] SwitchedSystem with_jacobian(ModeIndex v,
                                               std::function<Matrix(const Vector&)> jac) const;

private:
    std::string name_;
    std::size_t state_dim_;
    std::vector<ModeDynamics> modes_;
    RunningCost cost_;
};

struct JacobianReport {
    /// Max over probes, modes and entries of |analytic - fd| / max(1, |fd|).
    double max_jacobian_error = 0.0;
    /// Same measure for dL/dx.
    double max_gradient_error = 0.0;
    ModeIndex worst_mode = 0;
    std::size_t worst_probe = 0;

    [[nodiscard]] double max_error() const noexcept {
        return max_jacobian_error > max_gradient_error ? max_jacobian_error : max_gradient_error;
    }
};

/// Compares analytic Jacobians and cost gradient against central differences at each probe.
/// Never throws on disagreement; the caller decides what error is acceptable.
[[nodiscard]] JacobianReport check_jacobians(const SwitchedSystem& system,
                                             std::span<const Vector> probes,
                                             double step = 1e-6);

}  // namespace modeswitch
