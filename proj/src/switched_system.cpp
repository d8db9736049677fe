#include "modeswitch/switched_system.hpp"

#include "modeswitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace modeswitch {

SwitchedSystem::SwitchedSystem(std::string name, std::size_t state_dim,
                               std::vector<ModeDynamics> modes, RunningCost cost)
    : name_(std::move(name)), state_dim_(state_dim), modes_(std::move(modes)), cost_(std::move(cost)) {
    if (state_dim_ == 0) {
        throw DimensionMismatch("switched system '" + name_ + "': state dimension must be >= 1");
    }
    if (modes_.size() < 2) {
        throw DimensionMismatch("switched system '" + name_ + "': needs at least two modes");
    }
    for (const auto& m : modes_) {
        if (!m.field || !m.jacobian) {
            throw std::invalid_argument("switched system '" + name_ + "': mode '" + m.label +
                                        "' is missing its field or Jacobian");
        }
    }
    if (!cost_.value || !cost_.gradient) {
        throw std::invalid_argument("switched system '" + name_ + "': missing running cost");
    }
}

SwitchedSystem SwitchedSystem::with_jacobian(ModeIndex v,
                                             std::function<Matrix(const Vector&)> jac) const {
    SwitchedSystem copy = *this;
    copy.modes_.at(v).jacobian = std::move(jac);
    return copy;
}

namespace {

double mixed_error(double analytic, double reference) {
    return std::abs(analytic - reference) / std::max(1.0, std::abs(reference));
}

}  // namespace

JacobianReport check_jacobians(const SwitchedSystem& system, std::span<const Vector> probes,
                               double step) {
    JacobianReport report;
    const auto n = static_cast<Eigen::Index>(system.state_dim());
    for (std::size_t probe = 0; probe < probes.size(); ++probe) {
        const Vector& x = probes[probe];
        if (x.size() != n) {
            throw DimensionMismatch("check_jacobians: probe has wrong dimension");
        }
        for (ModeIndex v = 0; v < system.mode_count(); ++v) {
            const Matrix analytic = system.jacobian(x, v);
            for (Eigen::Index col = 0; col < n; ++col) {
                const double h = step * std::max(1.0, std::abs(x[col]));
                Vector up = x;
                Vector down = x;
                up[col] += h;
                down[col] -= h;
                const Vector fd = (system.field(up, v) - system.field(down, v)) / (2.0 * h);
                for (Eigen::Index row = 0; row < n; ++row) {
                    const double err = mixed_error(analytic(row, col), fd[row]);
                    if (err > report.max_jacobian_error) {
                        report.max_jacobian_error = err;
                        report.worst_mode = v;
                        report.worst_probe = probe;
                    }
                }
            }
        }
        const Vector grad = system.cost_gradient(x);
        for (Eigen::Index col = 0; col < n; ++col) {
            const double h = step * std::max(1.0, std::abs(x[col]));
            Vector up = x;
            Vector down = x;
            up[col] += h;
            down[col] -= h;
            const double fd = (system.cost(up) - system.cost(down)) / (2.0 * h);
            report.max_gradient_error = std::max(report.max_gradient_error, mixed_error(grad[col], fd));
        }
    }
    return report;
}

}  // namespace modeswitch
