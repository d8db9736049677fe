#include "modeswitch/dynamics.hpp"

#include "modeswitch/errors.hpp"
#include "modeswitch/schedule.hpp"

#include <string>

namespace modeswitch {

namespace {

void require_finite(const Eigen::Ref<const Vector>& v, const char* what, std::size_t sample) {
    if (!v.allFinite()) {
        throw NonFiniteState(std::string(what) + " left the finite range at sample " +
                             std::to_string(sample));
    }
}

}  // namespace

Trajectory simulate_state(const SwitchedSystem& system, const Schedule& schedule, const Vector& x0) {
    const TimeGrid& grid = schedule.grid();
    const auto n = static_cast<Eigen::Index>(system.state_dim());
    if (x0.size() != n) {
        throw DimensionMismatch("simulate_state: x0 has dimension " + std::to_string(x0.size()) +
                                ", system expects " + std::to_string(n));
    }
    if (schedule.mode_count() != system.mode_count()) {
        throw DimensionMismatch("simulate_state: schedule and system disagree on mode count");
    }
    require_finite(x0, "state", 0);

    Trajectory traj{grid, Matrix(n, static_cast<Eigen::Index>(grid.n_samples()))};
    traj.samples.col(0) = x0;
    const double dt = grid.dt();
    Vector x = x0;
    for (std::size_t i = 0; i < grid.n_cells(); ++i) {
        const Vector dx = system.field(x, schedule[i]);
        if (dx.size() != n) {
            throw DimensionMismatch("simulate_state: mode field returned wrong dimension");
        }
        x += dt * dx;
        require_finite(x, "state", i + 1);
        traj.samples.col(static_cast<Eigen::Index>(i + 1)) = x;
    }
    return traj;
}

double evaluate_cost(const SwitchedSystem& system, const Trajectory& trajectory) {
    return evaluate_cost(system, trajectory, 0, trajectory.grid.n_cells());
}

double evaluate_cost(const SwitchedSystem& system, const Trajectory& trajectory, std::size_t first,
                     std::size_t last) {
    if (first > last || last > trajectory.grid.n_cells()) {
        throw OutOfRange("evaluate_cost: cell range outside the grid");
    }
    double sum = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        sum += system.cost(trajectory.samples.col(static_cast<Eigen::Index>(i)));
    }
    return sum * trajectory.grid.dt();
}

CostatePath integrate_costate(const SwitchedSystem& system, const Schedule& schedule,
                              const Trajectory& trajectory) {
    const TimeGrid& grid = schedule.grid();
    if (!(trajectory.grid == grid)) {
        throw DimensionMismatch("integrate_costate: trajectory and schedule use different grids");
    }
    const auto n = static_cast<Eigen::Index>(system.state_dim());
    const std::size_t last = grid.n_cells();
    CostatePath path{grid, Matrix::Zero(n, static_cast<Eigen::Index>(grid.n_samples()))};
    const double dt = grid.dt();
    Vector p = Vector::Zero(n);
    for (std::size_t step = last; step > 0; --step) {
        const std::size_t i = step - 1;
        const Vector x = trajectory.at(i);
        const Matrix a = system.jacobian(x, schedule[i]);
        const Vector g = system.cost_gradient(x);
        p = p + dt * (a.transpose() * p + g);
        require_finite(p, "costate", i);
        path.samples.col(static_cast<Eigen::Index>(i)) = p;
    }
    return path;
}

double schedule_cost(const SwitchedSystem& system, const Schedule& schedule, const Vector& x0) {
    return evaluate_cost(system, simulate_state(system, schedule, x0));
}

}  // namespace modeswitch
