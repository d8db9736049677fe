#pragma once

#include "modeswitch/switched_system.hpp"
#include "modeswitch/time_grid.hpp"

namespace modeswitch {

class Schedule;

/// State samples x(t_0..t_N), one column per sample.
struct Trajectory {
    TimeGrid grid;
    Matrix samples;

    [[nodiscard]] Vector at(std::size_t i) const { return samples.col(static_cast<Eigen::Index>(i)); }
};

/// Costate samples p(t_0..t_N); the last column is exactly zero.
struct CostatePath {
    TimeGrid grid;
    Matrix samples;

    [[nodiscard]] Vector at(std::size_t i) const { return samples.col(static_cast<Eigen::Index>(i)); }
};

/// Forward Euler: x_{i+1} = x_i + dt * f(x_i, mode of cell i).
/// Throws NonFiniteState as soon as a sample is not finite.
[[nodiscard]] Trajectory simulate_state(const SwitchedSystem& system, const Schedule& schedule,
                                        const Vector& x0);

/// Left Riemann sum of L over the trajectory samples 0..N-1.
[[nodiscard]] double evaluate_cost(const SwitchedSystem& system, const Trajectory& trajectory);

/// Same sum restricted to cells [first, last).
[[nodiscard]] double evaluate_cost(const SwitchedSystem& system, const Trajectory& trajectory,
                                   std::size_t first, std::size_t last);

/// Backward explicit Euler on p' = -(df/dx)^T p - (dL/dx)^T with p(T) = 0, the Jacobian
/// and cost gradient taken at the left sample of each cell.
[[nodiscard]] CostatePath integrate_costate(const SwitchedSystem& system, const Schedule& schedule,
                                            const Trajectory& trajectory);

/// simulate_state followed by evaluate_cost.
[[nodiscard]] double schedule_cost(const SwitchedSystem& system, const Schedule& schedule,
                                   const Vector& x0);

}  // namespace modeswitch
