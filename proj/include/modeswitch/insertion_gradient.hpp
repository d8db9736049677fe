#pragma once

#include "modeswitch/dynamics.hpp"
#include "modeswitch/schedule.hpp"

#include <vector>

namespace modeswitch {

/// D_{sigma,s,w} = p(s)^T (f(x(s), w) - f(x(s), v(s))). Exactly zero when w == current.
[[nodiscard]] double insertion_gradient_at(const SwitchedSystem& system, const Vector& x,
                                           const Vector& p, ModeIndex current, ModeIndex w);

/// Per-cell minima of the insertion gradient, sampled at each cell's left edge.
struct GradientProfile {
    std::vector<double> values;        // D_{sigma,s} per cell, always <= 0
    std::vector<ModeIndex> best_mode;  // minimizing w per cell, lowest index on ties
    double d_sigma = 0.0;              // min over cells
    std::size_t argmin_cell = 0;       // lowest cell attaining d_sigma
};

[[nodiscard]] GradientProfile gradient_profile(const SwitchedSystem& system,
                                               const Schedule& schedule,
                                               const Trajectory& trajectory,
                                               const CostatePath& costate);

/// S_{sigma,eta}: cells with D_{sigma,s} <= eta * D_sigma. Contains argmin_cell.
/// Throws NotDescendable if D_sigma >= 0 and std::invalid_argument if eta is outside (0, 1).
[[nodiscard]] CellSet eta_level_set(const GradientProfile& profile, double eta);

/// S_{sigma,0}: cells with D_{sigma,s} < 0 strictly. May be empty.
[[nodiscard]] CellSet negative_set(const GradientProfile& profile);

/// Everything Step 1 of the descent loop needs for one schedule.
struct ScheduleAnalysis {
    Trajectory trajectory;
    CostatePath costate;
    double cost = 0.0;
    GradientProfile profile;
};

[[nodiscard]] ScheduleAnalysis analyze_schedule(const SwitchedSystem& system,
                                                const Schedule& schedule, const Vector& x0);

}  // namespace modeswitch
