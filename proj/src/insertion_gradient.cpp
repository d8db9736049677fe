#include "modeswitch/insertion_gradient.hpp"

#include "modeswitch/errors.hpp"

#include <stdexcept>

namespace modeswitch {

double insertion_gradient_at(const SwitchedSystem& system, const Vector& x, const Vector& p,
                             ModeIndex current, ModeIndex w) {
    if (w == current) {
        return 0.0;
    }
    return p.dot(system.field(x, w) - system.field(x, current));
}

GradientProfile gradient_profile(const SwitchedSystem& system, const Schedule& schedule,
                                 const Trajectory& trajectory, const CostatePath& costate) {
    const std::size_t n_cells = schedule.n_cells();
    if (trajectory.grid.n_cells() != n_cells || costate.grid.n_cells() != n_cells) {
        throw DimensionMismatch("gradient_profile: trajectory, costate and schedule disagree");
    }
    GradientProfile profile;
    profile.values.resize(n_cells);
    profile.best_mode.resize(n_cells);

    std::vector<Vector> fields(system.mode_count());
    for (std::size_t i = 0; i < n_cells; ++i) {
        const Vector x = trajectory.at(i);
        const Vector p = costate.at(i);
        for (ModeIndex w = 0; w < system.mode_count(); ++w) {
            fields[w] = system.field(x, w);
        }
        const ModeIndex current = schedule[i];
        double best = 0.0;
        ModeIndex best_w = current;
        for (ModeIndex w = 0; w < system.mode_count(); ++w) {
            const double d = w == current ? 0.0 : p.dot(fields[w] - fields[current]);
            // Ascending scan with strict comparison: lowest index wins ties among negative
            // values; a zero minimum keeps the current mode.
            if (d < best) {
                best = d;
                best_w = w;
            }
        }
        profile.values[i] = best;
        profile.best_mode[i] = best_w;
        if (best < profile.d_sigma) {
            profile.d_sigma = best;
            profile.argmin_cell = i;
        }
    }
    return profile;
}

CellSet eta_level_set(const GradientProfile& profile, double eta) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw std::invalid_argument("eta_level_set: eta must lie in (0, 1)");
    }
    if (!(profile.d_sigma < 0.0)) {
        throw NotDescendable("eta_level_set: D_sigma >= 0, the schedule is stationary");
    }
    const double threshold = eta * profile.d_sigma;
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        if (profile.values[i] <= threshold) {
            cells.push_back(i);
        }
    }
    return CellSet::from_cells(std::move(cells));
}

CellSet negative_set(const GradientProfile& profile) {
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        if (profile.values[i] < 0.0) {
            cells.push_back(i);
        }
    }
    return CellSet::from_cells(std::move(cells));
}

ScheduleAnalysis analyze_schedule(const SwitchedSystem& system, const Schedule& schedule,
                                  const Vector& x0) {
    Trajectory traj = simulate_state(system, schedule, x0);
    const double cost = evaluate_cost(system, traj);
    CostatePath costate = integrate_costate(system, schedule, traj);
    GradientProfile profile = gradient_profile(system, schedule, traj, costate);
    return {std::move(traj), std::move(costate), cost, std::move(profile)};
}

}  // namespace modeswitch
