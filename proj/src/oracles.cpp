#include "modeswitch/oracles.hpp"

#include "modeswitch/dynamics.hpp"
#include "modeswitch/errors.hpp"
#include "modeswitch/insertion_gradient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace modeswitch {

double fd_insertion_gradient(const SwitchedSystem& system, const Schedule& schedule,
                             const Vector& x0, std::size_t cell, ModeIndex w, double lambda) {
    const TimeGrid& grid = schedule.grid();
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("fd_insertion_gradient: lambda must be > 0");
    }
    const std::size_t window = grid.cells_for(lambda);
    if (window == 0 || std::abs(static_cast<double>(window) * grid.dt() - lambda) >
                           1e-9 * std::max(1.0, lambda)) {
        throw std::invalid_argument("fd_insertion_gradient: lambda must be a multiple of dt");
    }
    if (cell >= grid.n_cells() || cell + window > grid.n_cells()) {
        throw OutOfRange("fd_insertion_gradient: insertion window leaves the horizon");
    }
    if (w >= schedule.mode_count()) {
        throw std::invalid_argument("fd_insertion_gradient: unknown mode");
    }
    std::vector<ModeIndex> modes(schedule.cell_modes().begin(), schedule.cell_modes().end());
    std::fill_n(modes.begin() + static_cast<std::ptrdiff_t>(cell), window, w);
    const Schedule inserted(grid, std::move(modes), schedule.mode_count());

    const double base = schedule_cost(system, schedule, x0);
    const double perturbed = schedule_cost(system, inserted, x0);
    return (perturbed - base) / (static_cast<double>(window) * grid.dt());
}

std::vector<FDProbe> fd_probes(const SwitchedSystem& system, const Schedule& schedule,
                               const Vector& x0, std::size_t count, std::uint64_t seed) {
    const ScheduleAnalysis base = analyze_schedule(system, schedule, x0);
    const double dt = schedule.grid().dt();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_cell(0, schedule.n_cells() - 1);
    // Only modes other than the current one; the current mode's gradient is zero by definition.
    std::uniform_int_distribution<ModeIndex> pick_other(1, schedule.mode_count() - 1);

    std::vector<FDProbe> probes;
    probes.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        FDProbe probe;
        probe.cell = pick_cell(rng);
        probe.mode = (schedule[probe.cell] + pick_other(rng)) % schedule.mode_count();
        probe.lambda = dt;
        probe.analytic = insertion_gradient_at(system, base.trajectory.at(probe.cell),
                                               base.costate.at(probe.cell), schedule[probe.cell],
                                               probe.mode);
        probe.fd_quotient =
            fd_insertion_gradient(system, schedule, x0, probe.cell, probe.mode, dt);
        const double scale = std::max(std::abs(probe.analytic), std::abs(probe.fd_quotient));
        if (scale > 1e-4) {
            probe.relative_error = std::abs(probe.analytic - probe.fd_quotient) / scale;
        }
        probes.push_back(probe);
    }
    return probes;
}

ClassicArmijoResult classic_armijo_descent(const SmoothObjective& objective, const Vector& x0,
                                           double alpha, double beta, int max_iters,
                                           double grad_tol, int max_backtracks) {
    ClassicArmijoResult result;
    Vector x = x0;
    double fx = objective.value(x);
    result.status = ClassicArmijoStatus::MaxIters;

    for (int k = 0; k < max_iters; ++k) {
        const Vector g = objective.gradient(x);
        const double gn = g.norm();
        if (gn < grad_tol) {
            result.status = ClassicArmijoStatus::GradientVanished;
            break;
        }
        bool accepted = false;
        for (int j = 0; j <= max_backtracks; ++j) {
            const double t = std::pow(beta, j);
            Vector candidate = x - t * g;
            const double fc = objective.value(candidate);
            if (fc - fx <= -alpha * t * gn * gn) {
                result.steps.push_back({x, fx, gn, j, t * gn, fc});
                x = std::move(candidate);
                fx = fc;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            result.status = ClassicArmijoStatus::BacktrackLimit;
            break;
        }
    }
    result.final_point = x;
    result.final_value = fx;
    result.final_grad_norm = objective.gradient(x).norm();
    if (result.status == ClassicArmijoStatus::MaxIters && result.final_grad_norm < grad_tol) {
        result.status = ClassicArmijoStatus::GradientVanished;
    }
    return result;
}

BruteForceResult brute_force_best_schedule(const SwitchedSystem& system, const Vector& x0,
                                           const TimeGrid& grid, std::size_t budget) {
    const std::size_t m = system.mode_count();
    const std::size_t n = grid.n_cells();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > budget / m) {
            throw BudgetExceeded("brute force: " + std::to_string(m) + "^" + std::to_string(n) +
                                 " schedules exceed the budget of " + std::to_string(budget));
        }
        total *= m;
    }

    std::vector<ModeIndex> digits(n, 0);
    BruteForceResult result{Schedule(grid, digits, m), std::numeric_limits<double>::infinity(), 0};
    for (std::size_t count = 0; count < total; ++count) {
        Schedule candidate(grid, digits, m);
        double cost = std::numeric_limits<double>::infinity();
        try {
            cost = schedule_cost(system, candidate, x0);
        } catch (const NonFiniteState&) {
        }
        ++result.evaluated;
        if (cost < result.best_cost) {
            result.best_cost = cost;
            result.best = std::move(candidate);
        }
        // Odometer increment, last cell fastest: lexicographic order with cell 0 most significant.
        for (std::size_t pos = n; pos > 0; --pos) {
            if (++digits[pos - 1] < m) {
                break;
            }
            digits[pos - 1] = 0;
        }
    }
    return result;
}

namespace {

Schedule flip_range(const Schedule& schedule, std::size_t begin, std::size_t end, ModeIndex target) {
    std::vector<ModeIndex> modes(schedule.cell_modes().begin(), schedule.cell_modes().end());
    std::fill(modes.begin() + static_cast<std::ptrdiff_t>(begin),
              modes.begin() + static_cast<std::ptrdiff_t>(end), target);
    return Schedule(schedule.grid(), std::move(modes), schedule.mode_count());
}

double gradient_at_cell(const SwitchedSystem& system, const Schedule& schedule, const Vector& x0,
                        std::size_t cell, ModeIndex w) {
    const Trajectory traj = simulate_state(system, schedule, x0);
    const CostatePath costate = integrate_costate(system, schedule, traj);
    return insertion_gradient_at(system, traj.at(cell), costate.at(cell), schedule[cell], w);
}

}  // namespace

SmoothnessReport smoothness_probe(const SwitchedSystem& system, const Schedule& schedule,
                                  const Vector& x0, CellInterval block, std::size_t probe_cell,
                                  std::span<const double> gammas) {
    const std::size_t n_cells = schedule.n_cells();
    if (block.begin >= block.end || block.end > n_cells) {
        throw BadInterval("smoothness probe: block outside the grid");
    }
    const ModeIndex block_mode = schedule[block.begin];
    for (std::size_t c = block.begin; c < block.end; ++c) {
        if (schedule[c] != block_mode) {
            throw BadInterval("smoothness probe: block spans a switch at cell " + std::to_string(c));
        }
    }
    if (probe_cell < block.end || probe_cell >= n_cells) {
        throw BadInterval("smoothness probe: probe cell must lie after the block");
    }

    const double dt = schedule.grid().dt();
    const std::size_t length = block.end - block.begin;
    const ModeIndex target = (block_mode + 1) % schedule.mode_count();
    const ModeIndex probe_current = schedule[probe_cell];
    const ModeIndex probe_mode = (probe_current + 1) % schedule.mode_count();

    const double j0 = schedule_cost(system, schedule, x0);
    const double d0 = gradient_at_cell(system, schedule, x0, probe_cell, probe_mode);

    SmoothnessReport report;
    for (double gamma : gammas) {
        report.gammas.push_back(gamma);
        if (gamma == 0.0) {
            report.second_differences.push_back(0.0);
            report.lipschitz_ratios.push_back(0.0);
            report.multi_interval_ratios.push_back(0.0);
            continue;
        }
        const std::size_t g = gamma > 0.0 ? schedule.grid().cells_for(gamma) : 0;
        if (g == 0 || g % 2 != 0 ||
            std::abs(static_cast<double>(g) * dt - gamma) > 1e-9 * std::max(1.0, gamma)) {
            throw BadInterval("smoothness probe: gamma must be a positive multiple of 2*dt");
        }
        if (2 * g > length || length / 2 + g / 2 > length) {
            throw BadInterval("smoothness probe: gamma too large for the block");
        }
        const double lambda = static_cast<double>(g) * dt;

        const Schedule once = flip_range(schedule, block.begin, block.begin + g, target);
        const Schedule twice = flip_range(schedule, block.begin, block.begin + 2 * g, target);
        const double j1 = schedule_cost(system, once, x0);
        const double j2 = schedule_cost(system, twice, x0);
        report.second_differences.push_back((j2 - 2.0 * j1 + j0) / (lambda * lambda));

        const double d1 = gradient_at_cell(system, once, x0, probe_cell, probe_mode);
        report.lipschitz_ratios.push_back(std::abs(d1 - d0) / lambda);

        const std::size_t half = g / 2;
        const std::size_t second = block.begin + length / 2;
        Schedule split = flip_range(schedule, block.begin, block.begin + half, target);
        split = flip_range(split, second, second + half, target);
        const double d2 = gradient_at_cell(system, split, x0, probe_cell, probe_mode);
        report.multi_interval_ratios.push_back(std::abs(d2 - d0) / lambda);
    }
    return report;
}

double median_spread(std::span<const double> values) {
    if (values.empty()) {
        return 1.0;
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    const double median =
        sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    if (median == 0.0) {
        return sorted.front() == 0.0 && sorted.back() == 0.0
                   ? 1.0
                   : std::numeric_limits<double>::infinity();
    }
    if (sorted.front() <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max(sorted.back() / median, median / sorted.front());
}

bool within_factor_of_median(std::span<const double> values, double factor) {
    return median_spread(values) <= factor;
}

}  // namespace modeswitch
