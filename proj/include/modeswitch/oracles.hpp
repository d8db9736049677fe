#pragma once

#include "modeswitch/schedule.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace modeswitch {

/// (J~(lambda) - J~(0)) / lambda where J~(lambda) is the cost after running mode w on
/// [t_cell, t_cell + lambda). lambda must be a positive multiple of dt; throws OutOfRange
/// when the window leaves the horizon.
[[nodiscard]] double fd_insertion_gradient(const SwitchedSystem& system, const Schedule& schedule,
                                           const Vector& x0, std::size_t cell, ModeIndex w,
                                           double lambda);

struct FDProbe {
    std::size_t cell = 0;
    ModeIndex mode = 0;
    double analytic = 0.0;
    double fd_quotient = 0.0;
    double lambda = 0.0;
    /// |analytic - fd| / max(|analytic|, |fd|); empty when both magnitudes are below 1e-4.
    std::optional<double> relative_error;
};

/// Random (cell, mode) probes comparing the insertion gradient against fd_insertion_gradient
/// with lambda = dt. Cells are drawn uniformly from [0, N - 1], the inserted mode uniformly
/// from the modes other than the cell's own; the seed fixes the draw.
[[nodiscard]] std::vector<FDProbe> fd_probes(const SwitchedSystem& system,
                                             const Schedule& schedule, const Vector& x0,
                                             std::size_t count, std::uint64_t seed);

/// Smooth objective for the classic (vector-space) Armijo reference.
struct SmoothObjective {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
};

enum class ClassicArmijoStatus { GradientVanished, MaxIters, BacktrackLimit };

struct ClassicArmijoStep {
    Vector point;
    double value = 0.0;
    double grad_norm = 0.0;
    int j = 0;            // j(x)
    double lambda = 0.0;  // beta^j * |grad f|
    double next_value = 0.0;
};

struct ClassicArmijoResult {
    std::vector<ClassicArmijoStep> steps;  // one per accepted step
    Vector final_point;
    double final_value = 0.0;
    double final_grad_norm = 0.0;
    ClassicArmijoStatus status = ClassicArmijoStatus::MaxIters;
};

/// Steepest descent with the Armijo step: j(x) is the least j with
/// f(x - beta^j grad) - f(x) <= -alpha beta^j |grad|^2, then x <- x - beta^j grad.
/// Stops with GradientVanished once |grad| < grad_tol.
[[nodiscard]] ClassicArmijoResult classic_armijo_descent(const SmoothObjective& objective,
                                                         const Vector& x0, double alpha,
                                                         double beta, int max_iters,
                                                         double grad_tol = 1e-12,
                                                         int max_backtracks = 200);

struct BruteForceResult {
    Schedule best;
    double best_cost = 0.0;
    std::size_t evaluated = 0;
};

/// Enumerates all m^N cell assignments in lexicographic order (cell 0 most significant)
/// and returns the cheapest, keeping the first on ties. Throws BudgetExceeded when
/// m^N > budget.
[[nodiscard]] BruteForceResult brute_force_best_schedule(const SwitchedSystem& system,
                                                         const Vector& x0, const TimeGrid& grid,
                                                         std::size_t budget = std::size_t{1} << 20);

struct SmoothnessReport {
    std::vector<double> gammas;
    /// (J(2g) - 2 J(g) + J(0)) / g^2 for each gamma g, flipping [s1, s1 + .).
    std::vector<double> second_differences;
    /// |D_{sigma(g),s} - D_{sigma,s}| / g at the probe cell.
    std::vector<double> lipschitz_ratios;
    /// Same ratio for a flip split into two equal intervals, divided by the flipped measure.
    std::vector<double> multi_interval_ratios;
};

/// Probes the regularity of J and D under flips inside one constant-mode block
/// [block.begin, block.end). `probe_cell` must lie at or after block.end. Each gamma must be a
/// positive multiple of 2*dt with 2*gamma fitting in the block. Throws BadInterval if the block
/// spans a switch or the geometry does not fit.
[[nodiscard]] SmoothnessReport smoothness_probe(const SwitchedSystem& system,
                                                const Schedule& schedule, const Vector& x0,
                                                CellInterval block, std::size_t probe_cell,
                                                std::span<const double> gammas);

/// max(max / median, median / min) for a positive sequence; infinity if any value is <= 0.
[[nodiscard]] double median_spread(std::span<const double> values);

/// True when median_spread(values) <= factor.
[[nodiscard]] bool within_factor_of_median(std::span<const double> values, double factor);

}  // namespace modeswitch
