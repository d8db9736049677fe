#pragma once

#include "modeswitch/insertion_gradient.hpp"
#include "modeswitch/schedule.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace modeswitch {

/// How S(lambda) picks a subset of the eta-level set with a prescribed measure.
enum class SelectionRule {
    Leftmost,           // cells in ascending time order
    MostNegativeFirst,  // cells in ascending D_{sigma,s}, ties by ascending index
};

[[nodiscard]] std::string_view to_string(SelectionRule rule) noexcept;
[[nodiscard]] std::optional<SelectionRule> parse_selection_rule(std::string_view text) noexcept;

struct OptimizerParams {
    double alpha = 0.5;
    double beta = 0.5;
    double eta = 0.6;
    int max_iters = 100;
    double d_tol = 1e-3;
    int max_backtracks = 40;
    SelectionRule selection_rule = SelectionRule::Leftmost;

    /// Throws std::invalid_argument on domain violations. Returns advisory warnings,
    /// e.g. alpha >= eta, which voids the sufficient-descent guarantee but is allowed.
    std::vector<std::string> validate() const;
};

/// S(lambda): subset of `eta_set` with floor(lambda/dt) cells (at least one, at most all).
/// `values` are the per-cell D_{sigma,s}, used only by MostNegativeFirst.
[[nodiscard]] CellSet select_subset(const CellSet& eta_set, double lambda, double dt,
                                    SelectionRule rule, std::span<const double> values = {});

struct ArmijoStep {
    bool accepted = false;      // false means StepSizeUnderflow
    std::optional<Schedule> next;
    double lambda = 0.0;        // measure actually flipped
    int backtracks = 0;         // j(sigma)
    double next_cost = 0.0;
};

/// Backtracks lambda_j = beta^j * mu(eta_set) and accepts the first candidate with
/// J(candidate) - J(schedule) <= alpha * lambda_q * D_sigma, lambda_q being the measure
/// flipped after cell quantization. Flipped cells take the profile's minimizing mode.
/// Returns accepted == false when j passes max_backtracks or two consecutive one-cell
/// candidates are rejected.
[[nodiscard]] ArmijoStep armijo_step(const SwitchedSystem& system, const Schedule& schedule,
                                     const Vector& x0, double current_cost,
                                     const GradientProfile& profile, const CellSet& eta_set,
                                     const OptimizerParams& params);

enum class TerminalStatus { Converged, MaxIters, StepSizeUnderflow, NonFiniteState };

[[nodiscard]] std::string_view to_string(TerminalStatus status) noexcept;

struct IterationRecord {
    int k = 0;
    double cost = 0.0;
    double d_sigma = 0.0;
    double mu_eta = 0.0;        // mu(S_{sigma,eta}) in seconds, 0 when not computed
    double lambda = 0.0;        // accepted measure, 0 when no step was taken
    int backtracks = 0;
    std::size_t switch_count = 0;
    double alt_optimality = 0.0;  // D_sigma * mu(S_{sigma,eta})
};

struct RunTrace {
    std::vector<IterationRecord> records;
    TerminalStatus status = TerminalStatus::MaxIters;
    std::string message;
    double final_cost = 0.0;
    double final_d_sigma = 0.0;
    double wall_seconds = 0.0;
};

struct OptimizationResult {
    Schedule schedule;
    RunTrace trace;
};

using IterationCallback = std::function<void(const IterationRecord&)>;

/// Descent in schedule space: evaluate, stop when D_sigma >= -d_tol, otherwise take one
/// Armijo step on the eta-level set; repeat up to max_iters steps.
///
/// NonFiniteState and StepSizeUnderflow end the run with the corresponding status and the
/// trace accumulated so far.
[[nodiscard]] OptimizationResult optimize(const SwitchedSystem& system,
                                          const Schedule& initial_schedule,
                                          const OptimizerParams& params, const Vector& x0,
                                          const IterationCallback& on_iteration = {});

}  // namespace modeswitch
