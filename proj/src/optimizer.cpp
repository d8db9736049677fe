#include "modeswitch/optimizer.hpp"

#include "modeswitch/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace modeswitch {

std::string_view to_string(SelectionRule rule) noexcept {
    switch (rule) {
        case SelectionRule::Leftmost: return "leftmost";
        case SelectionRule::MostNegativeFirst: return "most_negative_first";
    }
    return "unknown";
}

std::optional<SelectionRule> parse_selection_rule(std::string_view text) noexcept {
    if (text == "leftmost") {
        return SelectionRule::Leftmost;
    }
    if (text == "most_negative_first") {
        return SelectionRule::MostNegativeFirst;
    }
    return std::nullopt;
}

std::string_view to_string(TerminalStatus status) noexcept {
    switch (status) {
        case TerminalStatus::Converged: return "Converged";
        case TerminalStatus::MaxIters: return "MaxIters";
        case TerminalStatus::StepSizeUnderflow: return "StepSizeUnderflow";
        case TerminalStatus::NonFiniteState: return "NonFiniteState";
    }
    return "Unknown";
}

std::vector<std::string> OptimizerParams::validate() const {
    auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!open_unit(alpha)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    if (!open_unit(beta)) {
        throw std::invalid_argument("beta must lie in (0, 1)");
    }
    if (!open_unit(eta)) {
        throw std::invalid_argument("eta must lie in (0, 1)");
    }
    if (max_iters < 0) {
        throw std::invalid_argument("max_iters must be >= 0");
    }
    if (!(d_tol >= 0.0) || !std::isfinite(d_tol)) {
        throw std::invalid_argument("d_tol must be finite and >= 0");
    }
    if (max_backtracks < 0) {
        throw std::invalid_argument("max_backtracks must be >= 0");
    }
    std::vector<std::string> warnings;
    if (alpha >= eta) {
        warnings.emplace_back("alpha >= eta: sufficient descent is no longer guaranteed");
    }
    return warnings;
}

CellSet select_subset(const CellSet& eta_set, double lambda, double dt, SelectionRule rule,
                      std::span<const double> values) {
    const std::size_t available = eta_set.cell_count();
    if (available == 0) {
        throw std::invalid_argument("select_subset: empty level set");
    }
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("select_subset: lambda must be > 0");
    }
    auto wanted = static_cast<std::size_t>(std::floor(lambda / dt + 1e-9));
    wanted = std::clamp<std::size_t>(wanted, 1, available);

    std::vector<std::size_t> cells = eta_set.cells();
    if (rule == SelectionRule::MostNegativeFirst) {
        if (values.empty()) {
            throw std::invalid_argument("select_subset: most_negative_first needs profile values");
        }
        std::stable_sort(cells.begin(), cells.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    }
    cells.resize(wanted);
    return CellSet::from_cells(std::move(cells));
}

namespace {

double candidate_cost(const SwitchedSystem& system, const Schedule& candidate, const Vector& x0) {
    try {
        return schedule_cost(system, candidate, x0);
    } catch (const NonFiniteState&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace

ArmijoStep armijo_step(const SwitchedSystem& system, const Schedule& schedule, const Vector& x0,
                       double current_cost, const GradientProfile& profile, const CellSet& eta_set,
                       const OptimizerParams& params) {
    const double dt = schedule.grid().dt();
    const double mu = eta_set.measure(dt);
    ArmijoStep result;
    std::size_t previous_cells = 0;
    int one_cell_rejections = 0;

    for (int j = 0; j <= params.max_backtracks; ++j) {
        result.backtracks = j;
        const double lambda_j = std::pow(params.beta, j) * mu;
        const CellSet subset =
            select_subset(eta_set, lambda_j, dt, params.selection_rule, profile.values);
        const std::size_t cells = subset.cell_count();
        // Consecutive j that quantize to the same subset give the same verdict.
        if (cells != previous_cells) {
            const double lambda_q = subset.measure(dt);
            Schedule candidate = flip_set(schedule, subset, profile.best_mode);
            const double cost = candidate_cost(system, candidate, x0);
            if (cost - current_cost <= params.alpha * lambda_q * profile.d_sigma) {
                result.accepted = true;
                result.next = std::move(candidate);
                result.lambda = lambda_q;
                result.next_cost = cost;
                return result;
            }
        }
        previous_cells = cells;
        if (cells == 1 && ++one_cell_rejections >= 2) {
            break;
        }
    }
    return result;
}

OptimizationResult optimize(const SwitchedSystem& system, const Schedule& initial_schedule,
                            const OptimizerParams& params, const Vector& x0,
                            const IterationCallback& on_iteration) {
    (void)params.validate();
    const auto started = std::chrono::steady_clock::now();
    OptimizationResult result{initial_schedule, {}};
    RunTrace& trace = result.trace;

    auto finish = [&](TerminalStatus status) {
        trace.status = status;
        trace.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };
    auto emit = [&](const IterationRecord& rec) {
        trace.records.push_back(rec);
        if (on_iteration) {
            on_iteration(rec);
        }
    };

    for (int k = 0;; ++k) {
        std::optional<ScheduleAnalysis> evaluated;
        try {
            evaluated = analyze_schedule(system, result.schedule, x0);
        } catch (const NonFiniteState& e) {
            trace.message = e.what();
            trace.final_cost = std::numeric_limits<double>::quiet_NaN();
            trace.final_d_sigma = std::numeric_limits<double>::quiet_NaN();
            finish(TerminalStatus::NonFiniteState);
            return result;
        }
        const ScheduleAnalysis& analysis = *evaluated;
        trace.final_cost = analysis.cost;
        trace.final_d_sigma = analysis.profile.d_sigma;
        if (k == params.max_iters) {
            finish(TerminalStatus::MaxIters);
            return result;
        }

        IterationRecord rec;
        rec.k = k;
        rec.cost = analysis.cost;
        rec.d_sigma = analysis.profile.d_sigma;
        rec.switch_count = switch_count(result.schedule);

        if (analysis.profile.d_sigma >= -params.d_tol) {
            emit(rec);
            finish(TerminalStatus::Converged);
            return result;
        }

        const CellSet eta_set = eta_level_set(analysis.profile, params.eta);
        rec.mu_eta = eta_set.measure(result.schedule.grid().dt());
        rec.alt_optimality = rec.d_sigma * rec.mu_eta;

        ArmijoStep step = armijo_step(system, result.schedule, x0, analysis.cost, analysis.profile,
                                      eta_set, params);
        rec.backtracks = step.backtracks;
        if (!step.accepted) {
            emit(rec);
            trace.message = "no one-cell flip of the level set satisfies the Armijo test";
            finish(TerminalStatus::StepSizeUnderflow);
            return result;
        }
        rec.lambda = step.lambda;
        emit(rec);
        result.schedule = std::move(*step.next);
    }
}

}  // namespace modeswitch
