#include "modeswitch/validation.hpp"

#include "modeswitch/dynamics.hpp"
#include "modeswitch/errors.hpp"
#include "modeswitch/insertion_gradient.hpp"
#include "modeswitch/models.hpp"
#include "modeswitch/optimizer.hpp"
#include "modeswitch/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace modeswitch {
namespace {

constexpr double kJacobianTolerance = 1e-5;
constexpr double kFdTolerance = 1e-2;
constexpr std::size_t kFdDraws = 100;
constexpr std::size_t kFdMinAssessed = 50;
// The default grid's one-sided quotient carries an O(dt) bias comparable to the
// tolerance wherever |D| is small; the probe grid is refined until that bias is negligible.
constexpr double kFdProbeDt = 1e-4;
constexpr double kSmoothnessFactor = 3.0;

std::string format(const char* fmt, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return buf;
}

ValidationCheck make_check(std::string name, double measured, double threshold, bool passed,
                           std::string detail) {
    return {std::move(name), measured, threshold, passed, std::move(detail)};
}

ModelSpec double_tank_under_test(bool perturb) {
    ModelSpec spec = make_double_tank();
    if (perturb) {
        for (ModeIndex v = 0; v < spec.system.mode_count(); ++v) {
            auto jac = spec.system.mode(v).jacobian;
            spec.system = spec.system.with_jacobian(
                v, [jac](const Vector& x) -> Matrix { return 1.5 * jac(x); });
        }
    }
    return spec;
}

Schedule default_schedule(const ModelSpec& spec, double dt) {
    return schedule_from_blocks(spec.default_blocks, TimeGrid(spec.default_horizon, dt),
                                spec.system.mode_count());
}

ValidationCheck jacobian_check(const ModelSpec& tank, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coord(0.5, 4.5);
    double worst = 0.0;
    std::string worst_name;
    std::vector<ModelSpec> models{tank, make_scalar_tracking(), make_trimodal_example()};
    for (const ModelSpec& spec : models) {
        std::vector<Vector> probes{spec.default_x0};
        for (int i = 0; i < 16; ++i) {
            Vector x(static_cast<Eigen::Index>(spec.system.state_dim()));
            for (Eigen::Index k = 0; k < x.size(); ++k) {
                x[k] = coord(rng);
            }
            probes.push_back(x);
        }
        const double err = check_jacobians(spec.system, probes).max_error();
        if (err >= worst) {
            worst = err;
            worst_name = spec.name;
        }
    }
    return make_check("jacobian_builtin_models", worst, kJacobianTolerance,
                      worst <= kJacobianTolerance, "worst model: " + worst_name);
}

ValidationCheck fd_check(const ModelSpec& tank, std::uint64_t seed) {
    const Schedule schedule = default_schedule(tank, kFdProbeDt);
    const auto probes = fd_probes(tank.system, schedule, tank.default_x0, kFdDraws, seed);
    std::size_t assessed = 0;
    std::size_t failed = 0;
    double worst = 0.0;
    for (const FDProbe& p : probes) {
        if (!p.relative_error) {
            continue;
        }
        ++assessed;
        worst = std::max(worst, *p.relative_error);
        if (!(*p.relative_error <= kFdTolerance)) {
            ++failed;
        }
    }
    return make_check("fd_insertion_gradient", worst, kFdTolerance,
                      failed == 0 && assessed >= kFdMinAssessed,
                      format("double tank, dt=%g, %zu draws, %zu assessed, %zu above tolerance",
                             kFdProbeDt, probes.size(), assessed, failed));
}

// f(x) = 0.5 x^T H x - c^T x with eigenvalues of H spread over [1, kappa].
struct Quadratic {
    Matrix h;
    Vector c;
    double l;
};

Quadratic random_quadratic(std::mt19937_64& rng, double kappa) {
    std::uniform_int_distribution<int> dim_dist(2, 5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> eig(1.0, kappa);
    const int n = dim_dist(rng);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = unit(rng);
        }
    }
    const Matrix q = Eigen::HouseholderQR<Matrix>(m).householderQ();
    Vector d(n);
    d[0] = 1.0;
    d[1] = kappa;
    for (int i = 2; i < n; ++i) {
        d[i] = eig(rng);
    }
    Vector c(n);
    for (int i = 0; i < n; ++i) {
        c[i] = 5.0 * unit(rng);
    }
    return {q * d.asDiagonal() * q.transpose(), c, kappa};
}

ValidationCheck classic_armijo_check(std::mt19937_64& rng) {
    constexpr double alpha = 0.5;
    constexpr double beta = 0.5;
    constexpr double kappa = 10.0;
    constexpr int instances = 100;
    constexpr int max_iters = 200;
    int descent_violations = 0;
    int bound_violations = 0;
    int slow = 0;
    double worst_grad = 0.0;
    for (int inst = 0; inst < instances; ++inst) {
        const Quadratic quad = random_quadratic(rng, kappa);
        const SmoothObjective obj{
            [&](const Vector& x) { return 0.5 * x.dot(quad.h * x) - quad.c.dot(x); },
            [&](const Vector& x) -> Vector { return quad.h * x - quad.c; }};
        Vector x0(quad.c.size());
        for (Eigen::Index i = 0; i < x0.size(); ++i) {
            x0[i] = 10.0 * std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        }
        const auto result = classic_armijo_descent(obj, x0, alpha, beta, max_iters, 1e-6);
        for (const ClassicArmijoStep& s : result.steps) {
            const double slack = 1e-12 * std::max(1.0, std::abs(s.value));
            if (s.next_value - s.value > -alpha * s.lambda * s.grad_norm + slack) {
                ++descent_violations;
            }
            if (s.lambda < 2.0 / quad.l * beta * (1.0 - alpha) * s.grad_norm * (1.0 - 1e-12)) {
                ++bound_violations;
            }
        }
        if (result.status != ClassicArmijoStatus::GradientVanished) {
            ++slow;
        }
        worst_grad = std::max(worst_grad, result.final_grad_norm);
    }
    return make_check(
        "classic_armijo_quadratics", worst_grad, 1e-6,
        descent_violations == 0 && bound_violations == 0 && slow == 0,
        format("%d quadratics, kappa<=%g: %d descent violations, %d step-bound violations, "
               "%d not below 1e-6 within %d iterations",
               instances, kappa, descent_violations, bound_violations, slow, max_iters));
}

ValidationCheck brute_force_hand_check() {
    const ModelSpec spec = make_scalar_tracking();
    const TimeGrid grid(2.0, 1.0);
    const auto bf = brute_force_best_schedule(spec.system, spec.default_x0, grid);
    // With dt = 1, x_1 = v_0; the left sum never sees x_2, so v_1 changes nothing.
    const double x0 = spec.default_x0[0];
    double hand_best = std::numeric_limits<double>::infinity();
    for (double v0 : {0.0, 2.0}) {
        for ([[maybe_unused]] double v1 : {0.0, 2.0}) {
            const double x1 = x0 + (v0 - x0);
            hand_best = std::min(hand_best, (x0 - 1.0) * (x0 - 1.0) + (x1 - 1.0) * (x1 - 1.0));
        }
    }
    const double err = std::abs(bf.best_cost - hand_best);
    return make_check("brute_force_hand_enumeration", err, 1e-12,
                      err <= 1e-12 && bf.evaluated == 4,
                      format("J*=%.6g over %zu schedules", bf.best_cost, bf.evaluated));
}

ValidationCheck brute_force_optimizer_check() {
    const ModelSpec spec = make_trimodal_example();
    const TimeGrid grid(spec.default_horizon, spec.default_horizon / 10.0);
    const auto bf = brute_force_best_schedule(spec.system, spec.default_x0, grid);
    OptimizerParams params;
    params.max_iters = 200;
    const auto run = optimize(spec.system, Schedule::constant(grid, 0, spec.system.mode_count()),
                              params, spec.default_x0);
    const double gap = (run.trace.final_cost - bf.best_cost) / bf.best_cost;
    return make_check("brute_force_optimizer_gap", gap, 0.05, gap >= -1e-12 && gap <= 0.05,
                      format("trimodal N=10: J*=%.6g, optimizer J=%.6g (%s)", bf.best_cost,
                             run.trace.final_cost,
                             std::string(to_string(run.trace.status)).c_str()));
}

std::vector<ValidationCheck> smoothness_checks() {
    const ModelSpec spec = make_double_tank();
    const Schedule schedule = default_schedule(spec, spec.default_dt);
    const std::vector<double> gammas{0.32, 0.16, 0.08, 0.04, 0.02};
    const auto report =
        smoothness_probe(spec.system, schedule, spec.default_x0, {200, 400}, 500, gammas);
    auto magnitudes = [](std::vector<double> v) {
        for (double& x : v) {
            x = std::abs(x);
        }
        return v;
    };
    std::vector<ValidationCheck> out;
    auto add = [&](const char* name, const std::vector<double>& values) {
        const double spread = median_spread(magnitudes(values));
        out.push_back(make_check(name, spread, kSmoothnessFactor, spread <= kSmoothnessFactor,
                                 format("max(max/median, median/min) over %zu gammas",
                                        values.size())));
    };
    add("smoothness_second_difference", report.second_differences);
    add("smoothness_gradient_lipschitz", report.lipschitz_ratios);
    add("smoothness_multi_interval", report.multi_interval_ratios);
    return out;
}

ValidationCheck sufficient_descent_check() {
    const ModelSpec spec = make_double_tank();
    OptimizerParams params;
    params.max_iters = 30;
    const auto run =
        optimize(spec.system, default_schedule(spec, spec.default_dt), params, spec.default_x0);
    const auto& rec = run.trace.records;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
        if (rec[i].lambda > 0.0) {
            worst = std::max(worst, (rec[i + 1].cost - rec[i].cost) -
                                        params.alpha * rec[i].lambda * rec[i].d_sigma);
        }
    }
    return make_check("sufficient_descent", worst, 0.0, worst <= 0.0,
                      format("double tank, %zu trace rows", rec.size()));
}

}  // namespace

bool ValidationReport::all_passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(),
                       [](const ValidationCheck& c) { return c.passed; });
}

std::string ValidationReport::to_json() const {
    nlohmann::json doc;
    doc["seed"] = seed;
    doc["all_passed"] = all_passed();
    doc["checks"] = nlohmann::json::array();
    for (const ValidationCheck& c : checks) {
        doc["checks"].push_back({{"name", c.name},
                                 {"measured", c.measured},
                                 {"threshold", c.threshold},
                                 {"passed", c.passed},
                                 {"detail", c.detail}});
    }
    return doc.dump(2) + "\n";
}

ValidationReport run_validation_suite(const ValidationOptions& options) {
    ValidationReport report;
    report.seed = options.seed;
    std::mt19937_64 rng(options.seed);
    const ModelSpec tank = double_tank_under_test(options.perturb_jacobian);
    report.checks.push_back(jacobian_check(tank, rng));
    report.checks.push_back(fd_check(tank, options.seed));
    report.checks.push_back(classic_armijo_check(rng));
    report.checks.push_back(brute_force_hand_check());
    report.checks.push_back(brute_force_optimizer_check());
    for (auto& c : smoothness_checks()) {
        report.checks.push_back(std::move(c));
    }
    report.checks.push_back(sufficient_descent_check());
    return report;
}

}  // namespace modeswitch
