// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include "modeswitch/dynamics.hpp"
#include "modeswitch/insertion_gradient.hpp"
#include "modeswitch/models.hpp"
#include "modeswitch/optimizer.hpp"
#include "modeswitch/oracles.hpp"
#include "modeswitch/run_config.hpp"
#include "support/oracles.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

using namespace modeswitch;

namespace {

// Pinned tolerances.
constexpr double kJ1Target = 70.90;
constexpr double kJ1RelTol = 0.005;
constexpr double kD1Target = -14.92;
constexpr double kD1RelTol = 0.05;
constexpr double kJ100Max = 5.5;
constexpr double kD100Min = -0.5;
constexpr double kJ200Max = 5.1;
constexpr double kD200Min = -0.2;
constexpr double kEarlyJ = 8.0;
constexpr int kEarlyK = 5;
constexpr double kFdRelTol = 1e-2;
constexpr double kFdFloor = 1e-4;
constexpr std::size_t kFdMinProbes = 50;
constexpr double kFdDt = 1e-4;
constexpr double kOracleGap = 0.10;
constexpr double kConvergedD = -1e-3;
constexpr double kGradTol = 1e-6;
constexpr int kClassicIters = 200;
constexpr double kSmoothFactor = 3.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    int id;
    bool pass;
    std::string text;
};

std::vector<Outcome> outcomes;
std::vector<std::string> notes;

void report(int id, bool pass, const std::string& text) { outcomes.push_back({id, pass, text}); }

template <typename... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool rel_within(double value, double target, double tol) {
    return std::abs(value - target) <= tol * std::abs(target);
}

std::vector<RunTrace> all_traces;

// Largest violation of J_{k+1} - J_k <= alpha * lambda_k * D_k over the rows that took a step;
// a step that does not decrease at all counts as a violation too.
double descent_violation(const RunTrace& trace, double alpha, std::size_t& steps) {
    double worst = -std::numeric_limits<double>::infinity();
    const auto& r = trace.records;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].lambda == 0.0) {
            continue;
        }
        ++steps;
        const double next = i + 1 < r.size() ? r[i + 1].cost : trace.final_cost;
        const double bound = alpha * r[i].lambda * r[i].d_sigma;
        worst = std::max(worst, next - r[i].cost - bound);
        if (!(bound < 0.0)) {
            worst = std::max(worst, 1.0);
        }
    }
    return worst;
}

// Forward Euler and left Riemann sum written out for the double tank, independent of the library.
double tank_cost_by_hand(const std::vector<int>& inflow, double dt) {
    Eigen::VectorXd x(2);
    x << 2.0, 2.0;
    double j = 0.0;
    for (int v : inflow) {
        j += 2.0 * (x[1] - 3.0) * (x[1] - 3.0) * dt;
        x += dt * testing_support::tank_field(x, v);
    }
    return j;
}

Schedule two_block_start(double dt) {
    const std::vector<ScheduleBlock> blocks{{0, 10.0}, {1, 10.0}};
    return schedule_from_blocks(blocks, TimeGrid(20.0, dt), 2);
}

void criterion_1() {
    const auto start = Clock::now();
    const RunConfig cfg = load_run_config(MODESWITCH_SOURCE_DIR "/configs/double_tank_paper.cfg");
    const Problem problem = build_problem(cfg);
    const ScheduleAnalysis an = analyze_schedule(problem.system, problem.initial_schedule, problem.x0);
    const double elapsed = seconds_since(start);

    std::vector<int> inflow;
    for (ModeIndex m : problem.initial_schedule.cell_modes()) {
        inflow.push_back(m == 0 ? 1 : 2);
    }
    const double by_hand = tank_cost_by_hand(inflow, problem.initial_schedule.grid().dt());
    const bool pass = rel_within(an.cost, kJ1Target, kJ1RelTol) &&
                      rel_within(an.profile.d_sigma, kD1Target, kD1RelTol) &&
                      std::abs(an.cost - by_hand) <= 1e-9 * by_hand && elapsed < 1.0;
    report(1, pass,
           fmt("initial point: J=%.4f (target %.2f +-0.5%%, hand-rolled Euler %.4f), "
               "D_sigma=%.4f (target %.2f +-5%%), %.3f s (< 1 s)",
               an.cost, kJ1Target, by_hand, an.profile.d_sigma, kD1Target, elapsed));
}

void criterion_2_and_3() {
    const auto start = Clock::now();
    const RunConfig cfg = load_run_config(MODESWITCH_SOURCE_DIR "/configs/double_tank_paper.cfg");
    const Problem problem = build_problem(cfg);

    const auto run100 = optimize(problem.system, problem.initial_schedule, cfg.optimizer, problem.x0);
    OptimizerParams p200 = cfg.optimizer;
    p200.max_iters = 200;
    const auto run200 = optimize(problem.system, problem.initial_schedule, p200, problem.x0);
    const double elapsed = seconds_since(start);
    all_traces.push_back(run100.trace);
    all_traces.push_back(run200.trace);

    const RunTrace& t100 = run100.trace;
    const RunTrace& t200 = run200.trace;
    const int k200 = static_cast<int>(std::count_if(
        t200.records.begin(), t200.records.end(),
        [](const IterationRecord& r) { return r.lambda > 0.0; }));
    const bool ok100 = t100.status == TerminalStatus::MaxIters && t100.records.size() == 100 &&
                       t100.final_cost <= kJ100Max && t100.final_d_sigma >= kD100Min &&
                       t100.final_d_sigma <= 0.0;
    const bool ok200 = t200.final_cost <= kJ200Max && t200.final_d_sigma >= kD200Min &&
                       t200.final_d_sigma <= 0.0;
    report(2, ok100 && ok200 && elapsed < 60.0,
           fmt("after 100 steps J=%.4f (<= %.1f), D_sigma=%.4f (in [%.1f, 0]); 200-step budget: "
               "terminal iterate k=%d (%s) J=%.4f (<= %.1f), D_sigma=%.4f (in [%.1f, 0]); %.2f s "
               "(< 60 s)",
               t100.final_cost, kJ100Max, t100.final_d_sigma, kD100Min, k200,
               std::string(to_string(t200.status)).c_str(), t200.final_cost, kJ200Max,
               t200.final_d_sigma, kD200Min, elapsed));

    int first_below = -1;
    for (const IterationRecord& r : t100.records) {
        if (r.k <= kEarlyK && r.cost < kEarlyJ) {
            first_below = r.k;
            break;
        }
    }
    report(3, first_below >= 0,
           fmt("J_k < %.0f first at k=%d (need k <= %d); J_0..J_3 = %.3f %.3f %.3f %.3f", kEarlyJ,
               first_below, kEarlyK, t100.records.at(0).cost, t100.records.at(1).cost,
               t100.records.at(2).cost, t100.records.at(3).cost));
}

void criterion_5() {
    const ModelSpec tank = make_double_tank();
    auto assess = [&](double dt, std::size_t& assessed, std::size_t& bad, double& worst) {
        const auto probes = fd_probes(tank.system, two_block_start(dt), tank.default_x0, 100, 1);
        assessed = bad = 0;
        worst = 0.0;
        for (const FDProbe& p : probes) {
            // Recomputed here rather than trusting relative_error.
            const double scale = std::max(std::abs(p.analytic), std::abs(p.fd_quotient));
            if (scale < kFdFloor) {
                continue;
            }
            ++assessed;
            const double rel = std::abs(p.analytic - p.fd_quotient) / scale;
            worst = std::max(worst, rel);
            bad += rel > kFdRelTol ? 1 : 0;
        }
    };
    const auto start = Clock::now();
    std::size_t assessed = 0;
    std::size_t bad = 0;
    double worst = 0.0;
    assess(kFdDt, assessed, bad, worst);
    const double elapsed = seconds_since(start);
    report(5, assessed >= kFdMinProbes && bad == 0,
           fmt("double tank sigma_1 at dt=%g, lambda=dt, seed 1: %zu probes assessed (>= %zu), "
               "%zu above rel. err %.0e, worst %.2e; %.2f s",
               kFdDt, assessed, kFdMinProbes, bad, kFdRelTol, worst, elapsed));

    assess(0.01, assessed, bad, worst);
    notes.push_back(fmt("criterion 5 at dt=0.01 (same probes): %zu assessed, %zu above %.0e, "
                        "worst %.2e; the one-sided quotient's bias is O(dt)",
                        assessed, bad, kFdRelTol, worst));
}

void criterion_6() {
    const auto start = Clock::now();
    const ModelSpec spec = make_scalar_tracking();
    const TimeGrid grid(8.0, 1.0);
    const auto bf = brute_force_best_schedule(spec.system, spec.default_x0, grid);

    const std::vector<std::vector<ModeIndex>> starts{
        std::vector<ModeIndex>(8, 0), std::vector<ModeIndex>(8, 1), {0, 0, 0, 0, 1, 1, 1, 1}};
    int converged = 0;
    double best = std::numeric_limits<double>::infinity();
    std::string statuses;
    for (const auto& modes : starts) {
        const auto run =
            optimize(spec.system, Schedule(grid, modes, 2), OptimizerParams{}, spec.default_x0);
        all_traces.push_back(run.trace);
        const bool ok = run.trace.status == TerminalStatus::Converged &&
                        run.trace.final_d_sigma >= kConvergedD;
        converged += ok ? 1 : 0;
        best = std::min(best, run.trace.final_cost);
        statuses += fmt("%s(D=%.3g) ", std::string(to_string(run.trace.status)).c_str(),
                        run.trace.final_d_sigma);
    }
    const double elapsed = seconds_since(start);
    const bool gap_ok = std::abs(best - bf.best_cost) <= kOracleGap * std::abs(bf.best_cost);
    report(6, converged == 3 && gap_ok && elapsed < 5.0,
           fmt("N=8: J*=%.4f over %zu schedules; starts end %s-> %d/3 Converged (need 3); "
               "best-of-3 J=%.4f (within 10%%: %s); %.3f s (< 5 s)",
               bf.best_cost, bf.evaluated, statuses.c_str(), converged, best,
               gap_ok ? "yes" : "no", elapsed));
}

void criterion_7() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> eig(1.0, 10.0);
    std::uniform_int_distribution<int> dims(2, 5);
    const double alpha = 0.5;
    const double beta = 0.5;
    int descent_violations = 0;
    int bound_violations = 0;
    int slow = 0;
    int max_steps = 0;
    for (int inst = 0; inst < 100; ++inst) {
        const int n = dims(rng);
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                m(i, j) = unit(rng);
            }
        }
        const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();
        Eigen::VectorXd d(n);
        for (int i = 0; i < n; ++i) {
            d[i] = eig(rng);
        }
        const double l = d.maxCoeff();  // ||H|| for an s.p.d. quadratic
        const Eigen::MatrixXd h = q * d.asDiagonal() * q.transpose();
        Eigen::VectorXd c(n);
        Eigen::VectorXd x0(n);
        for (int i = 0; i < n; ++i) {
            c[i] = 5.0 * unit(rng);
            x0[i] = 10.0 * unit(rng);
        }
        const SmoothObjective f{[&](const Vector& x) { return 0.5 * x.dot(h * x) - c.dot(x); },
                                [&](const Vector& x) -> Vector { return h * x - c; }};
        const auto res = classic_armijo_descent(f, x0, alpha, beta, kClassicIters, kGradTol);
        for (const ClassicArmijoStep& s : res.steps) {
            // Re-evaluated from the stored point, not from the stored values.
            const Vector g = f.gradient(s.point);
            const double gn = g.norm();
            const double lam = s.lambda;
            const double lhs = f.value(s.point - lam / gn * g) - f.value(s.point);
            if (lhs > -alpha * lam * gn + 1e-12 * std::max(1.0, std::abs(f.value(s.point)))) {
                ++descent_violations;
            }
            if (lam < 2.0 / l * beta * (1.0 - alpha) * gn * (1.0 - 1e-12)) {
                ++bound_violations;
            }
        }
        const double final_grad = f.gradient(res.final_point).norm();
        if (!(final_grad < kGradTol)) {
            ++slow;
        }
        max_steps = std::max(max_steps, static_cast<int>(res.steps.size()));
    }
    report(7, descent_violations == 0 && bound_violations == 0 && slow == 0,
           fmt("100 s.p.d. quadratics (dim 2-5, eigenvalues in [1,10]): %d descent-inequality "
               "violations, %d step-bound violations, %d with |grad| >= 1e-6 after %d iterations "
               "(max steps used %d)",
               descent_violations, bound_violations, slow, kClassicIters, max_steps));
}

void criterion_8() {
    const ModelSpec tank = make_double_tank();
    const std::vector<double> gammas{0.32, 0.16, 0.08, 0.04, 0.02};
    const auto r = smoothness_probe(tank.system, two_block_start(0.01), tank.default_x0, {200, 400},
                                    500, gammas);
    auto spread = [](const std::vector<double>& v) {
        std::vector<double> a;
        for (double x : v) {
            a.push_back(std::abs(x));
        }
        std::sort(a.begin(), a.end());
        const double med = a[a.size() / 2];
        return a.front() > 0.0 ? std::max(a.back() / med, med / a.front())
                               : std::numeric_limits<double>::infinity();
    };
    const double s2 = spread(r.second_differences);
    const double sl = spread(r.lipschitz_ratios);
    const double sm = spread(r.multi_interval_ratios);
    report(8, s2 <= kSmoothFactor && sl <= kSmoothFactor && sm <= kSmoothFactor,
           fmt("double tank, flips in [2,4) s, probe at s=5, gamma 0.32..0.02: spread about "
               "median (<= 3): second difference %.3f, gradient Lipschitz ratio %.3f, "
               "two-interval ratio %.3f",
               s2, sl, sm));
}

void criterion_9() {
    const Matrix a = Matrix::Constant(2, 2, -0.3);
    const Vector b = Vector::Constant(2, 1.0);
    const SwitchedSystem same = make_switched_linear({a, a, a}, {b, b, b}, Matrix::Identity(2, 2));
    const Schedule s0 = Schedule::constant(TimeGrid(5.0, 0.05), 2, 3);
    const auto run = optimize(same, s0, OptimizerParams{}, Vector::Ones(2));
    all_traces.push_back(run.trace);
    const bool identical_ok = run.trace.status == TerminalStatus::Converged &&
                              run.trace.records.size() == 1 && run.trace.records[0].k == 0 &&
                              run.schedule == s0;

    std::mt19937_64 rng(99);
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<std::size_t> len(1, 200);
    int empty_bad = 0;
    int involution_bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = len(rng);
        std::vector<ModeIndex> modes(n);
        std::vector<std::size_t> cells;
        for (std::size_t i = 0; i < n; ++i) {
            modes[i] = coin(rng) ? 1 : 0;
            if (coin(rng)) {
                cells.push_back(i);
            }
        }
        const Schedule s(TimeGrid::from_cells(static_cast<double>(n), n), modes, 2);
        if (!(flip_set(s, CellSet{}) == s)) {
            ++empty_bad;
        }
        const CellSet set = CellSet::from_cells(cells);
        if (!(flip_set(flip_set(s, set), set) == s)) {
            ++involution_bad;
        }
    }
    report(9, identical_ok && empty_bad == 0 && involution_bad == 0,
           fmt("identical modes: %s at k=%d, schedule %s; empty flip no-op failures %d/1000; "
               "double-flip failures %d/1000",
               std::string(to_string(run.trace.status)).c_str(),
               run.trace.records.empty() ? -1 : run.trace.records[0].k,
               run.schedule == s0 ? "unchanged" : "changed", empty_bad, involution_bad));
}

void criterion_4() {
    // Most-negative-first run as well, so both selection rules are covered.
    const ModelSpec tank = make_double_tank();
    OptimizerParams p;
    p.max_iters = 200;
    p.selection_rule = SelectionRule::MostNegativeFirst;
    all_traces.push_back(optimize(tank.system, two_block_start(0.01), p, tank.default_x0).trace);

    std::size_t steps = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const RunTrace& t : all_traces) {
        worst = std::max(worst, descent_violation(t, 0.5, steps));
    }
    report(4, worst <= 0.0,
           fmt("%zu traces, %zu accepted steps: max of (J_{k+1} - J_k) - alpha*lambda_k*D_k = "
               "%.3e (<= 0)",
               all_traces.size(), steps, worst));
}

}  // namespace

int main() {
    criterion_1();
    criterion_2_and_3();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_4();
    std::sort(outcomes.begin(), outcomes.end(),
              [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
    int failures = 0;
    for (const Outcome& o : outcomes) {
        std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", o.id, o.text.c_str());
        failures += o.pass ? 0 : 1;
    }
    for (const std::string& n : notes) {
        std::printf("info: %s\n", n.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failures, outcomes.size());
    return failures == 0 ? 0 : 1;
}
