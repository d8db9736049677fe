// modeswitch: run the schedule optimizer, replay a saved schedule, or run the oracle suite.
//
// Exit codes: 0 success (Converged or MaxIters for `run`), 1 validation failure,
// 2 bad input (config, schedule file, IO), 3 StepSizeUnderflow, 4 NonFiniteState.

#include "modeswitch/errors.hpp"
#include "modeswitch/insertion_gradient.hpp"
#include "modeswitch/io.hpp"
#include "modeswitch/optimizer.hpp"
#include "modeswitch/run_config.hpp"
#include "modeswitch/validation.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;
using namespace modeswitch;

namespace {

constexpr int kExitValidationFailed = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitUnderflow = 3;
constexpr int kExitNonFinite = 4;

fs::path output_dir(const fs::path& configured) {
    if (const char* env = std::getenv("MODESWITCH_OUT"); env != nullptr && *env != '\0') {
        return env;
    }
    return configured;
}

CellSet eta_set_or_empty(const GradientProfile& profile, double eta) {
    return profile.d_sigma < 0.0 ? eta_level_set(profile, eta) : CellSet{};
}

int cmd_run(const fs::path& config_path, bool quiet) {
    const RunConfig config = load_run_config(config_path);
    for (const std::string& w : config.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    const Problem problem = build_problem(config);
    const fs::path out = output_dir(config.output_dir);

    IterationCallback progress;
    if (!quiet) {
        progress = [](const IterationRecord& r) {
            std::cout << "k=" << r.k << " J=" << format_number(r.cost)
                      << " D_sigma=" << format_number(r.d_sigma) << " lambda=" << r.lambda
                      << " j=" << r.backtracks << '\n';
        };
    }
    const OptimizationResult result =
        optimize(problem.system, problem.initial_schedule, config.optimizer, problem.x0, progress);
    const RunTrace& trace = result.trace;

    write_file_atomic(out / "trace.csv", trace_csv(trace));
    write_file_atomic(out / "summary.json", summary_json(trace));
    write_file_atomic(out / "final_schedule.csv", schedule_csv(result.schedule));
    if (trace.status != TerminalStatus::NonFiniteState) {
        const ScheduleAnalysis final_iterate =
            analyze_schedule(problem.system, result.schedule, problem.x0);
        write_file_atomic(out / "trajectory.csv",
                          trajectory_csv(final_iterate.trajectory, final_iterate.costate,
                                         result.schedule));
        write_file_atomic(out / "profile.csv",
                          profile_csv(final_iterate.profile, result.schedule.grid(),
                                      eta_set_or_empty(final_iterate.profile,
                                                       config.optimizer.eta)));
    }

    std::cout << "status=" << to_string(trace.status) << " J=" << format_number(trace.final_cost)
              << " D_sigma=" << format_number(trace.final_d_sigma)
              << " rows=" << trace.records.size() << " out=" << out.string() << '\n';
    if (!trace.message.empty()) {
        std::cout << trace.message << '\n';
    }
    switch (trace.status) {
        case TerminalStatus::Converged:
        case TerminalStatus::MaxIters:
            return 0;
        case TerminalStatus::StepSizeUnderflow:
            return kExitUnderflow;
        case TerminalStatus::NonFiniteState:
            return kExitNonFinite;
    }
    return kExitNonFinite;
}

int cmd_replay(const fs::path& schedule_path, const fs::path& config_path) {
    const RunConfig config = load_run_config(config_path);
    const Problem problem = build_problem(config);
    const Schedule schedule = read_schedule_csv(
        schedule_path, problem.initial_schedule.grid(), problem.system.mode_count());
    const ScheduleAnalysis analysis = analyze_schedule(problem.system, schedule, problem.x0);
    const fs::path out = output_dir(config.output_dir);
    write_file_atomic(out / "trajectory.csv",
                      trajectory_csv(analysis.trajectory, analysis.costate, schedule));
    std::cout << "J=" << format_number(analysis.cost) << '\n'
              << "D_sigma=" << format_number(analysis.profile.d_sigma) << '\n';
    return 0;
}

int cmd_validate(std::uint64_t seed, const fs::path& out_flag, bool perturb) {
    ValidationOptions options;
    options.seed = seed;
    options.perturb_jacobian = perturb;
    const ValidationReport report = run_validation_suite(options);
    const fs::path out = output_dir(out_flag);
    write_file_atomic(out / "validation_report.json", report.to_json());
    for (const ValidationCheck& c : report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name
                  << " measured=" << format_number(c.measured)
                  << " threshold=" << format_number(c.threshold) << "  " << c.detail << '\n';
    }
    return report.all_passed() ? 0 : kExitValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mode-schedule optimizer for switched systems"};
    app.require_subcommand(1);

    fs::path run_config;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "Optimize the schedule described by a config file");
    run->add_option("config", run_config, "Run configuration")->required()->check(CLI::ExistingFile);
    run->add_flag("-q,--quiet", quiet, "Only print the final status line");

    fs::path replay_schedule;
    fs::path replay_config;
    auto* replay = app.add_subcommand("replay", "Re-simulate a saved schedule and print J");
    replay->add_option("schedule", replay_schedule, "Schedule CSV")
        ->required()
        ->check(CLI::ExistingFile);
    replay->add_option("config", replay_config, "Run configuration")
        ->required()
        ->check(CLI::ExistingFile);

    std::uint64_t seed = 1;
    fs::path validate_out = "out";
    bool perturb = false;
    auto* validate = app.add_subcommand("validate", "Run the oracle suite");
    validate->add_option("--seed", seed, "Seed for randomized probes");
    validate->add_option("--out", validate_out, "Directory for validation_report.json");
    validate->add_flag("--perturb-jacobian", perturb)->group("");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            return cmd_run(run_config, quiet);
        }
        if (*replay) {
            return cmd_replay(replay_schedule, replay_config);
        }
        return cmd_validate(seed, validate_out, perturb);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
    } catch (const LengthMismatch& e) {
        std::cerr << "schedule error: " << e.what() << '\n';
    } catch (const NonFiniteState& e) {
        std::cerr << "non-finite state: " << e.what() << '\n';
        return kExitNonFinite;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kExitBadInput;
}
