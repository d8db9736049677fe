#include "modeswitch/dynamics.hpp"
#include "modeswitch/errors.hpp"
#include "modeswitch/insertion_gradient.hpp"
#include "modeswitch/io.hpp"
#include "modeswitch/models.hpp"
#include "modeswitch/optimizer.hpp"
#include "modeswitch/oracles.hpp"
#include "modeswitch/run_config.hpp"
#include "modeswitch/validation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace modeswitch;

namespace {

std::vector<ModeIndex> modes_of(const Schedule& s) {
    return {s.cell_modes().begin(), s.cell_modes().end()};
}

std::vector<ScheduleBlock> to_blocks(const std::vector<std::pair<ModeIndex, double>>& pairs) {
    std::vector<ScheduleBlock> out;
    for (const auto& [mode, duration] : pairs) {
        out.push_back({mode, duration});
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mode-schedule optimization for switched systems";

    auto base = py::register_exception<Error>(m, "ModeswitchError", PyExc_RuntimeError);
    py::register_exception<NonFiniteState>(m, "NonFiniteState", base.ptr());
    py::register_exception<OutOfRange>(m, "OutOfRange", base.ptr());
    py::register_exception<BadBlocks>(m, "BadBlocks", base.ptr());
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
    py::register_exception<NotDescendable>(m, "NotDescendable", base.ptr());
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());
    py::register_exception<BadInterval>(m, "BadInterval", base.ptr());
    py::register_exception<LengthMismatch>(m, "LengthMismatch", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<IOError>(m, "IOError", base.ptr());

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, double>(), py::arg("horizon"), py::arg("dt"))
        .def_property_readonly("horizon", &TimeGrid::horizon)
        .def_property_readonly("dt", &TimeGrid::dt)
        .def_property_readonly("n_cells", &TimeGrid::n_cells)
        .def("time_at", &TimeGrid::time_at)
        .def("cell_at", &TimeGrid::cell_at)
        .def(py::self == py::self)
        .def("__repr__", [](const TimeGrid& g) {
            return "TimeGrid(horizon=" + format_number(g.horizon()) +
                   ", dt=" + format_number(g.dt()) + ")";
        });

    py::class_<Schedule>(m, "Schedule")
        .def(py::init<TimeGrid, std::vector<ModeIndex>, std::size_t>(), py::arg("grid"),
             py::arg("modes"), py::arg("mode_count"))
        .def_static("constant", &Schedule::constant, py::arg("grid"), py::arg("mode"),
                    py::arg("mode_count"))
        .def_property_readonly("grid", &Schedule::grid)
        .def_property_readonly("mode_count", &Schedule::mode_count)
        .def_property_readonly("modes", &modes_of)
        .def("switch_times", &Schedule::switch_times)
        .def("__len__", &Schedule::n_cells)
        .def(py::self == py::self);

    m.def("switch_count", &switch_count);
    m.def(
        "schedule_from_blocks",
        [](const std::vector<std::pair<ModeIndex, double>>& blocks, const TimeGrid& grid,
           std::size_t mode_count) { return schedule_from_blocks(to_blocks(blocks), grid, mode_count); },
        py::arg("blocks"), py::arg("grid"), py::arg("mode_count"));
    m.def(
        "flip_cells",
        [](const Schedule& s, std::vector<std::size_t> cells) {
            return flip_set(s, CellSet::from_cells(std::move(cells)));
        },
        "Complement the listed cells of a bimodal schedule.");

    py::class_<SwitchedSystem>(m, "SwitchedSystem")
        .def_property_readonly("name", &SwitchedSystem::name)
        .def_property_readonly("state_dim", &SwitchedSystem::state_dim)
        .def_property_readonly("mode_count", &SwitchedSystem::mode_count)
        .def("field", &SwitchedSystem::field)
        .def("jacobian", &SwitchedSystem::jacobian)
        .def("cost", &SwitchedSystem::cost)
        .def("cost_gradient", &SwitchedSystem::cost_gradient);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def_readonly("name", &ModelSpec::name)
        .def_readonly("system", &ModelSpec::system)
        .def_readonly("default_x0", &ModelSpec::default_x0)
        .def_readonly("default_horizon", &ModelSpec::default_horizon)
        .def_readonly("default_dt", &ModelSpec::default_dt)
        .def("default_schedule", [](const ModelSpec& spec) {
            return schedule_from_blocks(spec.default_blocks,
                                        TimeGrid(spec.default_horizon, spec.default_dt),
                                        spec.system.mode_count());
        });

    m.def("make_model", &make_builtin_model, py::arg("name"));
    m.def("model_names", &builtin_model_names);
    m.def("make_switched_linear", &make_switched_linear, py::arg("a"), py::arg("b"), py::arg("q"));

    py::class_<GradientProfile>(m, "GradientProfile")
        .def_readonly("values", &GradientProfile::values)
        .def_readonly("best_mode", &GradientProfile::best_mode)
        .def_readonly("d_sigma", &GradientProfile::d_sigma)
        .def_readonly("argmin_cell", &GradientProfile::argmin_cell);

    py::class_<ScheduleAnalysis>(m, "ScheduleAnalysis")
        .def_readonly("cost", &ScheduleAnalysis::cost)
        .def_readonly("profile", &ScheduleAnalysis::profile)
        // One row per grid node.
        .def_property_readonly("states",
                               [](const ScheduleAnalysis& a) { return Matrix(a.trajectory.samples.transpose()); })
        .def_property_readonly("costates",
                               [](const ScheduleAnalysis& a) { return Matrix(a.costate.samples.transpose()); });

    m.def("analyze_schedule", &analyze_schedule, py::arg("system"), py::arg("schedule"),
          py::arg("x0"));
    m.def("schedule_cost", &schedule_cost, py::arg("system"), py::arg("schedule"), py::arg("x0"));

    py::enum_<SelectionRule>(m, "SelectionRule")
        .value("LEFTMOST", SelectionRule::Leftmost)
        .value("MOST_NEGATIVE_FIRST", SelectionRule::MostNegativeFirst);

    py::class_<OptimizerParams>(m, "OptimizerParams")
        .def(py::init<>())
        .def_readwrite("alpha", &OptimizerParams::alpha)
        .def_readwrite("beta", &OptimizerParams::beta)
        .def_readwrite("eta", &OptimizerParams::eta)
        .def_readwrite("max_iters", &OptimizerParams::max_iters)
        .def_readwrite("d_tol", &OptimizerParams::d_tol)
        .def_readwrite("max_backtracks", &OptimizerParams::max_backtracks)
        .def_readwrite("selection_rule", &OptimizerParams::selection_rule)
        .def("validate", &OptimizerParams::validate);

    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("k", &IterationRecord::k)
        .def_readonly("cost", &IterationRecord::cost)
        .def_readonly("d_sigma", &IterationRecord::d_sigma)
        .def_readonly("mu_eta", &IterationRecord::mu_eta)
        .def_readonly("lambda_", &IterationRecord::lambda)
        .def_readonly("backtracks", &IterationRecord::backtracks)
        .def_readonly("switch_count", &IterationRecord::switch_count)
        .def_readonly("alt_optimality", &IterationRecord::alt_optimality);

    py::class_<RunTrace>(m, "RunTrace")
        .def_readonly("records", &RunTrace::records)
        .def_property_readonly("status",
                               [](const RunTrace& t) { return std::string(to_string(t.status)); })
        .def_readonly("message", &RunTrace::message)
        .def_readonly("final_cost", &RunTrace::final_cost)
        .def_readonly("final_d_sigma", &RunTrace::final_d_sigma)
        .def_readonly("wall_seconds", &RunTrace::wall_seconds);

    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_readonly("schedule", &OptimizationResult::schedule)
        .def_readonly("trace", &OptimizationResult::trace);

    m.def(
        "optimize",
        [](const SwitchedSystem& system, const Schedule& initial, const OptimizerParams& params,
           const Vector& x0) {
            py::gil_scoped_release release;
            return optimize(system, initial, params, x0);
        },
        py::arg("system"), py::arg("initial"), py::arg("params"), py::arg("x0"));

    m.def(
        "brute_force_best_schedule",
        [](const SwitchedSystem& system, const Vector& x0, const TimeGrid& grid) {
            const auto r = brute_force_best_schedule(system, x0, grid);
            return py::make_tuple(r.best, r.best_cost, r.evaluated);
        },
        py::arg("system"), py::arg("x0"), py::arg("grid"));

    py::class_<Problem>(m, "Problem")
        .def_readonly("system", &Problem::system)
        .def_readonly("x0", &Problem::x0)
        .def_readonly("initial_schedule", &Problem::initial_schedule);

    py::class_<RunConfig>(m, "RunConfig")
        .def_readonly("model", &RunConfig::model)
        .def_readonly("optimizer", &RunConfig::optimizer)
        .def_readonly("output_dir", &RunConfig::output_dir)
        .def_readonly("warnings", &RunConfig::warnings)
        .def("problem", &build_problem);

    m.def("load_run_config", &load_run_config, py::arg("path"));
    m.def("parse_run_config", &parse_run_config, py::arg("text"));

    m.def("schedule_csv", &schedule_csv);
    m.def("parse_schedule_csv", &parse_schedule_csv, py::arg("text"), py::arg("grid"),
          py::arg("mode_count"));
    m.def("trace_csv", &trace_csv);
    m.def("summary_json", &summary_json);

    m.def(
        "validation_report_json",
        [](std::uint64_t seed) {
            ValidationOptions options;
            options.seed = seed;
            py::gil_scoped_release release;
            return run_validation_suite(options).to_json();
        },
        py::arg("seed") = 1, "Run the oracle suite and return the report as JSON text.");
}
