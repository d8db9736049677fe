#pragma once

#include "modeswitch/models.hpp"
#include "modeswitch/optimizer.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace modeswitch {

/// Inline definition of a switched linear model.
struct LinearModelConfig {
    std::vector<Matrix> a;
    std::vector<Vector> b;
    Matrix q;
};

struct RunConfig {
    std::string model = "double_tank";
    std::optional<LinearModelConfig> linear;  // set when model == "linear"
    std::optional<Vector> x0;
    std::optional<double> horizon;
    std::optional<double> dt;
    std::optional<std::vector<ScheduleBlock>> blocks;
    OptimizerParams optimizer;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 1;
    std::vector<std::string> warnings;
};

/// Parses the sectioned key = value run configuration and re-validates every constraint.
/// Throws ConfigError naming the offending section.key.
[[nodiscard]] RunConfig parse_run_config(std::string_view text);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

/// Concrete problem instance assembled from a config: model defaults fill unset fields.
struct Problem {
    SwitchedSystem system;
    Vector x0;
    Schedule initial_schedule;
};

/// Throws ConfigError when the model, x0 dimension or blocks are inconsistent.
[[nodiscard]] Problem build_problem(const RunConfig& config);

}  // namespace modeswitch
