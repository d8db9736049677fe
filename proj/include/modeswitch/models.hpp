#pragma once

#include "modeswitch/schedule.hpp"

#include <string>
#include <vector>

namespace modeswitch {

/// A built-in system together with the setup it is usually run from.
struct ModelSpec {
    std::string name;
    SwitchedSystem system;
    Vector default_x0;
    double default_horizon;
    double default_dt;
    /// Blocks of the usual starting schedule.
    std::vector<ScheduleBlock> default_blocks;
};

/// Two-tank benchmark: inflow v in {1, 2} (mode indices 0 and 1),
/// x1' = v - sqrt(x1), x2' = sqrt(x1) - sqrt(x2), L = 2 (x2 - 3)^2.
/// Square roots are taken of max(x, 0); their derivatives of max(x, 1e-9).
[[nodiscard]] ModelSpec make_double_tank();

/// f(x, v) = A_v x + b_v, L = x^T Q x. Throws DimensionMismatch on inconsistent shapes.
[[nodiscard]] SwitchedSystem make_switched_linear(const std::vector<Matrix>& a,
                                                  const std::vector<Vector>& b, const Matrix& q);

/// Scalar x' = v - x with v in {0, 2} and L = (x - 1)^2 on T = 8, dt = 1, x0 = 1.
/// This is the desk-scale instance used for the brute-force comparison.
[[nodiscard]] ModelSpec make_scalar_tracking();

/// Scalar x' = v - x with v in {0, 1, 2} and L = (x - 1.5)^2.
[[nodiscard]] ModelSpec make_trimodal_example();

/// Looks up a built-in model by name ("double_tank", "scalar_tracking", "trimodal").
/// Throws std::invalid_argument for unknown names.
[[nodiscard]] ModelSpec make_builtin_model(const std::string& name);

[[nodiscard]] std::vector<std::string> builtin_model_names();

}  // namespace modeswitch
