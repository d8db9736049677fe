#include "modeswitch/models.hpp"

#include "modeswitch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace modeswitch {

namespace {

constexpr double kSqrtDerivativeFloor = 1e-9;

double clamped_sqrt(double x) { return std::sqrt(std::max(x, 0.0)); }

double sqrt_slope(double x) { return 0.5 / std::sqrt(std::max(x, kSqrtDerivativeFloor)); }

// x' = v - x for each v in `inflows`, L = (x - target)^2.
SwitchedSystem scalar_relaxation(std::string name, const std::vector<double>& inflows,
                                 double target) {
    std::vector<ModeDynamics> modes;
    for (double v : inflows) {
        char label[32];
        std::snprintf(label, sizeof label, "v=%g", v);
        modes.push_back({label,
                         [v](const Vector& x) { return Vector::Constant(1, v - x[0]); },
                         [](const Vector&) { return Matrix::Constant(1, 1, -1.0); }});
    }
    RunningCost cost{
        [target](const Vector& x) { return (x[0] - target) * (x[0] - target); },
        [target](const Vector& x) { return Vector::Constant(1, 2.0 * (x[0] - target)); }};
    return SwitchedSystem(std::move(name), 1, std::move(modes), std::move(cost));
}

}  // namespace

ModelSpec make_double_tank() {
    std::vector<ModeDynamics> modes;
    for (double v : {1.0, 2.0}) {
        modes.push_back({v == 1.0 ? "v=1" : "v=2",
                         [v](const Vector& x) {
                             const double a = clamped_sqrt(x[0]);
                             const double b = clamped_sqrt(x[1]);
                             Vector dx(2);
                             dx << v - a, a - b;
                             return dx;
                         },
                         [](const Vector& x) {
                             const double da = sqrt_slope(x[0]);
                             const double db = sqrt_slope(x[1]);
                             Matrix j(2, 2);
                             j << -da, 0.0, da, -db;
                             return j;
                         }});
    }
    RunningCost cost{[](const Vector& x) { return 2.0 * (x[1] - 3.0) * (x[1] - 3.0); },
                     [](const Vector& x) {
                         Vector g(2);
                         g << 0.0, 4.0 * (x[1] - 3.0);
                         return g;
                     }};
    Vector x0(2);
    x0 << 2.0, 2.0;
    return {"double_tank",
            SwitchedSystem("double_tank", 2, std::move(modes), std::move(cost)),
            x0,
            20.0,
            0.01,
            {{0, 10.0}, {1, 10.0}}};
}

SwitchedSystem make_switched_linear(const std::vector<Matrix>& a, const std::vector<Vector>& b,
                                    const Matrix& q) {
    if (a.size() != b.size()) {
        throw DimensionMismatch("switched linear: " + std::to_string(a.size()) + " matrices but " +
                                std::to_string(b.size()) + " offsets");
    }
    if (a.empty()) {
        throw DimensionMismatch("switched linear: no modes");
    }
    const Eigen::Index n = q.rows();
    if (n == 0 || q.cols() != n) {
        throw DimensionMismatch("switched linear: Q must be square and nonempty");
    }
    std::vector<ModeDynamics> modes;
    for (std::size_t v = 0; v < a.size(); ++v) {
        if (a[v].rows() != n || a[v].cols() != n || b[v].size() != n) {
            throw DimensionMismatch("switched linear: mode " + std::to_string(v) +
                                    " does not match the dimension of Q");
        }
        modes.push_back({"mode " + std::to_string(v),
                         [av = a[v], bv = b[v]](const Vector& x) -> Vector { return av * x + bv; },
                         [av = a[v]](const Vector&) -> Matrix { return av; }});
    }
    const Matrix sym = q + q.transpose();
    RunningCost cost{[q](const Vector& x) { return x.dot(q * x); },
                     [sym](const Vector& x) -> Vector { return sym * x; }};
    return SwitchedSystem("linear", static_cast<std::size_t>(n), std::move(modes), std::move(cost));
}

ModelSpec make_scalar_tracking() {
    return {"scalar_tracking", scalar_relaxation("scalar_tracking", {0.0, 2.0}, 1.0),
            Vector::Constant(1, 1.0), 8.0, 1.0, {{0, 8.0}}};
}

ModelSpec make_trimodal_example() {
    return {"trimodal", scalar_relaxation("trimodal", {0.0, 1.0, 2.0}, 1.5),
            Vector::Constant(1, 0.0), 1.0, 1e-3, {{0, 1.0}}};
}

ModelSpec make_builtin_model(const std::string& name) {
    if (name == "double_tank") {
        return make_double_tank();
    }
    if (name == "scalar_tracking") {
        return make_scalar_tracking();
    }
    if (name == "trimodal") {
        return make_trimodal_example();
    }
    throw std::invalid_argument("unknown model '" + name + "'");
}

std::vector<std::string> builtin_model_names() {
    return {"double_tank", "scalar_tracking", "trimodal"};
}

}  // namespace modeswitch
