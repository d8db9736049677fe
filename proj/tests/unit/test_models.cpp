#include "modeswitch/dynamics.hpp"
#include "modeswitch/errors.hpp"
#include "modeswitch/insertion_gradient.hpp"
#include "modeswitch/models.hpp"

#include <catch_amalgamated.hpp>

#include <random>
#include <stdexcept>

using namespace modeswitch;

TEST_CASE("double tank definitions") {
    const ModelSpec tank = make_double_tank();
    CHECK(tank.system.mode_count() == 2);
    CHECK(tank.default_horizon == 20.0);
    CHECK(tank.default_dt == 0.01);
    CHECK(tank.default_x0 == Vector::Constant(2, 2.0));

    Vector x(2);
    x << 1.7, 3.0;
    CHECK(tank.system.cost(x) == 0.0);
    CHECK(tank.system.cost_gradient(x).isZero(0.0));
    CHECK(tank.system.field(Vector::Ones(2), 0).isZero(0.0));
    CHECK(tank.system.field(Vector::Constant(2, 4.0), 1).isZero(0.0));

    // The square-root guard keeps negative states finite.
    Vector neg(2);
    neg << -0.5, -1.0;
    CHECK(tank.system.field(neg, 0).allFinite());
    CHECK(tank.system.jacobian(neg, 0).allFinite());
}

TEST_CASE("double tank settles at the fixed point of the held inflow") {
    const ModelSpec tank = make_double_tank();
    const TimeGrid grid(60.0, 0.01);
    for (ModeIndex v : {0u, 1u}) {
        const Trajectory traj =
            simulate_state(tank.system, Schedule::constant(grid, v, 2), tank.default_x0);
        const double target = v == 0 ? 1.0 : 4.0;
        CHECK(std::abs(traj.at(grid.n_cells())[0] - target) < 0.05);
        CHECK(std::abs(traj.at(grid.n_cells())[1] - target) < 0.05);
    }
}

TEST_CASE("every built-in passes the Jacobian self-check") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coord(0.2, 5.0);
    for (const std::string& name : builtin_model_names()) {
        const ModelSpec spec = make_builtin_model(name);
        std::vector<Vector> probes{spec.default_x0};
        for (int i = 0; i < 10; ++i) {
            Vector x(static_cast<Eigen::Index>(spec.system.state_dim()));
            for (Eigen::Index k = 0; k < x.size(); ++k) {
                x[k] = coord(rng);
            }
            probes.push_back(x);
        }
        INFO(name);
        CHECK(check_jacobians(spec.system, probes).max_error() <= 1e-5);
        CHECK(spec.default_x0.size() == static_cast<Eigen::Index>(spec.system.state_dim()));
    }
    CHECK_THROWS_AS(make_builtin_model("pendulum"), std::invalid_argument);
}

TEST_CASE("switched linear family") {
    const Matrix a = Matrix::Zero(2, 2);
    const Vector b = Vector::Zero(2);
    const SwitchedSystem still = make_switched_linear({a, a}, {b, b}, Matrix::Identity(2, 2));
    const Trajectory traj = simulate_state(still, Schedule::constant(TimeGrid(1.0, 0.1), 1, 2),
                                           Vector::Constant(2, 0.3));
    CHECK((traj.samples.array() == 0.3).all());

    Matrix q(2, 2);
    q << 2, 1, 0, 1;
    const SwitchedSystem quad = make_switched_linear({a, a}, {b, b}, q);
    Vector x(2);
    x << 1.0, -2.0;
    CHECK(quad.cost(x) == Catch::Approx(x.dot(q * x)));
    CHECK(quad.cost_gradient(x).isApprox((q + q.transpose()) * x));

    CHECK_THROWS_AS(make_switched_linear({a, Matrix::Zero(3, 3)}, {b, b}, q), DimensionMismatch);
    CHECK_THROWS_AS(make_switched_linear({a, a}, {b, Vector::Zero(3)}, q), DimensionMismatch);
    CHECK_THROWS_AS(make_switched_linear({a, a}, {b}, q), DimensionMismatch);
    CHECK_THROWS_AS(make_switched_linear({a, a}, {b, b}, Matrix::Zero(3, 3)), DimensionMismatch);
}

TEST_CASE("trimodal at zero costate gives zero insertion gradients") {
    const ModelSpec tri = make_trimodal_example();
    CHECK(tri.system.mode_count() == 3);
    const Vector x = Vector::Constant(1, 0.9);
    for (ModeIndex current = 0; current < 3; ++current) {
        for (ModeIndex w = 0; w < 3; ++w) {
            CHECK(insertion_gradient_at(tri.system, x, Vector::Zero(1), current, w) == 0.0);
        }
    }
}
