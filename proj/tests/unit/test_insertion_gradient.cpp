#include "modeswitch/errors.hpp"
#include "modeswitch/insertion_gradient.hpp"
#include "modeswitch/models.hpp"
#include "modeswitch/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace modeswitch;

namespace {

Schedule two_block_start() {
    const std::vector<ScheduleBlock> blocks{{0, 10.0}, {1, 10.0}};
    return schedule_from_blocks(blocks, TimeGrid(20.0, 0.01), 2);
}

GradientProfile profile_of(std::vector<double> values) {
    GradientProfile p;
    p.values = values;
    p.best_mode.assign(values.size(), 0);
    p.d_sigma = *std::min_element(values.begin(), values.end());
    p.argmin_cell = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    return p;
}

}  // namespace

TEST_CASE("insertion gradient is zero for the current mode or zero costate") {
    const ModelSpec tank = make_double_tank();
    const Vector x = Vector::Constant(2, 2.5);
    Vector p(2);
    p << 0.7, -1.3;
    CHECK(insertion_gradient_at(tank.system, x, p, 1, 1) == 0.0);
    CHECK(insertion_gradient_at(tank.system, x, Vector::Zero(2), 0, 1) == 0.0);
}

TEST_CASE("single-cell profile equals hand arithmetic") {
    // One cell of the double tank at x0 = (2, 2) held in v=1; the costate at t=0 comes
    // from one backward step: p0 = dt * dL/dx(x0) since p1 = 0.
    const ModelSpec tank = make_double_tank();
    const Schedule s(TimeGrid(0.5, 0.5), {0}, 2);
    const ScheduleAnalysis a = analyze_schedule(tank.system, s, tank.default_x0);
    const double p2 = 0.5 * 4.0 * (2.0 - 3.0);
    // f(x, 2) - f(x, 1) = (1, 0), so D = p1 * 1 = 0: x1 does not enter L over one step.
    CHECK(a.costate.at(0)[0] == 0.0);
    CHECK(a.costate.at(0)[1] == Catch::Approx(p2));
    CHECK(a.profile.values[0] == 0.0);

    // Two cells: p(t0) picks up the coupling through the Jacobian of x2' = sqrt(x1) - sqrt(x2).
    const Schedule s2(TimeGrid(1.0, 0.5), {0, 0}, 2);
    const ScheduleAnalysis b = analyze_schedule(tank.system, s2, tank.default_x0);
    const Vector x1 = b.trajectory.at(1);
    const double q2 = 0.5 * 4.0 * (x1[1] - 3.0);             // p at sample 1, second entry
    const double expect_p1 = 0.5 * (q2 / (2.0 * std::sqrt(2.0)));  // dt * (df2/dx1) * q2
    CHECK(b.costate.at(0)[0] == Catch::Approx(expect_p1).epsilon(1e-12));
    CHECK(b.profile.values[0] == Catch::Approx(std::min(0.0, expect_p1)).epsilon(1e-12));
}

TEST_CASE("identical modes give a flat zero profile") {
    const Matrix a = Matrix::Constant(1, 1, -1.0);
    const Vector b = Vector::Constant(1, 0.5);
    const SwitchedSystem sys = make_switched_linear({a, a}, {b, b}, Matrix::Identity(1, 1));
    const Schedule s = Schedule::constant(TimeGrid(2.0, 0.1), 0, 2);
    const ScheduleAnalysis an = analyze_schedule(sys, s, Vector::Constant(1, 3.0));
    CHECK(an.profile.d_sigma == 0.0);
    for (double v : an.profile.values) {
        REQUIRE(v == 0.0);
    }
    CHECK_THROWS_AS(eta_level_set(an.profile, 0.6), NotDescendable);
    CHECK(negative_set(an.profile).empty());
}

TEST_CASE("trimodal argmin picks the smallest inflow when p > 0") {
    const ModelSpec tri = make_trimodal_example();
    const Vector x = Vector::Constant(1, 0.4);
    const Vector p = Vector::Constant(1, 2.0);
    for (ModeIndex current = 0; current < 3; ++current) {
        double best = 0.0;
        ModeIndex arg = current;
        for (ModeIndex w = 0; w < 3; ++w) {
            const double d = insertion_gradient_at(tri.system, x, p, current, w);
            if (d < best) {
                best = d;
                arg = w;
            }
        }
        CHECK(arg == 0);
    }
}

TEST_CASE("profile invariants on the initial double tank schedule") {
    const ModelSpec tank = make_double_tank();
    const ScheduleAnalysis an = analyze_schedule(tank.system, two_block_start(), tank.default_x0);
    const GradientProfile& prof = an.profile;
    CHECK(std::abs(prof.d_sigma - (-14.92)) / 14.92 <= 0.05);
    for (double v : prof.values) {
        REQUIRE(v <= 0.0);
    }
    CHECK(prof.values[prof.argmin_cell] == prof.d_sigma);
    CHECK(*std::min_element(prof.values.begin(), prof.values.end()) == prof.d_sigma);

    const CellSet s6 = eta_level_set(prof, 0.6);
    CHECK(s6.contains(prof.argmin_cell));
    CHECK_FALSE(s6.empty());
    for (double eta : {0.1, 0.3, 0.6, 0.9}) {
        CHECK(eta_level_set(prof, eta).contains(prof.argmin_cell));
    }
    // Level sets nest: a larger eta admits fewer cells.
    const CellSet s3 = eta_level_set(prof, 0.3);
    const CellSet s9 = eta_level_set(prof, 0.9);
    for (std::size_t c : s9.cells()) {
        REQUIRE(s6.contains(c));
    }
    for (std::size_t c : s6.cells()) {
        REQUIRE(s3.contains(c));
    }
    // eta -> 0+ recovers the strictly negative set.
    CHECK(eta_level_set(prof, 1e-300) == negative_set(prof));
}

TEST_CASE("eta level set threshold arithmetic") {
    const GradientProfile prof = profile_of({-4.0, -1.0, -3.0, 0.0});
    const CellSet s = eta_level_set(prof, 0.6);
    CHECK(s == CellSet::from_cells({0, 2}));
    CHECK(s.measure(1.0) == 2.0);
    CHECK_THROWS_AS(eta_level_set(prof, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(eta_level_set(prof, 1.0), std::invalid_argument);
    CHECK(negative_set(prof) == CellSet::from_cells({0, 1, 2}));
}

TEST_CASE("insertion gradient at s = 5 agrees with the insertion quotient") {
    const ModelSpec tank = make_double_tank();
    const Schedule s = two_block_start();
    const ScheduleAnalysis an = analyze_schedule(tank.system, s, tank.default_x0);
    const std::size_t cell = s.grid().cell_at(5.0);
    const double analytic = insertion_gradient_at(tank.system, an.trajectory.at(cell),
                                                  an.costate.at(cell), s[cell], 1);
    const double fd = fd_insertion_gradient(tank.system, s, tank.default_x0, cell, 1, s.grid().dt());
    CHECK(std::abs(analytic - fd) / std::abs(fd) <= 1e-2);
}
