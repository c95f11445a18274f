#include <catch_amalgamated.hpp>

#include "h2sim/electrolyser_stack.hpp"
#include "h2sim/errors.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace h2sim;
using Catch::Approx;

namespace {

// Exact solution of dv/dt = (i - v/r)/c from v0 after time t.
double closed_form_active(double v0, double i, double t, const CellParams& p) {
    const double v_inf = i * p.r_e;
    return v_inf + (v0 - v_inf) * std::exp(-t / p.tau());
}

StackState with_active(std::size_t n_total, std::size_t n_active, double v_c) {
    StackState s(n_total);
    for (std::size_t k = 0; k < n_active; ++k) {
        set_cell(s, k, true);
        s.cell(k).v_c = v_c;
    }
    return s;
}

}  // namespace

TEST_CASE("stack_voltage sums active cells only", "[stack]") {
    const CellParams p;
    CHECK(stack_voltage(with_active(30, 20, 0.0), p) == Approx(30.0).epsilon(1e-14));
    CHECK(stack_voltage(with_active(30, 20, 3.81), p) == Approx(106.2).epsilon(1e-12));
    CHECK(stack_voltage(StackState(30), p) == 0.0);

    StackState s = with_active(5, 2, 1.0);
    s.cell(4).v_c = 100.0;  // bypassed, must not count
    CHECK(stack_voltage(s, p) == Approx(2 * 2.5));
}

TEST_CASE("single Euler step matches the hand-evaluated value", "[stack]") {
    const CellParams p;
    StackState s = with_active(1, 1, 1.0);
    step_cells(s, p, 5.0, 1e-3);
    CHECK(s.cell(0).v_c == Approx(1.0 + 0.001 * (5.0 - 1.0 / 0.7) / 0.1).epsilon(1e-14));
    CHECK(s.cell(0).v_c == Approx(1.0357142857).epsilon(1e-9));
    // Exact linear-ODE step differs only at second order.
    CHECK(s.cell(0).v_c == Approx(closed_form_active(1.0, 5.0, 1e-3, p)).epsilon(1e-3));
}

TEST_CASE("active cell settles at i * r_e", "[stack]") {
    const CellParams p;
    StackState s = with_active(1, 1, 0.0);
    for (int k = 0; k < 2000; ++k) step_cells(s, p, 5.0, 1e-3);
    CHECK(s.cell(0).v_c == Approx(3.5).epsilon(1e-9));
}

TEST_CASE("bypassed cell decays by 1/e over one time constant", "[stack]") {
    const CellParams p;
    StackState s(1);
    s.cell(0).v_c = 3.5;
    for (int k = 0; k < 70; ++k) step_cells(s, p, 5.0, 1e-3);
    CHECK(s.cell(0).v_c == Approx(3.5 / std::exp(1.0)).epsilon(0.01));
    CHECK(s.cell(0).t_on_total == 0.0);
    CHECK(s.cell(0).t_in_state == Approx(0.07));
}

// Trajectory relative error: max |euler - exact| / max |exact| over 10 tau.
TEST_CASE("Euler tracks the closed form within 0.5% over ten time constants", "[stack]") {
    const CellParams p;
    const double dt = 1e-3;
    for (double v0 : {0.0, 1.0, 6.0}) {
        StackState s = with_active(1, 1, v0);
        double max_err = 0.0;
        double max_exact = 0.0;
        for (int k = 1; k <= 700; ++k) {
            step_cells(s, p, 5.0, dt);
            const double exact = closed_form_active(v0, 5.0, k * dt, p);
            max_err = std::max(max_err, std::abs(s.cell(0).v_c - exact));
            max_exact = std::max(max_exact, std::abs(exact));
        }
        INFO("v0 = " << v0);
        CHECK(max_err / max_exact <= 0.005);
        // Settled value is exact: Euler's fixed point is i * r_e.
        CHECK(s.cell(0).v_c == Approx(3.5).epsilon(1e-4));
    }
}

TEST_CASE("step_cells guards its preconditions", "[stack][errors]") {
    const CellParams p;
    StackState s(3);
    CHECK_THROWS_AS(step_cells(s, p, 1.0, 0.0071), StepSizeError);
    CHECK_NOTHROW(step_cells(s, p, 1.0, 0.0069));
    CHECK_THROWS_AS(step_cells(s, p, -1.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(step_cells(s, p, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("set_cell switches state and resets time-in-state", "[stack]") {
    StackState s(4);
    s.cell(2).t_in_state = 12.0;
    s.cell(2).v_c = 0.8;

    CHECK(set_cell(s, 2, true));
    CHECK(s.cell(2).active);
    CHECK(s.cell(2).t_in_state == 0.0);
    CHECK(s.cell(2).v_c == 0.8);

    s.cell(2).t_in_state = 4.0;
    CHECK_FALSE(set_cell(s, 2, true));  // already on: untouched
    CHECK(s.cell(2).t_in_state == 4.0);

    CHECK(set_cell(s, 2, false));
    CHECK_FALSE(s.cell(2).active);
    CHECK(s.cell(2).t_in_state == 0.0);

    CHECK_THROWS_AS(set_cell(s, 4, true), std::out_of_range);
}

TEST_CASE("tie order must be a permutation", "[stack]") {
    const std::vector<std::size_t> good{2, 0, 1};
    const StackState s(3, good);
    CHECK(s.tie_rank(2) == 0);
    CHECK(s.tie_rank(0) == 1);
    const std::vector<std::size_t> dup{0, 0, 1};
    CHECK_THROWS_AS(StackState(3, dup), std::invalid_argument);
    const std::vector<std::size_t> short_list{0, 1};
    CHECK_THROWS_AS(StackState(3, short_list), std::invalid_argument);
}

TEST_CASE("random switching keeps v_c non-negative and converges monotonically", "[stack][property]") {
    const CellParams p;
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> volts(0.0, 8.0);
    std::uniform_real_distribution<double> amps(0.0, 6.0);
    std::uniform_int_distribution<std::size_t> pick(0, 9);

    for (int trial = 0; trial < 50; ++trial) {
        StackState s(10);
        for (auto& c : s.cells()) c.v_c = volts(rng);
        double elapsed = 0.0;
        for (int step = 0; step < 500; ++step) {
            if (step % 25 == 0) set_cell(s, pick(rng), rng() % 2 == 0);
            step_cells(s, p, amps(rng), 1e-3);
            elapsed += 1e-3;
            for (const auto& c : s.cells()) {
                REQUIRE(c.v_c >= 0.0);
                REQUIRE(c.t_on_total <= elapsed + 1e-12);
                REQUIRE(c.t_in_state <= elapsed + 1e-12);
            }
        }
    }

    // Constant current: distance to i*r_e shrinks every step.
    for (int trial = 0; trial < 50; ++trial) {
        const double i = amps(rng);
        StackState s = with_active(1, 1, volts(rng));
        double gap = std::abs(s.cell(0).v_c - i * p.r_e);
        for (int step = 0; step < 1000; ++step) {
            step_cells(s, p, i, 1e-3);
            const double next = std::abs(s.cell(0).v_c - i * p.r_e);
            REQUIRE(next <= gap);
            gap = next;
        }
    }
}
