#include <catch_amalgamated.hpp>

#include "h2sim/mppt_controller.hpp"
#include "h2sim/pv_model.hpp"
#include "h2sim/sim_engine.hpp"

#include <algorithm>
#include <random>
#include <vector>

using namespace h2sim;

namespace {

void age_all(StackState& s, double seconds) {
    for (auto& c : s.cells()) c.t_in_state += seconds;
}

struct Trace {
    std::vector<std::size_t> n_after;
    std::vector<std::size_t> activations;
    std::vector<TickOutcome> outcomes;
};

// Drives the controller against a static power map p(n), one tick per second.
// Direction changes are checked on every tick.
Trace drive(const std::vector<double>& p_of_n, std::size_t ticks) {
    const std::size_t n_total = p_of_n.size() - 1;
    StackState s(n_total);
    ControllerState ctrl;
    Trace tr;
    for (std::size_t k = 0; k < ticks; ++k) {
        const double p = p_of_n[s.active_count()];
        const ClimbDirection before = ctrl.dn;
        const double p_prev = ctrl.p_prev;
        const TickOutcome out = mppt_tick(ctrl, s, p);
        REQUIRE(out.flipped_on_power == (p < p_prev));
        REQUIRE((ctrl.dn != before) == (out.flipped_on_power != out.clamped));
        tr.outcomes.push_back(out);
        tr.n_after.push_back(out.n_active);
        if (out.activated) tr.activations.push_back(*out.activated);
        age_all(s, 1.0);
    }
    return tr;
}

// p_of_n[0] = 0 and a single interior peak at n_star.
std::vector<double> unimodal_map(std::size_t n_total, std::size_t n_star, std::mt19937& rng) {
    std::uniform_real_distribution<double> inc(1.0, 10.0);
    std::vector<double> p(n_total + 1, 0.0);
    for (std::size_t n = 1; n <= n_star; ++n) p[n] = p[n - 1] + inc(rng);
    for (std::size_t n = n_star + 1; n <= n_total; ++n) p[n] = p[n - 1] - std::min(inc(rng), p[n - 1] / 2.0);
    return p;
}

}  // namespace

TEST_CASE("select_cell picks the longest in the complementary state", "[mppt]") {
    StackState s(10);
    for (auto& c : s.cells()) c.active = true;
    s.cell(3).active = false;
    s.cell(3).t_in_state = 5.0;
    s.cell(7).active = false;
    s.cell(7).t_in_state = 9.0;
    CHECK(select_cell(s, true) == 7u);

    s.cell(7).t_in_state = 5.0;
    s.cell(3).active = true;
    s.cell(4).active = false;
    s.cell(4).t_in_state = 5.0;
    s.cell(9).active = false;
    s.cell(9).t_in_state = 5.0;
    s.cell(7).active = true;
    CHECK(select_cell(s, true) == 4u);

    StackState one(3);
    for (auto& c : one.cells()) c.active = true;
    one.cell(1).active = false;
    CHECK(select_cell(one, true) == 1u);

    StackState all_on(2);
    for (auto& c : all_on.cells()) c.active = true;
    CHECK_FALSE(select_cell(all_on, true).has_value());
}

TEST_CASE("select_cell honours a custom tie order", "[mppt]") {
    const std::vector<std::size_t> order{3, 2, 1, 0};
    const StackState s(4, order);
    CHECK(select_cell(s, true) == 3u);
}

TEST_CASE("power drop reverses the climb and removes the longest-active cell", "[mppt]") {
    StackState s(5);
    set_cell(s, 0, true);
    set_cell(s, 1, true);
    s.cell(0).t_in_state = 8.0;
    s.cell(1).t_in_state = 3.0;
    ControllerState ctrl{ClimbDirection::Add, 500.0, 0};

    const TickOutcome out = mppt_tick(ctrl, s, 400.0);
    CHECK(out.flipped_on_power);
    CHECK(ctrl.dn == ClimbDirection::Remove);
    CHECK(out.deactivated == 0u);
    CHECK_FALSE(out.activated);
    CHECK_FALSE(s.cell(0).active);
    CHECK(ctrl.p_prev == 400.0);
    CHECK(ctrl.tick_count == 1);
    CHECK(out.n_active == 1);
}

TEST_CASE("startup tick activates cell 0 without reversing", "[mppt]") {
    StackState s(30);
    age_all(s, 3.0);
    ControllerState ctrl;
    const TickOutcome out = mppt_tick(ctrl, s, 0.0);
    CHECK(out.activated == 0u);
    CHECK(ctrl.dn == ClimbDirection::Add);
    CHECK_FALSE(out.flipped_on_power);
    CHECK(s.active_count() == 1);
}

TEST_CASE("clamps at one active cell and at a full stack", "[mppt]") {
    SECTION("floor of one") {
        StackState s(4);
        set_cell(s, 2, true);
        ControllerState ctrl{ClimbDirection::Remove, 10.0, 0};
        const TickOutcome out = mppt_tick(ctrl, s, 10.0);
        CHECK(out.clamped);
        CHECK_FALSE(out.deactivated);
        CHECK(s.active_count() == 1);
        CHECK(ctrl.dn == ClimbDirection::Add);
    }
    SECTION("all active") {
        StackState s(3);
        for (std::size_t k = 0; k < 3; ++k) set_cell(s, k, true);
        ControllerState ctrl{ClimbDirection::Add, 10.0, 0};
        const TickOutcome out = mppt_tick(ctrl, s, 11.0);
        CHECK(out.clamped);
        CHECK_FALSE(out.activated);
        CHECK(ctrl.dn == ClimbDirection::Remove);
    }
    SECTION("negative power is rejected") {
        StackState s(3);
        ControllerState ctrl;
        CHECK_THROWS_AS(mppt_tick(ctrl, s, -1.0), std::invalid_argument);
    }
}

TEST_CASE("climb on the oracle power map settles around its argmax", "[mppt]") {
    const PvParams pv = calibrate(PvAnchors{});
    const CellParams cell;
    for (double g : {600.0, 1000.0}) {
        const auto sweep = oracle_sweep(pv, cell, 30, g);
        std::vector<double> p_of_n{0.0};
        for (const auto& op : sweep) p_of_n.push_back(op.p);
        const std::size_t n_star = oracle_argmax(sweep);

        const Trace tr = drive(p_of_n, 200);
        std::size_t entered = tr.n_after.size();
        for (std::size_t k = 0; k < tr.n_after.size(); ++k) {
            if (tr.n_after[k] + 1 >= n_star && tr.n_after[k] <= n_star + 1) {
                entered = k;
                break;
            }
        }
        REQUIRE(entered < tr.n_after.size());
        for (std::size_t k = entered; k < tr.n_after.size(); ++k) {
            INFO("g = " << g << " tick " << k);
            REQUIRE(tr.n_after[k] + 1 >= n_star);
            REQUIRE(tr.n_after[k] <= n_star + 1);
        }
    }
}

TEST_CASE("hill climb invariants on random unimodal maps", "[mppt][property]") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n_total = 2 + rng() % 39;
        const std::size_t n_star = 1 + rng() % n_total;
        const auto p_of_n = unimodal_map(n_total, n_star, rng);
        const std::size_t ticks = 12 * n_total + 60;
        const Trace tr = drive(p_of_n, ticks);
        INFO("n_total " << n_total << " n_star " << n_star);

        // One switch per tick at most.
        std::size_t prev_n = 0;
        for (const auto& out : tr.outcomes) {
            const std::size_t delta = out.n_active > prev_n ? out.n_active - prev_n : prev_n - out.n_active;
            REQUIRE(delta <= 1);
            REQUIRE((out.activated.has_value() + out.deactivated.has_value()) <= 1);
            prev_n = out.n_active;
        }

        // Band of at most three consecutive values once settled.
        const std::size_t settle = 2 * n_total + 4;
        const auto [lo, hi] = std::minmax_element(tr.n_after.begin() + settle, tr.n_after.end());
        REQUIRE(*hi - *lo <= 2);
        REQUIRE(*lo + 1 >= n_star);
        REQUIRE(*hi <= n_star + 1);

        // Round-robin wear levelling over every window of n_total activations.
        const std::size_t first = std::min(tr.activations.size(), 3 * n_total);
        for (std::size_t begin = first; begin + n_total <= tr.activations.size(); ++begin) {
            for (std::size_t k = n_total; begin + k <= tr.activations.size(); k += n_total) {
                std::vector<std::size_t> count(n_total, 0);
                for (std::size_t j = begin; j < begin + k; ++j) ++count[tr.activations[j]];
                const auto [cmin, cmax] = std::minmax_element(count.begin(), count.end());
                REQUIRE(*cmin == k / n_total);
                REQUIRE(*cmax == k / n_total);
            }
        }
    }
}
