#include "h2sim/electrolyser_stack.hpp"

#include "h2sim/errors.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace h2sim {

void CellParams::validate() const {
    if (!(v_e > 0.0)) throw std::invalid_argument("cell v_e must be positive");
    if (!(c_e > 0.0)) throw std::invalid_argument("cell c_e must be positive");
    if (!(r_e > 0.0)) throw std::invalid_argument("cell r_e must be positive");
}

StackState::StackState(std::size_t n_total) : cells_(n_total), tie_rank_(n_total) {
    std::iota(tie_rank_.begin(), tie_rank_.end(), std::size_t{0});
}

StackState::StackState(std::size_t n_total, std::span<const std::size_t> tie_order)
    : cells_(n_total), tie_rank_(n_total, n_total) {
    if (tie_order.size() != n_total) {
        throw std::invalid_argument("tie order has " + std::to_string(tie_order.size()) +
                                    " entries, expected " + std::to_string(n_total));
    }
    for (std::size_t rank = 0; rank < n_total; ++rank) {
        const std::size_t index = tie_order[rank];
        if (index >= n_total || tie_rank_[index] != n_total) {
            throw std::invalid_argument("tie order is not a permutation of cell indices");
        }
        tie_rank_[index] = rank;
    }
}

std::size_t StackState::active_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(cells_.begin(), cells_.end(), [](const CellState& c) { return c.active; }));
}

double stack_voltage(const StackState& stack, const CellParams& params) noexcept {
    double v = 0.0;
    for (const auto& c : stack.cells()) {
        if (c.active) v += params.v_e + c.v_c;
    }
    return v;
}

void step_cells(StackState& stack, const CellParams& params, double i_stack, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_cells: dt must be positive");
    if (!(i_stack >= 0.0)) throw std::invalid_argument("step_cells: stack current must be non-negative");
    if (dt > params.tau() / 10.0) {
        throw StepSizeError("dt = " + std::to_string(dt) + " s exceeds tau/10 = " +
                            std::to_string(params.tau() / 10.0) + " s");
    }

    const double decay = dt / params.tau();
    const double charge = dt / params.c_e;
    for (auto& c : stack.cells()) {
        if (c.active) {
            c.v_c += charge * i_stack - decay * c.v_c;
            c.t_on_total += dt;
        } else {
            c.v_c -= decay * c.v_c;
        }
        // dt <= tau/10 keeps both updates non-negative; clamp guards round-off.
        c.v_c = std::max(c.v_c, 0.0);
        c.t_in_state += dt;
    }
}

bool set_cell(StackState& stack, std::size_t index, bool active) {
    if (index >= stack.size()) {
        throw std::out_of_range("cell index " + std::to_string(index) + " out of range for stack of " +
                                std::to_string(stack.size()));
    }
    CellState& c = stack.cell(index);
    if (c.active == active) return false;
    c.active = active;
    c.t_in_state = 0.0;
    return true;
}

}  // namespace h2sim
