#include "h2sim/mppt_controller.hpp"

#include <stdexcept>

namespace h2sim {

std::optional<std::size_t> select_cell(const StackState& stack, bool want_active) noexcept {
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < stack.size(); ++k) {
        const CellState& c = stack.cell(k);
        if (c.active == want_active) continue;
        if (!best) {
            best = k;
            continue;
        }
        const CellState& b = stack.cell(*best);
        if (c.t_in_state > b.t_in_state ||
            (c.t_in_state == b.t_in_state && stack.tie_rank(k) < stack.tie_rank(*best))) {
            best = k;
        }
    }
    return best;
}

TickOutcome mppt_tick(ControllerState& ctrl, StackState& stack, double p_curr) {
    if (!(p_curr >= 0.0)) throw std::invalid_argument("mppt_tick: sampled power must be non-negative");

    TickOutcome out;
    if (p_curr < ctrl.p_prev) {
        ctrl.dn = reversed(ctrl.dn);
        out.flipped_on_power = true;
    }

    const std::size_t n_active = stack.active_count();
    if (ctrl.dn == ClimbDirection::Add) {
        if (n_active == stack.size()) {
            out.clamped = true;
        } else if (auto k = select_cell(stack, true)) {
            set_cell(stack, *k, true);
            out.activated = k;
        }
    } else {
        if (n_active <= 1) {
            out.clamped = true;
        } else if (auto k = select_cell(stack, false)) {
            set_cell(stack, *k, false);
            out.deactivated = k;
        }
    }
    if (out.clamped) ctrl.dn = reversed(ctrl.dn);

    ctrl.p_prev = p_curr;
    ++ctrl.tick_count;
    out.n_active = stack.active_count();
    return out;
}

}  // namespace h2sim
