#pragma once

// Hill-climbing MPPT on stack size with wear-levelled cell selection.
//
// Each tick compares the sampled power with the previous sample, reverses the
// climb direction on a strict decrease, then either activates the cell that
// has been idle longest or deactivates the one that has been on longest.
// At most one cell changes state per tick.

#include "h2sim/electrolyser_stack.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>

namespace h2sim {

enum class ClimbDirection : int { Remove = -1, Add = 1 };

[[nodiscard]] constexpr ClimbDirection reversed(ClimbDirection d) noexcept {
    return d == ClimbDirection::Add ? ClimbDirection::Remove : ClimbDirection::Add;
}

struct ControllerState {
    ClimbDirection dn = ClimbDirection::Add;
    double p_prev = 0.0;
    std::uint64_t tick_count = 0;
};

struct TickOutcome {
    std::optional<std::size_t> activated;
    std::optional<std::size_t> deactivated;
    bool flipped_on_power = false;  // strict power decrease
    bool clamped = false;           // requested move impossible (floor of 1 or all active)
    std::size_t n_active = 0;       // after the tick
};

/// Index of the cell with the largest t_in_state among cells whose state is
/// !want_active (i.e. candidates for switching to want_active). Ties go to the
/// smallest tie rank. std::nullopt when no candidate exists.
[[nodiscard]] std::optional<std::size_t> select_cell(const StackState& stack, bool want_active) noexcept;

/// One controller update. Time-in-state is assumed already advanced by the
/// engine. Throws std::invalid_argument for negative power.
TickOutcome mppt_tick(ControllerState& ctrl, StackState& stack, double p_curr);

}  // namespace h2sim
