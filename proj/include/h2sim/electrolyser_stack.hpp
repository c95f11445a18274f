#pragma once

// =============================================================================
// Switchable series stack of PEM electrolyser cells
// =============================================================================
// Each cell is a reversible-potential diode (v_e) in series with a parallel
// R_e || C_e branch. Active cells carry the common stack current; bypassed
// cells are shorted out of the string and their capacitor discharges through
// its own resistor.
// =============================================================================

#include <cstddef>
#include <span>
#include <vector>

namespace h2sim {

struct CellParams {
    double v_e = 1.5;  // V
    double c_e = 0.1;  // F
    double r_e = 0.7;  // Ohm

    [[nodiscard]] double tau() const noexcept { return r_e * c_e; }
    void validate() const;
};

struct CellState {
    bool active = false;
    double v_c = 0.0;         // RC branch voltage (V)
    double t_in_state = 0.0;  // time since last switch (s)
    double t_on_total = 0.0;  // cumulative active time (s)
};

/// Fixed-length ordered set of cells. Cell identity is the index; an optional
/// tie-break rank reorders only which cell wins equal-time selections.
class StackState {
public:
    explicit StackState(std::size_t n_total);

    /// `tie_order` lists cell indices from highest to lowest tie-break priority;
    /// it must be a permutation of [0, n_total).
    StackState(std::size_t n_total, std::span<const std::size_t> tie_order);

    [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }
    [[nodiscard]] std::size_t active_count() const noexcept;

    [[nodiscard]] const CellState& cell(std::size_t index) const { return cells_.at(index); }
    [[nodiscard]] CellState& cell(std::size_t index) { return cells_.at(index); }
    [[nodiscard]] std::span<const CellState> cells() const noexcept { return cells_; }
    [[nodiscard]] std::span<CellState> cells() noexcept { return cells_; }

    /// Smaller rank wins ties. Identity ordering unless a tie order was given.
    [[nodiscard]] std::size_t tie_rank(std::size_t index) const { return tie_rank_.at(index); }

private:
    std::vector<CellState> cells_;
    std::vector<std::size_t> tie_rank_;
};

/// Sum of (v_e + v_c) over active cells; 0 when none is active.
[[nodiscard]] double stack_voltage(const StackState& stack, const CellParams& params) noexcept;

/// Advances every cell by one explicit Euler step of length `dt`.
/// Active:   dv_c/dt = (i_stack - v_c / r_e) / c_e
/// Bypassed: dv_c/dt = -v_c / (r_e * c_e)
/// Throws StepSizeError when dt > tau / 10, std::invalid_argument when
/// i_stack < 0 or dt <= 0.
void step_cells(StackState& stack, const CellParams& params, double i_stack, double dt);

/// Switches a cell on or off, resetting its time-in-state. v_c is kept.
/// Returns false (and changes nothing) if the cell is already in that state.
/// Throws std::out_of_range for a bad index.
bool set_cell(StackState& stack, std::size_t index, bool active);

}  // namespace h2sim
