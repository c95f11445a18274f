#pragma once

// =============================================================================
// PV -> blocking diode -> bus -> switchable stack, fixed-step simulation
// =============================================================================
// The 10 uF bus capacitor settles orders of magnitude faster than the cell RC
// (70 ms) and the controller period (1 s), so the bus is treated as an
// algebraic node: v_bus = stack_voltage, i = max(0, I_pv(v_bus)).
// =============================================================================

#include "h2sim/electrolyser_stack.hpp"
#include "h2sim/mppt_controller.hpp"
#include "h2sim/pv_model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace h2sim {

struct BusModel {
    double c_bus = 10e-6;      // F; documentation only under the quasi-static bus
    bool quasi_static = true;  // the only supported coupling
};

struct OperatingPoint {
    double v_bus = 0.0;
    double i = 0.0;
    double p = 0.0;
};

/// Piecewise-constant irradiance. Each segment ends at `until`; the end point
/// belongs to the segment when `closed_end` is set, otherwise to the next one.
class IrradianceProfile {
public:
    struct Segment {
        double until = 0.0;
        double g = 0.0;
        bool closed_end = false;
    };

    IrradianceProfile() = default;
    explicit IrradianceProfile(std::vector<Segment> segments);

    [[nodiscard]] static IrradianceProfile constant(double g, double until);

    /// Irradiance at time t. Past the last segment the last value holds.
    [[nodiscard]] double at(double t) const;
    [[nodiscard]] const std::vector<Segment>& segments() const noexcept { return segments_; }
    /// Distinct irradiance levels in order of first appearance.
    [[nodiscard]] std::vector<double> levels() const;

private:
    std::vector<Segment> segments_;
};

struct Scenario {
    double duration = 200.0;         // s
    double dt = 1e-3;                // s
    double temperature = 25.0;       // degC
    double controller_period = 1.0;  // s
    double record_interval = 0.1;    // s
    IrradianceProfile irradiance = IrradianceProfile::constant(1000.0, 200.0);

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const;
    [[nodiscard]] std::uint64_t total_steps() const;
    [[nodiscard]] std::uint64_t steps_per_tick() const;
    [[nodiscard]] std::uint64_t steps_per_record() const;
};

enum class StaDivisor { Instantaneous, TimeAveraged };

struct SimRecord {
    double t = 0.0;
    double irradiance = 0.0;
    double v_bus = 0.0;
    double i = 0.0;
    double p = 0.0;
    std::size_t n_active = 0;
    std::vector<double> sta;
    double max_delta_sta = 0.0;
};

/// One controller invocation as seen by the engine.
struct TickEvent {
    double t = 0.0;
    double irradiance = 0.0;
    double p_sampled = 0.0;
    TickOutcome outcome;
};

struct RunOptions {
    bool controller_enabled = true;
    /// Cells [0, initial_active) start switched on with discharged capacitors.
    std::size_t initial_active = 0;
    /// Optional tie-break permutation for cell selection.
    std::vector<std::size_t> tie_order;
    StaDivisor sta_divisor = StaDivisor::Instantaneous;
};

struct RunResult {
    std::vector<SimRecord> records;
    std::vector<TickEvent> ticks;
    StackState final_stack{0};
    ControllerState final_controller;
};

/// Bus operating point for the present stack. With no active cell the bus
/// floats at the PV open-circuit voltage and carries no current.
[[nodiscard]] OperatingPoint solve_operating_point(const PvParams& pv, const StackState& stack,
                                                   const CellParams& cell_params, double g) noexcept;

/// Steady state of a fixed n-cell stack with settled capacitors (v_c = i*r_e):
/// solves i = I_pv(n * (v_e + r_e * i), g) by bisection on [0, 1.1 * i_ph(g)].
[[nodiscard]] OperatingPoint steady_state_oracle(const PvParams& pv, const CellParams& cell_params,
                                                 std::size_t n, double g);

/// steady_state_oracle for n = 1..n_total (element k holds n = k + 1).
[[nodiscard]] std::vector<OperatingPoint> oracle_sweep(const PvParams& pv, const CellParams& cell_params,
                                                       std::size_t n_total, double g);

/// 1-based stack size with the highest oracle power (smallest n on ties).
[[nodiscard]] std::size_t oracle_argmax(const std::vector<OperatingPoint>& sweep) noexcept;

/// Fixed-step simulation. Per step: solve the bus, on controller boundaries
/// sample power and tick, re-solve, integrate the cells, and on record
/// boundaries emit a SimRecord of the post-step state.
class Simulation {
public:
    Simulation(Scenario scenario, PvParams pv, CellParams cell_params, std::size_t n_total,
               ControllerState controller = {}, RunOptions options = {});

    [[nodiscard]] bool done() const noexcept { return step_ >= total_steps_; }
    /// Advances one dt. Returns the record emitted at the end of this step, if any.
    std::optional<SimRecord> advance();
    [[nodiscard]] RunResult run_to_end();

    [[nodiscard]] double time() const noexcept;
    [[nodiscard]] const StackState& stack() const noexcept { return stack_; }
    [[nodiscard]] const ControllerState& controller() const noexcept { return controller_; }
    [[nodiscard]] const std::vector<TickEvent>& ticks() const noexcept { return ticks_; }
    [[nodiscard]] OperatingPoint operating_point() const noexcept;

private:
    SimRecord make_record(double t) const;

    Scenario scenario_;
    PvParams pv_;
    CellParams cell_params_;
    StackState stack_;
    ControllerState controller_;
    RunOptions options_;
    std::uint64_t step_ = 0;
    std::uint64_t total_steps_ = 0;
    std::uint64_t steps_per_tick_ = 1;
    std::uint64_t steps_per_record_ = 1;
    double active_time_integral_ = 0.0;  // integral of n_active dt
    std::vector<TickEvent> ticks_;
};

/// Convenience wrapper around Simulation::run_to_end.
[[nodiscard]] RunResult run(const Scenario& scenario, const PvParams& pv, const CellParams& cell_params,
                            std::size_t n_total, ControllerState controller = {}, RunOptions options = {});

}  // namespace h2sim
