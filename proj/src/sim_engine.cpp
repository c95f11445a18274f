#include "h2sim/sim_engine.hpp"

#include "h2sim/errors.hpp"
#include "h2sim/metrics_cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace h2sim {

namespace {

constexpr double kOracleCurrentTol = 1e-9;

// Number of dt steps in `span`, requiring an integer multiple.
[[nodiscard]] std::uint64_t whole_steps(double span, double dt, const char* what) {
    const double ratio = span / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        throw std::invalid_argument(std::string(what) + " must be a positive integer multiple of dt");
    }
    return static_cast<std::uint64_t>(rounded);
}

}  // namespace

// ---------------------------------------------------------------------------
// Irradiance profile
// ---------------------------------------------------------------------------

IrradianceProfile::IrradianceProfile(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw std::invalid_argument("irradiance profile needs at least one segment");
    double prev = 0.0;
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const auto& s = segments_[k];
        if (!(s.g >= 0.0)) throw std::invalid_argument("irradiance must be non-negative");
        if (k == 0 ? s.until < 0.0 : !(s.until > prev)) {
            throw std::invalid_argument("irradiance segment ends must be strictly increasing");
        }
        prev = s.until;
    }
}

IrradianceProfile IrradianceProfile::constant(double g, double until) {
    return IrradianceProfile({{until, g, true}});
}

double IrradianceProfile::at(double t) const {
    for (const auto& s : segments_) {
        if (t < s.until || (s.closed_end && t == s.until)) return s.g;
    }
    return segments_.empty() ? 0.0 : segments_.back().g;
}

std::vector<double> IrradianceProfile::levels() const {
    std::vector<double> out;
    for (const auto& s : segments_) {
        if (std::find(out.begin(), out.end(), s.g) == out.end()) out.push_back(s.g);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

void Scenario::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(duration >= 0.0)) throw std::invalid_argument("duration must be non-negative");
    (void)whole_steps(controller_period, dt, "controller_period");
    (void)whole_steps(record_interval, dt, "record_interval");
    if (irradiance.segments().empty()) throw std::invalid_argument("irradiance profile is empty");
    if (irradiance.segments().back().until < duration) {
        throw std::invalid_argument("irradiance profile ends at " +
                                    std::to_string(irradiance.segments().back().until) +
                                    " s, before duration " + std::to_string(duration) + " s");
    }
}

std::uint64_t Scenario::total_steps() const {
    return static_cast<std::uint64_t>(std::floor(duration / dt + 1e-9));
}

std::uint64_t Scenario::steps_per_tick() const { return whole_steps(controller_period, dt, "controller_period"); }

std::uint64_t Scenario::steps_per_record() const { return whole_steps(record_interval, dt, "record_interval"); }

// ---------------------------------------------------------------------------
// Static solutions
// ---------------------------------------------------------------------------

OperatingPoint solve_operating_point(const PvParams& pv, const StackState& stack, const CellParams& cell_params,
                                     double g) noexcept {
    if (stack.active_count() == 0) return {pv_open_circuit_voltage(pv, g), 0.0, 0.0};
    OperatingPoint op;
    op.v_bus = stack_voltage(stack, cell_params);
    op.i = std::max(0.0, pv_current(pv, op.v_bus, g));
    op.p = op.v_bus * op.i;
    return op;
}

OperatingPoint steady_state_oracle(const PvParams& pv, const CellParams& cell_params, std::size_t n, double g) {
    if (n == 0) throw std::invalid_argument("steady_state_oracle: n must be at least 1");
    const auto cells = static_cast<double>(n);
    const auto mismatch = [&](double i) {
        return pv_current(pv, cells * (cell_params.v_e + cell_params.r_e * i), g) - i;
    };
    const auto at = [&](double i) {
        const double v = cells * (cell_params.v_e + cell_params.r_e * i);
        return OperatingPoint{v, i, v * i};
    };

    // Source current at the bare threshold voltage; non-positive means the diode blocks.
    if (mismatch(0.0) <= 0.0) return at(0.0);

    double lo = 0.0;
    double hi = 1.1 * pv.i_ph_ref * (g / pv.g_ref);
    if (!(mismatch(hi) < 0.0)) throw NumericalError("steady_state_oracle: bracket has no sign change");
    while (hi - lo > kOracleCurrentTol) {
        const double mid = 0.5 * (lo + hi);
        (mismatch(mid) > 0.0 ? lo : hi) = mid;
    }
    return at(0.5 * (lo + hi));
}

std::vector<OperatingPoint> oracle_sweep(const PvParams& pv, const CellParams& cell_params, std::size_t n_total,
                                         double g) {
    std::vector<OperatingPoint> out;
    out.reserve(n_total);
    for (std::size_t n = 1; n <= n_total; ++n) out.push_back(steady_state_oracle(pv, cell_params, n, g));
    return out;
}

std::size_t oracle_argmax(const std::vector<OperatingPoint>& sweep) noexcept {
    std::size_t best = 0;
    for (std::size_t k = 1; k < sweep.size(); ++k) {
        if (sweep[k].p > sweep[best].p) best = k;
    }
    return best + 1;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

Simulation::Simulation(Scenario scenario, PvParams pv, CellParams cell_params, std::size_t n_total,
                       ControllerState controller, RunOptions options)
    : scenario_(std::move(scenario)),
      pv_(pv),
      cell_params_(cell_params),
      stack_(options.tie_order.empty() ? StackState(n_total) : StackState(n_total, options.tie_order)),
      controller_(controller),
      options_(std::move(options)) {
    scenario_.validate();
    cell_params_.validate();
    if (n_total == 0) throw std::invalid_argument("n_total must be at least 1");
    if (options_.initial_active > n_total) throw std::invalid_argument("initial_active exceeds n_total");

    total_steps_ = scenario_.total_steps();
    steps_per_tick_ = scenario_.steps_per_tick();
    steps_per_record_ = scenario_.steps_per_record();
    for (std::size_t k = 0; k < options_.initial_active; ++k) set_cell(stack_, k, true);
    for (auto& c : stack_.cells()) c.t_in_state = 0.0;
}

double Simulation::time() const noexcept { return static_cast<double>(step_) * scenario_.dt; }

OperatingPoint Simulation::operating_point() const noexcept {
    return solve_operating_point(pv_, stack_, cell_params_, scenario_.irradiance.at(time()));
}

std::optional<SimRecord> Simulation::advance() {
    if (done()) return std::nullopt;

    const double t = time();
    const double g = scenario_.irradiance.at(t);
    if (options_.controller_enabled && step_ % steps_per_tick_ == 0) {
        const OperatingPoint sampled = solve_operating_point(pv_, stack_, cell_params_, g);
        TickEvent ev{t, g, sampled.p, mppt_tick(controller_, stack_, sampled.p)};
        ticks_.push_back(ev);
    }

    const OperatingPoint op = solve_operating_point(pv_, stack_, cell_params_, g);
    step_cells(stack_, cell_params_, op.i, scenario_.dt);
    active_time_integral_ += static_cast<double>(stack_.active_count()) * scenario_.dt;
    ++step_;

    if (step_ % steps_per_record_ == 0) return make_record(time());
    return std::nullopt;
}

SimRecord Simulation::make_record(double t) const {
    SimRecord rec;
    rec.t = t;
    rec.irradiance = scenario_.irradiance.at(t);
    const OperatingPoint op = solve_operating_point(pv_, stack_, cell_params_, rec.irradiance);
    rec.v_bus = op.v_bus;
    rec.i = op.i;
    rec.p = op.p;
    rec.n_active = stack_.active_count();

    std::optional<double> mean_active;
    if (options_.sta_divisor == StaDivisor::TimeAveraged) mean_active = active_time_integral_ / t;
    FairnessSnapshot snap = fairness(stack_, t, mean_active);
    rec.sta = std::move(snap.sta);
    rec.max_delta_sta = snap.max_delta_sta;
    return rec;
}

RunResult Simulation::run_to_end() {
    RunResult result;
    result.records.reserve(static_cast<std::size_t>((total_steps_ - step_) / steps_per_record_));
    while (!done()) {
        if (auto rec = advance()) result.records.push_back(std::move(*rec));
    }
    result.ticks = ticks_;
    result.final_stack = stack_;
    result.final_controller = controller_;
    return result;
}

RunResult run(const Scenario& scenario, const PvParams& pv, const CellParams& cell_params, std::size_t n_total,
              ControllerState controller, RunOptions options) {
    Simulation sim(scenario, pv, cell_params, n_total, controller, std::move(options));
    return sim.run_to_end();
}

}  // namespace h2sim
