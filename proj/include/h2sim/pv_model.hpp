#pragma once

// =============================================================================
// Single-diode PV array model
// =============================================================================
// I(V) = i_ph - i_0 * (exp(V / a) - 1), with i_ph = i_ph_ref * G / g_ref.
// Ideal form (no series or shunt resistance), calibrated from three datasheet
// anchors (Isc, Vmp/Pmp, Voc). Temperature is held at the reference value.
// =============================================================================

namespace h2sim {

/// Datasheet anchor points at reference conditions.
struct PvAnchors {
    double isc = 5.83;     // A
    double vmp = 108.4;    // V
    double pmp = 590.0;    // W
    double voc = 129.3;    // V
    double g_ref = 1000.0; // W/m^2
    double t_ref = 25.0;   // degC

    /// Throws CalibrationError naming the first violated anchor.
    void validate() const;
};

struct PvParams {
    double i_ph_ref = 0.0; // photocurrent at g_ref (A)
    double i_0 = 0.0;      // diode saturation current (A)
    double a = 0.0;        // modified ideality voltage n*Ns*Vt (V)
    double g_ref = 1000.0;
    double voc = 0.0;      // open-circuit voltage at g_ref, search bound for pv_mpp
};

struct PowerPoint {
    double v = 0.0;
    double p = 0.0;
};

/// Fits (i_ph_ref, i_0, a) to the anchors. i_ph_ref = isc and i_0 is tied to
/// voc; `a` is found by bisection on [1, 50] V so that d(VI)/dV = 0 at vmp.
/// Throws CalibrationError if the bracket holds no root or the resulting
/// power at vmp misses pmp by more than 0.5 %.
[[nodiscard]] PvParams calibrate(const PvAnchors& anchors);

/// Array current at bus voltage `v` and irradiance `g`. Negative above the
/// effective open-circuit voltage; the blocking diode is applied by the caller.
[[nodiscard]] double pv_current(const PvParams& params, double v, double g) noexcept;

/// dI/dV at `v` (irradiance independent).
[[nodiscard]] double pv_conductance(const PvParams& params, double v) noexcept;

/// Voltage at which pv_current(v, g) == 0. Returns 0 for g <= 0.
[[nodiscard]] double pv_open_circuit_voltage(const PvParams& params, double g) noexcept;

/// Maximum of V * I(V) over [0, voc] by golden-section search (1e-3 V).
/// Reporting and verification only; the controller never sees it.
[[nodiscard]] PowerPoint pv_mpp(const PvParams& params, double g);

}  // namespace h2sim
