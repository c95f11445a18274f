#include "h2sim/pv_model.hpp"

#include "h2sim/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace h2sim {

namespace {

constexpr double kIdealityLo = 1.0;
constexpr double kIdealityHi = 50.0;
constexpr double kPmpRelTol = 0.005;

[[nodiscard]] double saturation_current(double isc, double voc, double a) {
    return isc / std::expm1(voc / a);
}

// d(V*I)/dV at vmp for the candidate ideality voltage `a`.
[[nodiscard]] double power_slope_at_vmp(const PvAnchors& an, double a) {
    const double i0 = saturation_current(an.isc, an.voc, a);
    const double current = an.isc - i0 * std::expm1(an.vmp / a);
    const double conductance = -i0 * std::exp(an.vmp / a) / a;
    return current + an.vmp * conductance;
}

}  // namespace

void PvAnchors::validate() const {
    if (!(isc > 0.0)) throw CalibrationError("isc", "isc must be positive");
    if (!(vmp > 0.0)) throw CalibrationError("vmp", "vmp must be positive");
    if (!(voc > vmp)) throw CalibrationError("voc", "voc must exceed vmp");
    if (!(pmp > 0.0 && pmp / vmp < isc))
        throw CalibrationError("pmp", "pmp/vmp must lie in (0, isc)");
    if (!(g_ref > 0.0)) throw CalibrationError("g_ref", "g_ref must be positive");
}

PvParams calibrate(const PvAnchors& anchors) {
    anchors.validate();

    double lo = kIdealityLo;
    double hi = kIdealityHi;
    double f_lo = power_slope_at_vmp(anchors, lo);
    const double f_hi = power_slope_at_vmp(anchors, hi);
    if (!(f_lo > 0.0 && f_hi < 0.0)) {
        throw CalibrationError("vmp", "no ideality voltage in [1, 50] V places the power maximum at vmp = " +
                                          std::to_string(anchors.vmp) + " V");
    }
    // Bisect to the limit of double resolution; the slope is smooth in `a`.
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = power_slope_at_vmp(anchors, mid);
        if (f_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }

    PvParams params;
    params.a = 0.5 * (lo + hi);
    params.i_ph_ref = anchors.isc;
    params.i_0 = saturation_current(anchors.isc, anchors.voc, params.a);
    params.g_ref = anchors.g_ref;
    params.voc = anchors.voc;

    const double p_at_vmp = anchors.vmp * pv_current(params, anchors.vmp, anchors.g_ref);
    if (std::abs(p_at_vmp - anchors.pmp) > kPmpRelTol * anchors.pmp) {
        throw CalibrationError("pmp", "calibrated power at vmp is " + std::to_string(p_at_vmp) +
                                          " W, more than 0.5% from pmp = " + std::to_string(anchors.pmp) +
                                          " W; adjust voc");
    }
    return params;
}

double pv_current(const PvParams& params, double v, double g) noexcept {
    return params.i_ph_ref * (g / params.g_ref) - params.i_0 * std::expm1(v / params.a);
}

double pv_conductance(const PvParams& params, double v) noexcept {
    return -params.i_0 * std::exp(v / params.a) / params.a;
}

double pv_open_circuit_voltage(const PvParams& params, double g) noexcept {
    if (g <= 0.0) return 0.0;
    return params.a * std::log1p(params.i_ph_ref * (g / params.g_ref) / params.i_0);
}

PowerPoint pv_mpp(const PvParams& params, double g) {
    if (!(g > 0.0)) throw std::invalid_argument("pv_mpp: irradiance must be positive");

    const auto power = [&](double v) { return v * pv_current(params, v, g); };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

    double lo = 0.0;
    double hi = params.voc;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = power(x1);
    double f2 = power(x2);
    while (hi - lo > 1e-3) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = power(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = power(x1);
        }
    }
    const double v = 0.5 * (lo + hi);
    return {v, power(v)};
}

}  // namespace h2sim
