#include "h2sim/report.hpp"

#include "h2sim/metrics_cost.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace h2sim {

namespace {

// Shortest round-trippable-enough representation; stable across runs.
[[nodiscard]] std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

[[nodiscard]] std::string fixed(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

std::vector<SegmentBand> segment_bands(const Scenario& scenario, const std::vector<TickEvent>& ticks) {
    std::vector<SegmentBand> out;
    double begin = 0.0;
    for (const auto& seg : scenario.irradiance.segments()) {
        if (begin >= scenario.duration) break;
        SegmentBand band;
        band.t_begin = begin;
        band.t_end = std::min(seg.until, scenario.duration);
        band.irradiance = seg.g;
        const double settle_from = band.t_begin + 0.5 * (band.t_end - band.t_begin);
        double power_sum = 0.0;
        for (const auto& ev : ticks) {
            if (ev.t < settle_from || ev.t > band.t_end || ev.irradiance != seg.g) continue;
            const std::size_t n = ev.outcome.n_active;
            band.n_min = band.ticks == 0 ? n : std::min(band.n_min, n);
            band.n_max = band.ticks == 0 ? n : std::max(band.n_max, n);
            power_sum += ev.p_sampled;
            ++band.ticks;
        }
        if (band.ticks > 0) band.mean_power = power_sum / static_cast<double>(band.ticks);
        out.push_back(band);
        begin = seg.until;
    }
    return out;
}

std::string timeseries_header(std::size_t n_total) {
    std::string h = "t_s,irradiance_wm2,v_bus_v,i_a,p_w,n_active,max_delta_sta";
    for (std::size_t k = 0; k < n_total; ++k) h += ",sta_cell_" + std::to_string(k);
    return h;
}

void write_timeseries_csv(std::ostream& out, const std::vector<SimRecord>& records, std::size_t n_total) {
    out << timeseries_header(n_total) << '\n';
    for (const auto& r : records) {
        out << num(r.t) << ',' << num(r.irradiance) << ',' << num(r.v_bus) << ',' << num(r.i) << ','
            << num(r.p) << ',' << r.n_active << ',' << num(r.max_delta_sta);
        for (double s : r.sta) out << ',' << num(s);
        out << '\n';
    }
}

void write_summary(std::ostream& out, const RunConfig& config, const PvParams& pv, const RunResult& result) {
    const Scenario& sc = config.scenario;
    out << "scenario: " << config.scenario_name << '\n';
    out << "duration_s: " << num(sc.duration) << "  dt_s: " << num(sc.dt)
        << "  controller_period_s: " << num(sc.controller_period) << "  n_total: " << config.n_total << '\n';
    out << "pv_params: i_ph_ref=" << num(pv.i_ph_ref) << " A  i_0=" << num(pv.i_0) << " A  a=" << num(pv.a)
        << " V  voc=" << num(pv.voc) << " V\n";
    out << "controller_ticks: " << result.ticks.size() << '\n';

    out << "\nactive-cell bands (second half of each irradiance segment):\n";
    for (const auto& band : segment_bands(sc, result.ticks)) {
        out << "  [" << num(band.t_begin) << ", " << num(band.t_end) << "] s  g=" << num(band.irradiance)
            << " W/m^2  ";
        if (band.ticks == 0) {
            out << "no controller ticks\n";
            continue;
        }
        const auto sweep = oracle_sweep(pv, config.cell, config.n_total, band.irradiance);
        const std::size_t n_best = oracle_argmax(sweep);
        const double p_best = sweep[n_best - 1].p;
        out << "band={" << band.n_min;
        for (std::size_t n = band.n_min + 1; n <= band.n_max; ++n) out << ", " << n;
        out << "}  oracle_argmax=" << n_best << "  mean_p=" << fixed(band.mean_power, 2)
            << " W  oracle_p=" << fixed(p_best, 2) << " W  tracking="
            << fixed(p_best > 0.0 ? 100.0 * band.mean_power / p_best : 0.0, 2) << " %";
        if (band.irradiance > 0.0) {
            const PowerPoint mpp = pv_mpp(pv, band.irradiance);
            out << "  pv_mpp=" << fixed(mpp.p, 2) << " W @ " << fixed(mpp.v, 3) << " V";
        }
        out << '\n';
    }

    out << "\nfinal max_delta_sta: ";
    if (result.records.empty()) {
        out << "n/a (no records)\n";
    } else {
        out << num(result.records.back().max_delta_sta) << " at t=" << num(result.records.back().t) << " s\n";
    }

    const CostComparison cost = cost_comparison(config.cost);
    out << "\ncost comparison over " << num(config.cost.years) << " years:\n";
    out << "  with converter:    " << fixed(cost.cost_with, 2) << '\n';
    out << "  without converter: " << fixed(cost.cost_without, 2) << '\n';
    out << "  savings:           " << fixed(cost.savings, 2) << '\n';
    out << "  savings_pct:       " << fixed(cost.pct, 4) << " %\n";
}

void write_oracle_report(std::ostream& out, const RunConfig& config, const PvParams& pv) {
    for (double g : config.scenario.irradiance.levels()) {
        const auto sweep = oracle_sweep(pv, config.cell, config.n_total, g);
        const std::size_t best = oracle_argmax(sweep);
        out << "# irradiance " << num(g) << " W/m^2\n";
        out << "n,v_bus_v,i_a,p_w,argmax\n";
        for (std::size_t k = 0; k < sweep.size(); ++k) {
            out << (k + 1) << ',' << fixed(sweep[k].v_bus, 4) << ',' << fixed(sweep[k].i, 6) << ','
                << fixed(sweep[k].p, 4) << ',' << (k + 1 == best ? "*" : "") << '\n';
        }
        if (g > 0.0) {
            const PowerPoint mpp = pv_mpp(pv, g);
            out << "# pv_mpp " << fixed(mpp.p, 4) << " W at " << fixed(mpp.v, 4) << " V\n";
        }
    }
}

}  // namespace h2sim
