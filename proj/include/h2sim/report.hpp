#pragma once

// CSV and text outputs of a run, and the oracle table.

#include "h2sim/config.hpp"
#include "h2sim/sim_engine.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace h2sim {

/// Active-count behaviour over the settled half of one irradiance segment.
struct SegmentBand {
    double t_begin = 0.0;
    double t_end = 0.0;
    double irradiance = 0.0;
    std::size_t n_min = 0;
    std::size_t n_max = 0;
    double mean_power = 0.0;  // mean tick-sampled power over the settled half
    std::size_t ticks = 0;
};

/// One entry per profile segment that overlaps [0, duration]. Segments with no
/// tick in their second half report ticks == 0.
[[nodiscard]] std::vector<SegmentBand> segment_bands(const Scenario& scenario, const std::vector<TickEvent>& ticks);

[[nodiscard]] std::string timeseries_header(std::size_t n_total);
void write_timeseries_csv(std::ostream& out, const std::vector<SimRecord>& records, std::size_t n_total);
void write_summary(std::ostream& out, const RunConfig& config, const PvParams& pv, const RunResult& result);
void write_oracle_report(std::ostream& out, const RunConfig& config, const PvParams& pv);

}  // namespace h2sim
