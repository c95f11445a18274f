#pragma once

#include "h2sim/electrolyser_stack.hpp"

#include <optional>
#include <vector>

namespace h2sim {

/// Per-cell usage balance at one instant.
///   ta[k]  = t_on_total[k] / elapsed
///   sta[k] = ta[k] / (n_active / n_total)
struct FairnessSnapshot {
    std::vector<double> ta;
    std::vector<double> sta;
    double max_delta_sta = 0.0;
};

/// Fairness of `stack` after `elapsed` seconds. The STA divisor uses the
/// instantaneous active count unless `mean_active` (time-averaged count) is
/// given. With no active cell and no override the divisor is undefined; sta
/// is then reported as 0 for every cell.
/// Throws MetricError if elapsed <= 0.
[[nodiscard]] FairnessSnapshot fairness(const StackState& stack, double elapsed,
                                        std::optional<double> mean_active = std::nullopt);

struct CostInputs {
    double converter_upfront = 2000.0;
    double years = 10.0;
    double annual_energy = 10000.0;    // kWh
    double rate_with_converter = 0.15; // currency/kWh
    double rate_without_converter = 0.14;

    void validate() const;
};

struct CostComparison {
    double cost_with = 0.0;
    double cost_without = 0.0;
    double savings = 0.0;
    double pct = 0.0;
};

/// Lifetime energy cost with and without a power converter. Money results are
/// rounded to whole cents; pct is computed from the rounded amounts.
/// Throws MetricError when cost_with is zero.
[[nodiscard]] CostComparison cost_comparison(const CostInputs& inputs);

}  // namespace h2sim
