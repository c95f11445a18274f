#include "h2sim/metrics_cost.hpp"

#include "h2sim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace h2sim {

namespace {

// Currency amounts are settled to whole cents.
[[nodiscard]] double to_cents(double amount) { return std::round(amount * 100.0) / 100.0; }

}  // namespace

FairnessSnapshot fairness(const StackState& stack, double elapsed, std::optional<double> mean_active) {
    if (!(elapsed > 0.0)) throw MetricError("fairness undefined for non-positive elapsed time");

    const auto n_total = static_cast<double>(stack.size());
    const double n_active = mean_active.value_or(static_cast<double>(stack.active_count()));

    FairnessSnapshot snap;
    snap.ta.reserve(stack.size());
    snap.sta.reserve(stack.size());
    for (const auto& c : stack.cells()) {
        const double ta = c.t_on_total / elapsed;
        snap.ta.push_back(ta);
        snap.sta.push_back(n_active > 0.0 ? ta / (n_active / n_total) : 0.0);
    }
    if (!snap.sta.empty()) {
        const auto [lo, hi] = std::minmax_element(snap.sta.begin(), snap.sta.end());
        snap.max_delta_sta = *hi - *lo;
    }
    return snap;
}

void CostInputs::validate() const {
    if (converter_upfront < 0.0 || annual_energy < 0.0 || rate_with_converter < 0.0 ||
        rate_without_converter < 0.0) {
        throw std::invalid_argument("cost inputs must be non-negative");
    }
    if (years < 1.0) throw std::invalid_argument("cost years must be at least 1");
}

CostComparison cost_comparison(const CostInputs& in) {
    in.validate();
    CostComparison out;
    out.cost_with = to_cents(in.converter_upfront + in.years * in.annual_energy * in.rate_with_converter);
    out.cost_without = to_cents(in.years * in.annual_energy * in.rate_without_converter);
    out.savings = to_cents(out.cost_with - out.cost_without);
    if (out.cost_with == 0.0) throw MetricError("percentage savings undefined: cost with converter is zero");
    out.pct = 100.0 * out.savings / out.cost_with;
    return out;
}

}  // namespace h2sim
