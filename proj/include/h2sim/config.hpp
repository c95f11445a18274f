#pragma once

// Run configuration: JSON file or built-in scenario, plus command-line
// overrides. Unknown keys are rejected; every error names the dotted key.

#include "h2sim/electrolyser_stack.hpp"
#include "h2sim/metrics_cost.hpp"
#include "h2sim/pv_model.hpp"
#include "h2sim/sim_engine.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace h2sim {

struct RunConfig {
    std::string scenario_name = "startup";
    bool builtin_scenario = true;
    Scenario scenario;
    PvAnchors pv;
    CellParams cell;
    BusModel bus;
    std::size_t n_total = 30;
    std::filesystem::path output_dir = "out";
    StaDivisor sta_divisor = StaDivisor::Instantaneous;
    CostInputs cost;
    std::vector<std::size_t> tie_order;

    /// Cross-field checks; throws ConfigError.
    void validate() const;
};

/// Constant 1000 W/m^2 at 25 degC for 200 s.
[[nodiscard]] Scenario startup_scenario();
/// 600 on [0,100), 1000 on [100,200], 600 on (200,300] W/m^2.
[[nodiscard]] Scenario irradiance_step_scenario();

[[nodiscard]] std::vector<std::string> builtin_scenario_names();
/// Throws ConfigError("scenario", ...) for an unknown name.
[[nodiscard]] RunConfig builtin_config(std::string_view name);

/// Parses JSON text. Throws ConfigError.
[[nodiscard]] RunConfig parse_config(std::string_view json_text);
/// Reads and parses a config file. Throws ConfigError (including unreadable file).
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Whitespace-separated permutation of cell indices. Throws ConfigError.
[[nodiscard]] std::vector<std::size_t> load_permutation(const std::filesystem::path& path, std::size_t n_total);

/// Overrides the run horizon. Built-in profiles are extended so their last
/// level holds to the new end; custom profiles must already cover it.
void override_duration(RunConfig& config, double duration);
void override_dt(RunConfig& config, double dt);

}  // namespace h2sim
