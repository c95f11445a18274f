// h2sim: converter-less PV/electrolyser MPPT simulator.
//
//   h2sim run [--scenario <name>|--config <path>] [--out <dir>] [--duration <s>]
//             [--dt <s>] [--seed-order <file>]
//   h2sim oracle [--scenario <name>|--config <path>]
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 I/O, 4 numerical.

#include "h2sim/config.hpp"
#include "h2sim/errors.hpp"
#include "h2sim/pv_model.hpp"
#include "h2sim/report.hpp"
#include "h2sim/sim_engine.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace h2sim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonArgs {
    std::string scenario;
    std::string config_path;
};

RunConfig resolve_config(const CommonArgs& args) {
    if (!args.config_path.empty()) return load_config(args.config_path);
    return builtin_config(args.scenario.empty() ? "startup" : args.scenario);
}

PvParams calibrate_or_config_error(const RunConfig& cfg) {
    try {
        return calibrate(cfg.pv);
    } catch (const CalibrationError& e) {
        throw ConfigError("pv." + e.anchor(), e.what());
    }
}

int do_run(const CommonArgs& common, const std::string& out_dir, std::optional<double> duration,
           std::optional<double> dt, const std::string& seed_order) {
    RunConfig cfg = resolve_config(common);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (dt) override_dt(cfg, *dt);
    if (duration) override_duration(cfg, *duration);
    if (!seed_order.empty()) cfg.tie_order = load_permutation(seed_order, cfg.n_total);
    cfg.validate();

    const PvParams pv = calibrate_or_config_error(cfg);

    RunOptions opts;
    opts.tie_order = cfg.tie_order;
    opts.sta_divisor = cfg.sta_divisor;
    const RunResult result = run(cfg.scenario, pv, cfg.cell, cfg.n_total, {}, opts);

    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());

    const fs::path csv_path = cfg.output_dir / "timeseries.csv";
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) throw IoError("cannot open " + csv_path.string());
    write_timeseries_csv(csv, result.records, cfg.n_total);
    csv.flush();
    if (!csv) throw IoError("write failed: " + csv_path.string());

    const fs::path summary_path = cfg.output_dir / "summary.txt";
    std::ofstream summary(summary_path, std::ios::binary);
    if (!summary) throw IoError("cannot open " + summary_path.string());
    write_summary(summary, cfg, pv, result);
    summary.flush();
    if (!summary) throw IoError("write failed: " + summary_path.string());

    std::cout << "wrote " << csv_path.string() << " (" << result.records.size() << " records) and "
              << summary_path.string() << '\n';
    return 0;
}

int do_oracle(const CommonArgs& common) {
    const RunConfig cfg = resolve_config(common);
    cfg.validate();
    write_oracle_report(std::cout, cfg, calibrate_or_config_error(cfg));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Converter-less PV/electrolyser MPPT simulator"};
    app.require_subcommand(1);

    CommonArgs run_args;
    std::string out_dir;
    std::optional<double> duration;
    std::optional<double> dt;
    std::string seed_order;
    auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write timeseries.csv and summary.txt");
    auto* run_scn = run_cmd->add_option("--scenario", run_args.scenario, "Built-in scenario (startup, irradiance-step)");
    auto* run_cfg = run_cmd->add_option("--config", run_args.config_path, "JSON run configuration");
    run_scn->excludes(run_cfg);
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--duration", duration, "Override run horizon (s)");
    run_cmd->add_option("--dt", dt, "Override integration step (s)");
    run_cmd->add_option("--seed-order", seed_order, "File with a permutation of cell indices for tie-breaking");

    CommonArgs oracle_args;
    auto* oracle_cmd = app.add_subcommand("oracle", "Print steady-state power for every stack size");
    auto* or_scn = oracle_cmd->add_option("--scenario", oracle_args.scenario, "Built-in scenario");
    auto* or_cfg = oracle_cmd->add_option("--config", oracle_args.config_path, "JSON run configuration");
    or_scn->excludes(or_cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return do_run(run_args, out_dir, duration, dt, seed_order);
        return do_oracle(oracle_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}
