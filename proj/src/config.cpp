#include "h2sim/config.hpp"

#include "h2sim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace h2sim {

namespace {

using nlohmann::json;

[[nodiscard]] std::string join_key(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void require_object(const json& j, const std::string& key) {
    if (!j.is_object()) throw ConfigError(key.empty() ? "<root>" : key, "expected an object");
}

void reject_unknown(const json& j, const std::string& prefix, std::initializer_list<std::string_view> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw ConfigError(join_key(prefix, it.key()), "unknown key");
        }
    }
}

void read_number(const json& j, const std::string& prefix, const char* key, double& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_number()) throw ConfigError(join_key(prefix, key), "expected a number");
    out = it->get<double>();
}

void read_count(const json& j, const std::string& prefix, const char* key, std::size_t& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    if (!it->is_number_unsigned()) throw ConfigError(join_key(prefix, key), "expected a non-negative integer");
    out = it->get<std::size_t>();
}

// Rebuilds `profile` so its last segment ends no earlier than `until`.
[[nodiscard]] IrradianceProfile extend_profile(const IrradianceProfile& profile, double until) {
    auto segs = profile.segments();
    if (!segs.empty() && segs.back().until < until) {
        segs.back().until = until;
        segs.back().closed_end = true;
    }
    return IrradianceProfile(std::move(segs));
}

[[nodiscard]] IrradianceProfile parse_profile(const json& j, const std::string& key) {
    if (!j.is_array() || j.empty()) throw ConfigError(key, "expected a non-empty array of segments");
    std::vector<IrradianceProfile::Segment> segs;
    for (std::size_t k = 0; k < j.size(); ++k) {
        const std::string item_key = key + "[" + std::to_string(k) + "]";
        const json& item = j[k];
        require_object(item, item_key);
        reject_unknown(item, item_key, {"until", "g", "closed_end"});
        if (!item.contains("until") || !item.contains("g")) {
            throw ConfigError(item_key, "segment needs 'until' and 'g'");
        }
        IrradianceProfile::Segment s;
        read_number(item, item_key, "until", s.until);
        read_number(item, item_key, "g", s.g);
        if (auto it = item.find("closed_end"); it != item.end()) {
            if (!it->is_boolean()) throw ConfigError(item_key + ".closed_end", "expected a boolean");
            s.closed_end = it->get<bool>();
        }
        segs.push_back(s);
    }
    try {
        return IrradianceProfile(std::move(segs));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(key, e.what());
    }
}

void parse_scenario_object(const json& j, RunConfig& cfg) {
    const std::string prefix = "scenario";
    reject_unknown(j, prefix, {"name", "duration", "dt", "temperature", "controller_period", "record_interval",
                               "irradiance"});
    if (!j.contains("irradiance")) throw ConfigError("scenario.irradiance", "inline scenario needs a profile");
    cfg.builtin_scenario = false;
    cfg.scenario_name = "custom";
    if (auto it = j.find("name"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("scenario.name", "expected a string");
        cfg.scenario_name = it->get<std::string>();
    }
    Scenario s;
    read_number(j, prefix, "duration", s.duration);
    read_number(j, prefix, "dt", s.dt);
    read_number(j, prefix, "temperature", s.temperature);
    read_number(j, prefix, "controller_period", s.controller_period);
    read_number(j, prefix, "record_interval", s.record_interval);
    s.irradiance = parse_profile(j["irradiance"], "scenario.irradiance");
    cfg.scenario = std::move(s);
}

}  // namespace

// ---------------------------------------------------------------------------

Scenario startup_scenario() {
    Scenario s;
    s.duration = 200.0;
    s.irradiance = IrradianceProfile::constant(1000.0, s.duration);
    return s;
}

Scenario irradiance_step_scenario() {
    Scenario s;
    s.duration = 300.0;
    s.irradiance = IrradianceProfile({{100.0, 600.0, false}, {200.0, 1000.0, true}, {300.0, 600.0, true}});
    return s;
}

std::vector<std::string> builtin_scenario_names() { return {"startup", "irradiance-step"}; }

RunConfig builtin_config(std::string_view name) {
    RunConfig cfg;
    cfg.scenario_name = std::string(name);
    cfg.builtin_scenario = true;
    if (name == "startup") {
        cfg.scenario = startup_scenario();
    } else if (name == "irradiance-step") {
        cfg.scenario = irradiance_step_scenario();
    } else {
        throw ConfigError("scenario", "unknown built-in scenario '" + std::string(name) + "'");
    }
    return cfg;
}

void RunConfig::validate() const {
    try {
        pv.validate();
    } catch (const CalibrationError& e) {
        throw ConfigError("pv." + e.anchor(), e.what());
    }
    try {
        cell.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("cell", e.what());
    }
    try {
        scenario.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("scenario", e.what());
    }
    try {
        cost.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("cost", e.what());
    }
    if (n_total == 0) throw ConfigError("n_total", "must be at least 1");
    if (!(bus.c_bus > 0.0)) throw ConfigError("bus.c_bus", "must be positive");
    if (scenario.temperature != pv.t_ref) {
        throw ConfigError("scenario.temperature", "only the PV reference temperature is modelled");
    }
    if (!tie_order.empty() && tie_order.size() != n_total) {
        throw ConfigError("tie_order", "must list every cell index exactly once");
    }
}

RunConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    require_object(root, "");
    reject_unknown(root, "", {"scenario", "pv", "cell", "bus", "n_total", "duration", "dt", "controller_period",
                              "record_interval", "output", "metrics", "cost", "tie_order"});

    RunConfig cfg = builtin_config("startup");
    if (auto it = root.find("scenario"); it != root.end()) {
        if (it->is_string()) {
            cfg = builtin_config(it->get<std::string>());
        } else if (it->is_object()) {
            parse_scenario_object(*it, cfg);
        } else {
            throw ConfigError("scenario", "expected a built-in name or an object");
        }
    }

    if (auto it = root.find("pv"); it != root.end()) {
        require_object(*it, "pv");
        reject_unknown(*it, "pv", {"isc", "vmp", "pmp", "voc", "g_ref", "t_ref"});
        read_number(*it, "pv", "isc", cfg.pv.isc);
        read_number(*it, "pv", "vmp", cfg.pv.vmp);
        read_number(*it, "pv", "pmp", cfg.pv.pmp);
        read_number(*it, "pv", "voc", cfg.pv.voc);
        read_number(*it, "pv", "g_ref", cfg.pv.g_ref);
        read_number(*it, "pv", "t_ref", cfg.pv.t_ref);
    }
    if (auto it = root.find("cell"); it != root.end()) {
        require_object(*it, "cell");
        reject_unknown(*it, "cell", {"v_e", "c_e", "r_e"});
        read_number(*it, "cell", "v_e", cfg.cell.v_e);
        read_number(*it, "cell", "c_e", cfg.cell.c_e);
        read_number(*it, "cell", "r_e", cfg.cell.r_e);
    }
    if (auto it = root.find("bus"); it != root.end()) {
        require_object(*it, "bus");
        reject_unknown(*it, "bus", {"c_bus"});
        read_number(*it, "bus", "c_bus", cfg.bus.c_bus);
    }
    read_count(root, "", "n_total", cfg.n_total);

    if (root.contains("dt")) {
        double dt = 0.0;
        read_number(root, "", "dt", dt);
        cfg.scenario.dt = dt;
    }
    read_number(root, "", "controller_period", cfg.scenario.controller_period);
    read_number(root, "", "record_interval", cfg.scenario.record_interval);
    if (root.contains("duration")) {
        double duration = 0.0;
        read_number(root, "", "duration", duration);
        override_duration(cfg, duration);
    }

    if (auto it = root.find("output"); it != root.end()) {
        if (!it->is_string()) throw ConfigError("output", "expected a path string");
        cfg.output_dir = it->get<std::string>();
    }
    if (auto it = root.find("metrics"); it != root.end()) {
        require_object(*it, "metrics");
        reject_unknown(*it, "metrics", {"sta_divisor"});
        if (auto d = it->find("sta_divisor"); d != it->end()) {
            const std::string v = d->is_string() ? d->get<std::string>() : "";
            if (v == "instantaneous") {
                cfg.sta_divisor = StaDivisor::Instantaneous;
            } else if (v == "time_averaged") {
                cfg.sta_divisor = StaDivisor::TimeAveraged;
            } else {
                throw ConfigError("metrics.sta_divisor", "expected \"instantaneous\" or \"time_averaged\"");
            }
        }
    }
    if (auto it = root.find("cost"); it != root.end()) {
        require_object(*it, "cost");
        reject_unknown(*it, "cost", {"converter_upfront", "years", "annual_energy", "rate_with_converter",
                                     "rate_without_converter"});
        read_number(*it, "cost", "converter_upfront", cfg.cost.converter_upfront);
        read_number(*it, "cost", "years", cfg.cost.years);
        read_number(*it, "cost", "annual_energy", cfg.cost.annual_energy);
        read_number(*it, "cost", "rate_with_converter", cfg.cost.rate_with_converter);
        read_number(*it, "cost", "rate_without_converter", cfg.cost.rate_without_converter);
    }
    if (auto it = root.find("tie_order"); it != root.end()) {
        if (!it->is_array()) throw ConfigError("tie_order", "expected an array of cell indices");
        for (const auto& v : *it) {
            if (!v.is_number_unsigned()) throw ConfigError("tie_order", "expected non-negative integers");
            cfg.tie_order.push_back(v.get<std::size_t>());
        }
        try {
            (void)StackState(cfg.n_total, cfg.tie_order);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("tie_order", e.what());
        }
    }

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<std::size_t> load_permutation(const std::filesystem::path& path, std::size_t n_total) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--seed-order", "cannot read " + path.string());
    std::vector<std::size_t> order;
    std::string token;
    while (in >> token) {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(token, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != token.size() || token.front() == '-') {
            throw ConfigError("--seed-order", "'" + token + "' is not a cell index");
        }
        order.push_back(static_cast<std::size_t>(v));
    }
    try {
        (void)StackState(n_total, order);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("--seed-order", e.what());
    }
    return order;
}

void override_duration(RunConfig& config, double duration) {
    if (!(duration >= 0.0)) throw ConfigError("duration", "must be non-negative");
    config.scenario.duration = duration;
    if (config.builtin_scenario) {
        config.scenario.irradiance = extend_profile(config.scenario.irradiance, duration);
    } else if (config.scenario.irradiance.segments().back().until < duration) {
        throw ConfigError("duration", "exceeds the end of the irradiance profile");
    }
}

void override_dt(RunConfig& config, double dt) {
    if (!(dt > 0.0)) throw ConfigError("dt", "must be positive");
    config.scenario.dt = dt;
}

}  // namespace h2sim
