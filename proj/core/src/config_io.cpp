#include "isacsim/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "isacsim/version.hpp"

namespace isacsim {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v) {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("malformed number '" + v + "'");
    return x;
}

int parse_int(const std::string& v) {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument("malformed integer '" + v + "'");
    return static_cast<int>(x);
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw std::invalid_argument("empty list element");
        out.push_back(parse_double(item));
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

Position3 parse_position(const std::string& v) {
    const std::vector<double> xyz = parse_list(v);
    if (xyz.size() != 3) throw std::invalid_argument("position needs exactly x,y,z");
    return {xyz[0], xyz[1], xyz[2]};
}

struct ParseState {
    bool satellites_cleared = false;
    bool gateways_cleared = false;
};

// One setter per accepted "section.key". Positive-value checks live here so
// the file parser can attach the offending line number.
void set_key(ScenarioConfig& cfg, ParseState& state, const std::string& section,
             const std::string& key, const std::string& value) {
    auto positive = [](double x, const char* what) {
        if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
        return x;
    };
    const std::string full = section + "." + key;

    if (full == "network.satellite") {
        if (!state.satellites_cleared) {
            cfg.satellites.clear();
            state.satellites_cleared = true;
        }
        cfg.satellites.push_back(parse_position(value));
    } else if (full == "network.gateway") {
        if (!state.gateways_cleared) {
            cfg.gateways.clear();
            state.gateways_cleared = true;
        }
        cfg.gateways.push_back(parse_position(value));
    } else if (full == "network.ues_per_satellite") {
        cfg.ues_per_satellite = parse_int(value);
    } else if (full == "network.targets") {
        cfg.num_targets = parse_int(value);
    } else if (full == "arrays.sat_nx") {
        cfg.sat_array.nx = parse_int(value);
    } else if (full == "arrays.sat_ny") {
        cfg.sat_array.ny = parse_int(value);
    } else if (full == "arrays.gat_nx") {
        cfg.gat_array.nx = parse_int(value);
    } else if (full == "arrays.gat_ny") {
        cfg.gat_array.ny = parse_int(value);
    } else if (full == "link.wavelength_m") {
        cfg.link.wavelength_m = positive(parse_double(value), "wavelength_m");
    } else if (full == "link.tx_gain_sat_dbi") {
        cfg.link.tx_gain_sat = db_to_linear(parse_double(value));
    } else if (full == "link.rx_gain_ue_dbi") {
        cfg.link.rx_gain_ue = db_to_linear(parse_double(value));
    } else if (full == "link.rx_gain_gat_dbi") {
        cfg.link.rx_gain_gat = db_to_linear(parse_double(value));
    } else if (full == "link.rician_kappa_db") {
        cfg.link.rician_kappa = db_to_linear(parse_double(value));
    } else if (full == "link.rcs_dbsm") {
        cfg.rcs_m2 = db_to_linear(parse_double(value));
    } else if (full == "link.min_reflection_magnitude") {
        cfg.min_reflection_magnitude = parse_double(value);
    } else if (full == "grid.center_x_km") {
        cfg.grid.center_x_km = parse_double(value);
    } else if (full == "grid.center_y_km") {
        cfg.grid.center_y_km = parse_double(value);
    } else if (full == "grid.diameter_km") {
        cfg.grid.diameter_km = parse_double(value);
        if (cfg.grid.diameter_km < 0.0) throw std::invalid_argument("diameter_km must be >= 0");
    } else if (full == "grid.spacing_km") {
        cfg.grid.spacing_km = positive(parse_double(value), "spacing_km");
    } else if (full == "grid.altitudes_km") {
        cfg.grid.altitudes_km = parse_list(value);
    } else if (full == "sensing.sensing_power_w") {
        cfg.sensing_power_w = positive(parse_double(value), "sensing_power_w");
    } else if (full == "sensing.tau_c_db") {
        cfg.tau_c = db_to_linear(parse_double(value));
    } else if (full == "sensing.noise_psd_dbm_per_hz") {
        cfg.noise_psd_dbm_per_hz = parse_double(value);
    } else if (full == "sensing.bandwidth_hz") {
        cfg.bandwidth_hz = positive(parse_double(value), "bandwidth_hz");
    } else if (full == "experiment.slots") {
        cfg.slots = parse_int(value);
        if (cfg.slots < 0) throw std::invalid_argument("slots must be >= 0");
    } else if (full == "experiment.trials") {
        cfg.trials = parse_int(value);
    } else if (full == "experiment.seed") {
        cfg.master_seed = static_cast<std::uint64_t>(std::stoull(value));
    } else if (full == "experiment.ue_disc_diameter_km") {
        cfg.ue_disc_diameter_km = positive(parse_double(value), "ue_disc_diameter_km");
    } else if (full == "experiment.min_ue_spacing_km") {
        cfg.min_ue_spacing_km = parse_double(value);
    } else if (full == "experiment.target_disc_diameter_km") {
        cfg.target_disc_diameter_km = positive(parse_double(value), "target_disc_diameter_km");
    } else if (full == "experiment.target_altitude_min_km") {
        cfg.target_altitude_min_km = parse_double(value);
    } else if (full == "experiment.target_altitude_max_km") {
        cfg.target_altitude_max_km = parse_double(value);
    } else {
        throw std::invalid_argument("unknown key '" + full + "'");
    }
}

const std::vector<std::string> kSections = {"network", "arrays", "link",
                                            "grid",    "sensing", "experiment"};

}  // namespace

ScenarioConfig parse_config(std::istream& in, const ScenarioConfig& base) {
    ScenarioConfig cfg = base;
    ParseState state;
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (std::find(kSections.begin(), kSections.end(), section) == kSections.end())
                throw ConfigError(lineno, "unknown section '" + section + "'");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(lineno, "expected 'key = value'");
        if (section.empty()) throw ConfigError(lineno, "key outside of any section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError(lineno, "empty key or value");
        try {
            set_key(cfg, state, section, key, value);
        } catch (const std::exception& e) {
            throw ConfigError(lineno, e.what());
        }
    }
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        throw ConfigError(lineno, std::string("invalid configuration: ") + e.what());
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path, const ScenarioConfig& base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in, base);
}

void apply_override(ScenarioConfig& cfg, const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    if (dot == std::string::npos)
        throw std::invalid_argument("override key must be section.key: " + dotted_key);
    ParseState state;
    set_key(cfg, state, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), value);
}

namespace {

nlohmann::json position_json(const Position3& p) { return {p.x, p.y, p.z}; }

}  // namespace

std::string manifest_json(const ScenarioConfig& cfg, const std::string& command_line,
                          const std::string& output_path) {
    nlohmann::json j;
    j["tool"] = "isacsim";
    j["version"] = kVersion;
    j["command_line"] = command_line;
    j["output"] = output_path;
    j["seed"] = cfg.master_seed;

    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    j["start_time_utc"] = buf;

    nlohmann::json sc;
    sc["satellites"] = nlohmann::json::array();
    for (const auto& s : cfg.satellites) sc["satellites"].push_back(position_json(s));
    sc["gateways"] = nlohmann::json::array();
    for (const auto& g : cfg.gateways) sc["gateways"].push_back(position_json(g));
    sc["ues_per_satellite"] = cfg.ues_per_satellite;
    sc["targets"] = cfg.num_targets;
    sc["sat_array"] = {cfg.sat_array.nx, cfg.sat_array.ny};
    sc["gat_array"] = {cfg.gat_array.nx, cfg.gat_array.ny};
    sc["wavelength_m"] = cfg.link.wavelength_m;
    sc["tx_gain_sat"] = cfg.link.tx_gain_sat;
    sc["rx_gain_ue"] = cfg.link.rx_gain_ue;
    sc["rx_gain_gat"] = cfg.link.rx_gain_gat;
    sc["rician_kappa"] = cfg.link.rician_kappa;
    sc["rcs_m2"] = cfg.rcs_m2;
    sc["min_reflection_magnitude"] = cfg.min_reflection_magnitude;
    sc["tau_c"] = cfg.tau_c;
    sc["sensing_power_w"] = cfg.sensing_power_w;
    sc["noise_psd_dbm_per_hz"] = cfg.noise_psd_dbm_per_hz;
    sc["bandwidth_hz"] = cfg.bandwidth_hz;
    sc["grid"] = {{"center_x_km", cfg.grid.center_x_km},
                  {"center_y_km", cfg.grid.center_y_km},
                  {"diameter_km", cfg.grid.diameter_km},
                  {"spacing_km", cfg.grid.spacing_km},
                  {"altitudes_km", cfg.grid.altitudes_km}};
    sc["slots"] = cfg.slots;
    sc["trials"] = cfg.trials;
    sc["ue_disc_diameter_km"] = cfg.ue_disc_diameter_km;
    sc["min_ue_spacing_km"] = cfg.min_ue_spacing_km;
    sc["target_disc_diameter_km"] = cfg.target_disc_diameter_km;
    sc["target_altitude_min_km"] = cfg.target_altitude_min_km;
    sc["target_altitude_max_km"] = cfg.target_altitude_max_km;
    j["scenario"] = sc;
    return j.dump(2);
}

void write_manifest(const std::string& path, const ScenarioConfig& cfg,
                    const std::string& command_line, const std::string& output_path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << manifest_json(cfg, command_line, output_path) << '\n';
}

}  // namespace isacsim
