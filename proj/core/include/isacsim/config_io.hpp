#pragma once

#include <istream>
#include <string>

#include "isacsim/scenario.hpp"

namespace isacsim {

/// Malformed config input; carries the offending line number.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

/// Parse the sectioned key-value config format on top of `base` (unspecified
/// keys keep the base profile's defaults). dB-valued keys carry explicit
/// _db/_dbi/_dbsm/_dbm_per_hz suffixes and are converted to linear here.
ScenarioConfig parse_config(std::istream& in, const ScenarioConfig& base);
ScenarioConfig parse_config_file(const std::string& path, const ScenarioConfig& base);

/// Apply one "section.key = value" override (CLI --set flags reuse the same
/// key table and validation as the file parser).
void apply_override(ScenarioConfig& cfg, const std::string& dotted_key, const std::string& value);

/// JSON document capturing everything needed to reproduce a run bit-exactly:
/// the resolved scenario, command line, seed, and tool version. Written before
/// any trial executes.
std::string manifest_json(const ScenarioConfig& cfg, const std::string& command_line,
                          const std::string& output_path);
void write_manifest(const std::string& path, const ScenarioConfig& cfg,
                    const std::string& command_line, const std::string& output_path);

}  // namespace isacsim
