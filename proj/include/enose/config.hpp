#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "enose/bouts.hpp"
#include "enose/decode.hpp"
#include "enose/frontend.hpp"

namespace enose {

/// Everything a run reads from configuration.
struct AppConfig {
  FrontEndConfig frontend = FrontEndConfig::single_pulse_defaults();
  FilterSpec bout_filter = FilterSpec::single_pulse();
  std::vector<Window> windows;  // empty: the whole trace
  std::uint64_t seed = 1;
  int jobs = 1;
  int trials = 20;
  double noise_sigma = 0.0;
};

/// Prefix of environment overrides: ENOSE_CD_THRESHOLD, ENOSE_FILTER_F_LOW_HZ, ...
inline constexpr const char* kEnvPrefix = "ENOSE_";

/// Keys recognised in every layer, dotted form.
const std::vector<std::string>& config_keys();

/// Layers, lowest precedence first: variant defaults < file < environment < flags.
/// `flags` holds dotted keys mapped to their textual values.
AppConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::map<std::string, std::string>& env,
                      const std::map<std::string, std::string>& flags);

/// Reads ENOSE_* variables of the current process for the known keys.
std::map<std::string, std::string> environment_overrides();

nlohmann::json to_json(const AppConfig& cfg);
AppConfig app_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FrontEndConfig& cfg);
FrontEndConfig frontend_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FilterSpec& spec);
FilterSpec filter_spec_from_json(const nlohmann::json& j);

/// One JSON object per line: trigger_onset_s, trigger_offset_s and a sensors
/// array of {sensor, sd_onset_s, sd_offset_s, delta_t_s, inv_delta_t_per_s}
/// with nulls for absent values. `context` fields (trace id, labels) are
/// merged in front.
std::string event_to_json_line(const EventRecord& rec, const nlohmann::json& context = nlohmann::json::object());
EventRecord event_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CalibrationCurve& curve);
CalibrationCurve calibration_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GasModel& model);
GasModel gas_model_from_json(const nlohmann::json& j);

}  // namespace enose
