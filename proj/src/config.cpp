#include "enose/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>

#include "enose/error.hpp"
#include "enose/io.hpp"

namespace enose {

using json = nlohmann::json;

namespace {

enum class KeyType { Number, Integer, String, NumberList, WindowList };

const std::map<std::string, KeyType>& key_types() {
  static const std::map<std::string, KeyType> types = {
      {"variant", KeyType::String},
      {"filter.f_low_hz", KeyType::Number},
      {"filter.f_high_hz", KeyType::Number},
      {"filter.topology", KeyType::String},
      {"filter.prime_window_s", KeyType::Number},
      {"cd_threshold", KeyType::Number},
      {"sd_threshold", KeyType::NumberList},
      {"trigger_duration_s", KeyType::Number},
      {"refractory_s", KeyType::Number},
      {"bout_filter.f_low_hz", KeyType::Number},
      {"bout_filter.f_high_hz", KeyType::Number},
      {"bout_filter.topology", KeyType::String},
      {"bout_filter.prime_window_s", KeyType::Number},
      {"windows", KeyType::WindowList},
      {"seed", KeyType::Integer},
      {"jobs", KeyType::Integer},
      {"trials", KeyType::Integer},
      {"noise_sigma", KeyType::Number},
  };
  return types;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto pos = text.find(sep, start);
    if (pos == std::string_view::npos) pos = text.size();
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

json typed_value(const std::string& key, const std::string& text) {
  const auto it = key_types().find(key);
  if (it == key_types().end()) throw Error("unknown config key '" + key + "'");
  try {
    switch (it->second) {
      case KeyType::String: return text;
      case KeyType::Number: return parse_double(text);
      case KeyType::Integer: return std::stoll(text);
      case KeyType::NumberList: {
        json arr = json::array();
        for (const auto& part : split(text, ',')) arr.push_back(parse_double(part));
        return arr;
      }
      case KeyType::WindowList: {
        json arr = json::array();
        for (const auto& part : split(text, ',')) {
          const auto ends = split(part, ':');
          if (ends.size() != 2) throw Error("windows are written start:end");
          arr.push_back(json::array({parse_double(ends[0]), parse_double(ends[1])}));
        }
        return arr;
      }
    }
  } catch (const std::logic_error&) {
    throw Error("bad value '" + text + "' for config key '" + key + "'");
  }
  return text;
}

json dotted_to_patch(const std::map<std::string, std::string>& values) {
  json patch = json::object();
  for (const auto& [key, text] : values) {
    const auto dot = key.find('.');
    const auto v = typed_value(key, text);
    if (dot == std::string::npos) {
      patch[key] = v;
    } else {
      patch[key.substr(0, dot)][key.substr(dot + 1)] = v;
    }
  }
  return patch;
}

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw Error(std::string("config key '") + key + "' must be a number");
  return j[key].get<double>();
}

json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> get_opt(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, type] : key_types()) k.push_back(name);
    return k;
  }();
  return keys;
}

std::map<std::string, std::string> environment_overrides() {
  std::map<std::string, std::string> out;
  for (const auto& key : config_keys()) {
    std::string name = kEnvPrefix;
    for (char c : key) name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (const char* v = std::getenv(name.c_str()); v != nullptr && *v != '\0') out[key] = v;
  }
  return out;
}

json to_json(const FilterSpec& spec) {
  return {{"f_low_hz", spec.f_low_hz},
          {"f_high_hz", spec.f_high_hz},
          {"topology", std::string(to_string(spec.topology))},
          {"prime_window_s", spec.prime_window_s}};
}

FilterSpec filter_spec_from_json(const json& j) {
  FilterSpec s;
  s.f_low_hz = number(j, "f_low_hz");
  s.f_high_hz = number(j, "f_high_hz");
  if (j.contains("topology")) s.topology = parse_filter_topology(j["topology"].get<std::string>());
  if (j.contains("prime_window_s")) s.prime_window_s = number(j, "prime_window_s");
  s.validate();
  return s;
}

json to_json(const FrontEndConfig& cfg) {
  return {{"variant", std::string(to_string(cfg.variant))},
          {"filter", to_json(cfg.filter)},
          {"cd_threshold", cfg.cd_threshold},
          {"sd_threshold", cfg.sd_threshold},
          {"trigger_duration_s", cfg.trigger_duration_s},
          {"refractory_s", cfg.refractory_s}};
}

FrontEndConfig frontend_config_from_json(const json& j) {
  FrontEndConfig c;
  c.variant = parse_variant(j.at("variant").get<std::string>());
  c.filter = filter_spec_from_json(j.at("filter"));
  c.cd_threshold = number(j, "cd_threshold");
  const auto& sd = j.at("sd_threshold");
  if (sd.is_number()) c.sd_threshold = {sd.get<double>()};
  else c.sd_threshold = sd.get<std::vector<double>>();
  c.trigger_duration_s = number(j, "trigger_duration_s");
  c.refractory_s = number(j, "refractory_s");
  c.validate();
  return c;
}

json to_json(const AppConfig& cfg) {
  json j = to_json(cfg.frontend);
  j["bout_filter"] = to_json(cfg.bout_filter);
  j["windows"] = json::array();
  for (const auto& w : cfg.windows) j["windows"].push_back(json::array({w.t_start, w.t_end}));
  j["seed"] = cfg.seed;
  j["jobs"] = cfg.jobs;
  j["trials"] = cfg.trials;
  j["noise_sigma"] = cfg.noise_sigma;
  return j;
}

AppConfig app_config_from_json(const json& j) {
  AppConfig c;
  c.frontend = frontend_config_from_json(j);
  if (j.contains("bout_filter")) c.bout_filter = filter_spec_from_json(j["bout_filter"]);
  if (j.contains("windows")) {
    for (const auto& w : j["windows"]) c.windows.emplace_back(w.at(0).get<double>(), w.at(1).get<double>());
  }
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
  if (j.contains("trials")) c.trials = j["trials"].get<int>();
  if (j.contains("noise_sigma")) c.noise_sigma = j["noise_sigma"].get<double>();
  if (c.jobs < 1) throw Error("jobs must be >= 1");
  if (c.trials < 1) throw Error("trials must be >= 1");
  if (!(c.noise_sigma >= 0.0)) throw Error("noise_sigma must be >= 0");
  return c;
}

AppConfig load_config(const std::optional<std::filesystem::path>& file,
                      const std::map<std::string, std::string>& env,
                      const std::map<std::string, std::string>& flags) {
  json merged = json::object();
  if (file) {
    try {
      merged = json::parse(read_file(*file));
    } catch (const json::exception& e) {
      throw Error("config " + file->string() + ": " + e.what());
    }
    if (!merged.is_object()) throw Error("config " + file->string() + " must hold a JSON object");
  }
  merged.merge_patch(dotted_to_patch(env));
  merged.merge_patch(dotted_to_patch(flags));

  const Variant variant =
      merged.contains("variant") ? parse_variant(merged["variant"].get<std::string>()) : Variant::SinglePulseGated;
  AppConfig base;
  base.frontend = FrontEndConfig::defaults_for(variant);
  // Bout analysis follows the variant: single pulses at (0.04, 1) Hz, plume peaks at (0.1, 1) Hz.
  base.bout_filter = variant == Variant::PlumeUngated ? FilterSpec::bout_analysis() : FilterSpec::single_pulse();
  if (variant == Variant::PlumeUngated) base.windows = {Window(0.0, 2.0), Window(2.0, 5.0)};
  json full = to_json(base);
  full.merge_patch(merged);
  try {
    return app_config_from_json(full);
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
}

std::string event_to_json_line(const EventRecord& rec, const json& context) {
  json j = context.is_object() ? context : json::object();
  j["trigger_onset_s"] = rec.trigger.onset;
  j["trigger_offset_s"] = opt_number(rec.trigger.offset);
  j["sensors"] = json::array();
  for (const auto& ev : rec.sensors) {
    j["sensors"].push_back({{"sensor", ev.sensor_id},
                            {"sd_onset_s", ev.sd ? json(ev.sd->onset) : json(nullptr)},
                            {"sd_offset_s", ev.sd ? opt_number(ev.sd->offset) : json(nullptr)},
                            {"delta_t_s", opt_number(ev.delta_t_s)},
                            {"inv_delta_t_per_s", opt_number(ev.inv_delta_t)}});
  }
  return j.dump();
}

EventRecord event_from_json(const json& j) {
  EventRecord rec;
  rec.trigger.onset = j.at("trigger_onset_s").get<double>();
  rec.trigger.offset = get_opt(j, "trigger_offset_s");
  for (const auto& s : j.at("sensors")) {
    SensorEvent ev;
    ev.sensor_id = s.at("sensor").get<int>();
    if (auto on = get_opt(s, "sd_onset_s")) ev.sd = Pulse{*on, get_opt(s, "sd_offset_s")};
    ev.delta_t_s = get_opt(s, "delta_t_s");
    ev.inv_delta_t = get_opt(s, "inv_delta_t_per_s");
    rec.sensors.push_back(ev);
  }
  return rec;
}

json to_json(const CalibrationCurve& curve) {
  json knots = json::array();
  for (const auto& [p, v] : curve.knots()) knots.push_back(json::array({p, v}));
  return {{"gas", curve.gas().name()}, {"scope", curve.scope().label()}, {"knots", knots}};
}

CalibrationCurve calibration_from_json(const json& j) {
  std::vector<std::pair<double, double>> knots;
  for (const auto& k : j.at("knots")) knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
  return CalibrationCurve(GasLabel(j.at("gas").get<std::string>()),
                          FeatureScope::parse(j.at("scope").get<std::string>()), std::move(knots));
}

json to_json(const GasModel& model) {
  json centroids = json::array();
  for (const auto& [gas, c] : model.centroids) {
    centroids.push_back({{"gas", gas.name()}, {"mean", c.mean}, {"dispersion", c.dispersion}, {"count", c.count}});
  }
  return {{"scope", model.scope.label()},
          {"sensor_ids", model.sensor_ids},
          {"scale", model.scale},
          {"centroids", centroids}};
}

GasModel gas_model_from_json(const json& j) {
  GasModel m;
  m.scope = FeatureScope::parse(j.at("scope").get<std::string>());
  m.sensor_ids = j.at("sensor_ids").get<std::vector<int>>();
  m.scale = j.at("scale").get<std::vector<double>>();
  for (const auto& c : j.at("centroids")) {
    GasModel::Centroid centroid;
    centroid.mean = c.at("mean").get<std::vector<double>>();
    centroid.dispersion = c.at("dispersion").get<std::vector<double>>();
    centroid.count = c.at("count").get<std::size_t>();
    m.centroids.emplace(GasLabel(c.at("gas").get<std::string>()), std::move(centroid));
  }
  return m;
}

}  // namespace enose
