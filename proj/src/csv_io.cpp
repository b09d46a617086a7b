#include "enose/csv_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "enose/error.hpp"
#include "enose/io.hpp"

namespace enose {

using json = nlohmann::json;

namespace {

std::vector<std::string> split_row(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    auto cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front()))) cell.remove_prefix(1);
    while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) cell.remove_suffix(1);
    cells.emplace_back(cell);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

int id_from_name(const std::string& name, int fallback) {
  auto end = name.size();
  auto begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(name[begin - 1]))) --begin;
  if (begin == end || end - begin > 6) return fallback;
  return std::stoi(name.substr(begin));
}

ChannelKind default_kind(int id) {
  if (id == 1) return ChannelKind::Red;
  if (id == 2) return ChannelKind::Ox;
  return ChannelKind::Other;
}

// Integer rates are the norm; snap float noise from 1/step back onto them.
double snap_rate(double rate, double tolerance = 1e-6) {
  const double nearest = std::round(rate);
  if (nearest > 0.0 && std::abs(rate - nearest) <= tolerance * nearest) return nearest;
  return rate;
}

double median(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

struct Sidecar {
  TraceMeta meta;
  std::optional<double> sample_rate;
  std::optional<double> t0;
  // column name -> (id, kind)
  std::vector<std::tuple<std::string, int, ChannelKind>> sensors;
};

Sidecar parse_sidecar(const std::string& text) {
  Sidecar sc;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("bad sidecar metadata: ") + e.what());
  }
  if (j.contains("gas_primary") && !j["gas_primary"].is_null()) {
    sc.meta.gas_primary = GasLabel(j["gas_primary"].get<std::string>());
  }
  if (j.contains("gas_secondary") && !j["gas_secondary"].is_null()) {
    sc.meta.gas_secondary = GasLabel(j["gas_secondary"].get<std::string>());
  }
  if (j.contains("trial") && !j["trial"].is_null()) sc.meta.trial = j["trial"].get<int>();
  if (j.contains("concentration_percent") && !j["concentration_percent"].is_null()) {
    sc.meta.concentration = ConcentrationLevel::from_percent(j["concentration_percent"].get<double>());
  }
  if (j.contains("concentration_bracket") && j["concentration_bracket"].is_array()) {
    const auto& b = j["concentration_bracket"];
    sc.meta.concentration_bracket = std::make_pair(b.at(0).get<double>(), b.at(1).get<double>());
  }
  if (j.contains("environment") && !j["environment"].is_null()) {
    sc.meta.environment = parse_environment(j["environment"].get<std::string>());
  }
  if (j.contains("sample_rate_hz")) sc.sample_rate = j["sample_rate_hz"].get<double>();
  if (j.contains("t0_s")) sc.t0 = j["t0_s"].get<double>();
  if (j.contains("sensors")) {
    for (const auto& s : j["sensors"]) {
      sc.sensors.emplace_back(s.at("column").get<std::string>(), s.at("id").get<int>(),
                              parse_channel_kind(s.at("channel_kind").get<std::string>()));
    }
  }
  return sc;
}

void apply_overrides(TraceMeta& meta, const MetaOverrides& o) {
  if (o.gas_primary) meta.gas_primary = *o.gas_primary;
  if (o.gas_secondary) meta.gas_secondary = *o.gas_secondary;
  if (o.trial) meta.trial = *o.trial;
  if (o.concentration) meta.concentration = *o.concentration;
  if (o.environment) meta.environment = *o.environment;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p += ".meta.json";
  return p;
}

std::vector<SensorTrace> parse_trace_csv(std::istream& in, const CsvSchema& schema,
                                         const std::optional<std::string>& sidecar_json) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (next_line(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!line.empty()) {
      have_header = true;
      break;
    }
  }
  if (!have_header) throw Error("empty file");

  const auto header = split_row(line);
  std::size_t time_col = 0;
  if (!schema.time_column.empty()) {
    auto it = std::find(header.begin(), header.end(), schema.time_column);
    if (it == header.end()) {
      // Tolerate an unnamed or differently named time column in position 0.
      time_col = 0;
    } else {
      time_col = static_cast<std::size_t>(std::distance(header.begin(), it));
    }
  }

  std::vector<std::size_t> sensor_cols;
  if (schema.sensor_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != time_col) sensor_cols.push_back(c);
    }
  } else {
    for (const auto& name : schema.sensor_columns) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw ParseError("missing sensor column '" + name + "'", 1);
      sensor_cols.push_back(static_cast<std::size_t>(std::distance(header.begin(), it)));
    }
  }
  if (sensor_cols.empty()) throw Error("no sensor columns");

  std::vector<double> times;
  std::vector<std::vector<double>> columns(sensor_cols.size());
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    try {
      const double t = parse_double(cells[time_col]);
      if (!std::isfinite(t)) throw Error("non-finite time");
      if (!times.empty() && !(t > times.back())) {
        throw ParseError("time column is not strictly increasing", line_no);
      }
      times.push_back(t);
      for (std::size_t k = 0; k < sensor_cols.size(); ++k) {
        const double v = parse_double(cells[sensor_cols[k]]);
        if (!std::isfinite(v)) throw Error("non-finite sample");
        columns[k].push_back(v);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (times.empty()) throw Error("no data rows");

  Sidecar sc;
  if (sidecar_json) sc = parse_sidecar(*sidecar_json);
  TraceMeta meta = sc.meta;
  apply_overrides(meta, schema.meta);

  double rate = 0.0;
  double t0 = times.front();
  bool resample_needed = false;
  if (times.size() == 1) {
    if (!sc.sample_rate) throw Error("single-row file needs a sample rate in the sidecar");
    rate = *sc.sample_rate;
  } else {
    std::vector<double> steps(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i) steps[i - 1] = times[i] - times[i - 1];
    const double step = median(steps);
    double worst = 0.0;
    for (double s : steps) worst = std::max(worst, std::abs(s - step) / step);
    if (worst > schema.max_jitter) {
      throw Error("irregular time grid: step deviates " + format_fixed(100.0 * worst, 1) +
                  " % from the median");
    }
    if (worst <= 1e-6) {
      rate = sc.sample_rate.value_or(
          snap_rate(static_cast<double>(times.size() - 1) / (times.back() - times.front())));
      if (sc.t0) t0 = *sc.t0;
    } else {
      // A jittered logger still has a nominal integer rate; the median step sits within 1 % of it.
      rate = sc.sample_rate.value_or(snap_rate(1.0 / step, 0.01));
      resample_needed = true;
    }
  }

  std::vector<SensorTrace> traces;
  for (std::size_t k = 0; k < sensor_cols.size(); ++k) {
    const auto& name = header[sensor_cols[k]];
    int id = k < schema.sensor_ids.size() ? schema.sensor_ids[k] : id_from_name(name, static_cast<int>(k) + 1);
    ChannelKind kind = k < schema.channel_kinds.size() ? schema.channel_kinds[k] : default_kind(id);
    for (const auto& [col, sid, skind] : sc.sensors) {
      if (col == name) {
        if (k >= schema.sensor_ids.size()) id = sid;
        if (k >= schema.channel_kinds.size()) kind = skind;
      }
    }
    auto samples = resample_needed ? resample_grid(times, columns[k], rate) : std::move(columns[k]);
    traces.emplace_back(id, kind, rate, t0, std::move(samples), meta, name);
  }
  return traces;
}

std::vector<SensorTrace> ingest_trace_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::optional<std::string> sidecar;
  if (schema.read_sidecar && std::filesystem::exists(sidecar_path(path))) {
    sidecar = read_file(sidecar_path(path));
  }
  try {
    return parse_trace_csv(in, schema, sidecar);
  } catch (const ParseError& e) {
    throw ParseError(path.filename().string() + ": " + e.what(), 0);
  }
}

std::string format_trace_csv(std::span<const SensorTrace> traces) {
  require_common_time_base(traces);
  std::string out = "time_s";
  for (const auto& tr : traces) out += "," + tr.name();
  out += "\n";
  const auto& ref = traces.front();
  for (std::size_t i = 0; i < ref.size(); ++i) {
    out += format_double(ref.time_at(i));
    for (const auto& tr : traces) {
      out += ",";
      out += format_double(tr.samples()[i]);
    }
    out += "\n";
  }
  return out;
}

std::string format_sidecar_json(std::span<const SensorTrace> traces) {
  require_common_time_base(traces);
  const auto& ref = traces.front();
  const auto& m = ref.meta();
  json j = json::object();
  j["gas_primary"] = m.gas_primary.empty() ? json(nullptr) : json(m.gas_primary.name());
  j["gas_secondary"] = m.gas_secondary ? json(m.gas_secondary->name()) : json(nullptr);
  j["trial"] = m.trial ? json(*m.trial) : json(nullptr);
  j["concentration_percent"] = m.concentration ? json(m.concentration->percent) : json(nullptr);
  j["concentration_bracket"] =
      m.concentration_bracket ? json::array({m.concentration_bracket->first, m.concentration_bracket->second})
                              : json(nullptr);
  j["environment"] = std::string(to_string(m.environment));
  j["sample_rate_hz"] = ref.sample_rate();
  j["t0_s"] = ref.t0();
  j["sensors"] = json::array();
  for (const auto& tr : traces) {
    j["sensors"].push_back(
        {{"column", tr.name()}, {"id", tr.sensor_id()}, {"channel_kind", std::string(to_string(tr.channel_kind()))}});
  }
  return j.dump(2) + "\n";
}

void write_trace_csv(const std::filesystem::path& path, std::span<const SensorTrace> traces) {
  write_file_atomic(path, format_trace_csv(traces));
  write_file_atomic(sidecar_path(path), format_sidecar_json(traces));
}

StimulusProfile parse_profile_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> times, values;
  bool header_seen = false;
  while (next_line(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split_row(line);
    if (!header_seen) {
      header_seen = true;
      // A header is optional; accept a numeric first row as data.
      try {
        parse_double(cells.at(0));
      } catch (const Error&) {
        continue;
      }
    }
    if (cells.size() < 2) throw ParseError("profile rows need time and concentration", line_no);
    try {
      times.push_back(parse_double(cells[0]));
      values.push_back(parse_double(cells[1]));
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (times.empty()) throw Error("empty profile");
  return StimulusProfile(std::move(times), std::move(values));
}

StimulusProfile read_profile_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return parse_profile_csv(in);
}

}  // namespace enose
