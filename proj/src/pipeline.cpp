#include "enose/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "enose/error.hpp"
#include "enose/filters.hpp"
#include "enose/io.hpp"
#include "enose/svg.hpp"

namespace enose {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string checksum(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
  return out;
}

Recording load_recording(const fs::path& file, const CsvSchema& schema) {
  return {file.stem().string(), ingest_trace_csv(file, schema)};
}

namespace {

std::vector<fs::path> csv_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("input directory " + dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("input directory " + dir.string() + " holds no trace CSV files");
  return files;
}

}  // namespace

std::vector<Recording> load_recordings(const fs::path& dir, const CsvSchema& schema) {
  std::vector<Recording> out;
  for (const auto& f : csv_files(dir)) out.push_back(load_recording(f, schema));
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, const GasLabel& gas, int level, int trial) {
  // splitmix64 over the mixed identifiers
  std::uint64_t z = seed;
  const std::uint64_t gas_hash = std::stoull(checksum(gas.name()), nullptr, 16);
  for (std::uint64_t v : {gas_hash, static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(trial)}) {
    z += 0x9e3779b97f4a7c15ull ^ v;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
  }
  return z;
}

std::string battery_id(const GasLabel& gas, int level, int trial) {
  std::string t = std::to_string(trial);
  if (t.size() < 2) t.insert(0, 2 - t.size(), '0');
  return gas.name() + "_C" + std::to_string(level) + "_t" + t;
}

std::vector<Recording> synth_battery(std::span<const GasLabel> gases, std::span<const int> levels, int trials,
                                     double noise_sigma, std::uint64_t seed, const PulseOptions& options) {
  if (trials < 1) throw Error("trials must be >= 1");
  std::vector<Recording> out;
  for (const auto& gas : gases) {
    for (int level : levels) {
      for (int trial = 1; trial <= trials; ++trial) {
        PulseOptions opts = options;
        opts.trial = trial;
        out.push_back({battery_id(gas, level, trial),
                       synth_single_pulse(gas, ConcentrationLevel::from_index(level), noise_sigma,
                                          derive_seed(seed, gas, level, trial), opts)});
      }
    }
  }
  return out;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::clamp<long long>(jobs, 1, static_cast<long long>(std::max<std::size_t>(n, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<BoutRow> analyze_bouts(const Recording& rec, const AppConfig& cfg) {
  std::vector<BoutRow> rows;
  const auto filtered = bandpass_filter(rec.traces, cfg.bout_filter);
  for (const auto& tr : filtered) {
    std::vector<Window> windows = cfg.windows;
    if (windows.empty()) windows.emplace_back(tr.t0(), tr.t_end());
    for (const auto& w : windows) {
      BoutRow row{rec.id, tr.meta(), tr.sensor_id(), w, std::nullopt};
      try {
        row.result = bout_slope(locate_largest_bout(tr, w));
      } catch (const Error&) {
        // No rising edge (or window off the trace): the row stays empty.
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

namespace {

std::string opt_num(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string window_label(const Window& w) { return format_double(w.t_start) + "-" + format_double(w.t_end); }

json meta_context(const std::string& id, std::size_t index, const TraceMeta& meta) {
  json j = json::object();
  j["trace_id"] = id;
  j["event"] = index;
  j["gas"] = meta.gas_primary.empty() ? json(nullptr) : json(meta.gas_primary.name());
  j["gas_secondary"] = meta.gas_secondary ? json(meta.gas_secondary->name()) : json(nullptr);
  j["trial"] = meta.trial ? json(*meta.trial) : json(nullptr);
  j["percent"] = meta.concentration ? json(meta.concentration->percent) : json(nullptr);
  j["environment"] = std::string(to_string(meta.environment));
  return j;
}

TraceMeta meta_from_context(const json& j) {
  TraceMeta m;
  if (j.contains("gas") && !j["gas"].is_null()) m.gas_primary = GasLabel(j["gas"].get<std::string>());
  if (j.contains("gas_secondary") && !j["gas_secondary"].is_null()) {
    m.gas_secondary = GasLabel(j["gas_secondary"].get<std::string>());
  }
  if (j.contains("trial") && !j["trial"].is_null()) m.trial = j["trial"].get<int>();
  if (j.contains("percent") && !j["percent"].is_null()) {
    m.concentration = ConcentrationLevel::from_percent(j["percent"].get<double>());
  }
  if (j.contains("environment")) m.environment = parse_environment(j["environment"].get<std::string>());
  return m;
}

}  // namespace

std::string bouts_csv(std::span<const BoutRow> rows) {
  std::string out = "trace_id,sensor,window_start_s,window_end_s,min_t_s,max_t_s,min_value,max_value,slope\n";
  for (const auto& r : rows) {
    out += r.trace_id + "," + std::to_string(r.sensor_id) + "," + format_double(r.window.t_start) + "," +
           format_double(r.window.t_end);
    if (r.result) {
      const auto& b = r.result->bout;
      out += "," + format_double(b.min_t) + "," + format_double(b.max_t) + "," + format_double(b.min_value) + "," +
             format_double(b.max_value) + "," + format_double(r.result->slope);
    } else {
      out += ",,,,,";
    }
    out += "\n";
  }
  return out;
}

std::vector<EventRow> simulate_recording(const Recording& rec, const AppConfig& cfg) {
  const auto records = simulate_front_end(rec.traces, cfg.frontend);
  std::vector<EventRow> rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    EventRow row{rec.id, rec.meta(), i, std::nullopt, records[i]};
    for (const auto& w : cfg.windows) {
      if (records[i].trigger.onset >= w.t_start && records[i].trigger.onset < w.t_end) {
        row.window = window_label(w);
        break;
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string events_jsonl(std::span<const EventRow> rows) {
  std::string out;
  for (const auto& r : rows) {
    auto ctx = meta_context(r.trace_id, r.index, r.meta);
    ctx["window"] = r.window ? json(*r.window) : json(nullptr);
    out += event_to_json_line(r.record, ctx) + "\n";
  }
  return out;
}

std::vector<EventRow> parse_events_jsonl(const std::string& text) {
  std::vector<EventRow> rows;
  std::size_t start = 0, line_no = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    const auto line = text.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(line);
      EventRow row;
      row.trace_id = j.value("trace_id", std::string("trace"));
      row.index = j.value("event", std::size_t{0});
      row.meta = meta_from_context(j);
      if (j.contains("window") && !j["window"].is_null()) row.window = j["window"].get<std::string>();
      row.record = event_from_json(j);
      rows.push_back(std::move(row));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return rows;
}

const CalibrationCurve* Decoders::curve_for(const GasLabel& gas) const {
  for (const auto& c : curves) {
    if (c.gas() == gas) return &c;
  }
  return nullptr;
}

Decoders fit_decoders(std::span<const EventRow> events, const FeatureScope& curve_scope,
                      const FeatureScope& model_scope) {
  Decoders d;
  std::map<GasLabel, std::vector<CalibrationSample>> per_gas;
  std::vector<std::pair<double, LabeledFeature>> labeled;
  for (const auto& e : events) {
    if (e.index != 0 || e.meta.gas_primary.empty() || !e.meta.concentration) continue;
    FeatureVector f;
    try {
      f = extract_features(e.record);
    } catch (const Error&) {
      continue;
    }
    per_gas[e.meta.gas_primary].push_back({*e.meta.concentration, f});
    labeled.push_back({e.meta.concentration->percent, {e.meta.gas_primary, f}});
  }
  for (const auto& [gas, samples] : per_gas) {
    try {
      d.curves.push_back(fit_calibration(samples, gas, curve_scope));
    } catch (const Error& e) {
      d.notes.push_back("no calibration for " + gas.name() + ": " + e.what());
    }
  }
  if (labeled.empty()) {
    d.notes.push_back("no labeled events; gas model not fitted");
    return d;
  }
  double top = 0.0;
  for (const auto& [percent, lf] : labeled) top = std::max(top, percent);
  std::vector<LabeledFeature> at_top;
  for (const auto& [percent, lf] : labeled) {
    if (percent == top) at_top.push_back(lf);
  }
  try {
    d.model = fit_gas_model(at_top, model_scope);
    d.model_percent = top;
  } catch (const Error& e) {
    d.notes.push_back(std::string("gas model not fitted: ") + e.what());
  }
  return d;
}

std::vector<DecodeRow> decode_events(std::span<const EventRow> events, const Decoders& decoders) {
  std::vector<DecodeRow> rows;
  for (const auto& e : events) {
    DecodeRow row{e.trace_id, e.index, e.meta, std::nullopt, std::nullopt, std::nullopt, {}};
    try {
      row.feature = extract_features(e.record);
    } catch (const Error&) {
      row.flags.push_back("no_feature");
      rows.push_back(std::move(row));
      continue;
    }
    for (std::size_t k = 0; k < row.feature->inv_delta_t.size(); ++k) {
      if (!row.feature->inv_delta_t[k]) row.flags.push_back("missing:s" + std::to_string(row.feature->sensor_ids[k]));
    }
    if (decoders.model) {
      try {
        row.decision = classify_gas(*decoders.model, *row.feature);
        if (row.decision->ambiguous) row.flags.push_back("ambiguous");
      } catch (const Error&) {
        row.flags.push_back("unclassified");
      }
    }
    const GasLabel gas = !e.meta.gas_primary.empty() ? e.meta.gas_primary
                         : row.decision                ? row.decision->gas
                                                       : GasLabel();
    const auto* curve = gas.empty() ? nullptr : decoders.curve_for(gas);
    if (curve == nullptr) {
      row.flags.push_back("no_curve");
    } else {
      try {
        row.estimate = estimate_concentration(*curve, *row.feature);
        if (row.estimate->out_of_range) row.flags.push_back("out_of_range");
      } catch (const Error&) {
        row.flags.push_back("no_estimate");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string decode_csv(std::span<const DecodeRow> rows) {
  std::vector<int> ids;
  for (const auto& r : rows) {
    if (!r.feature) continue;
    for (int id : r.feature->sensor_ids) {
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
  }
  std::sort(ids.begin(), ids.end());
  std::string out = "trace_id,event";
  for (int id : ids) out += ",inv_delta_t_s" + std::to_string(id);
  out += ",summed,gas,percent,predicted_gas,estimated_percent,flags\n";
  for (const auto& r : rows) {
    out += r.trace_id + "," + std::to_string(r.index);
    for (int id : ids) out += "," + (r.feature ? opt_num(r.feature->for_sensor(id)) : std::string());
    out += "," + (r.feature ? format_double(r.feature->summed) : std::string());
    out += "," + r.meta.gas_primary.name();
    out += "," + (r.meta.concentration ? format_double(r.meta.concentration->percent) : std::string());
    out += "," + (r.decision ? r.decision->gas.name() : std::string());
    out += "," + (r.estimate ? format_double(r.estimate->percent) : std::string());
    out += ",";
    for (std::size_t i = 0; i < r.flags.size(); ++i) out += (i ? ";" : "") + r.flags[i];
    out += "\n";
  }
  return out;
}

json decoders_to_json(const Decoders& d) {
  json j = json::object();
  j["curves"] = json::array();
  for (const auto& c : d.curves) j["curves"].push_back(to_json(c));
  j["model"] = d.model ? to_json(*d.model) : json(nullptr);
  j["model_percent"] = d.model_percent;
  j["notes"] = d.notes;
  return j;
}

Decoders decoders_from_json(const json& j) {
  Decoders d;
  for (const auto& c : j.at("curves")) d.curves.push_back(calibration_from_json(c));
  if (j.contains("model") && !j["model"].is_null()) d.model = gas_model_from_json(j["model"]);
  d.model_percent = j.value("model_percent", 0.0);
  if (j.contains("notes")) d.notes = j["notes"].get<std::vector<std::string>>();
  return d;
}

namespace {

struct Stats {
  double mean = 0.0;
  double sd = 0.0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double acc = 0.0;
    for (double x : v) acc += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(acc / static_cast<double>(v.size() - 1));
  }
  return s;
}

// Percent when labeled, otherwise the 1-based peak (window or event) number.
struct XAxis {
  bool percent = true;
  std::string label() const { return percent ? "concentration (% of max)" : "peak"; }
};

double x_of(const TraceMeta& meta, std::size_t peak_index, const XAxis& axis) {
  if (!axis.percent) return static_cast<double>(peak_index + 1);
  return meta.concentration->percent;
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// key: (sensor or -1 for summed) -> gas -> x -> values
using Groups = std::map<int, std::map<GasLabel, std::map<double, std::vector<double>>>>;

std::vector<svg::Panel> mean_sd_panels(const Groups& groups, const XAxis& axis, const std::string& y_label,
                                       const std::vector<double>& xticks) {
  std::vector<svg::Panel> panels;
  for (const auto& [sensor, by_gas] : groups) {
    svg::Panel p;
    p.title = sensor < 0 ? "summed" : "sensor " + std::to_string(sensor);
    p.x_label = axis.label();
    p.y_label = y_label;
    p.x_ticks = xticks;
    std::size_t ci = 0;
    for (const auto& [gas, by_x] : by_gas) {
      svg::Series s;
      s.label = gas.empty() ? "unlabeled" : gas.name();
      s.color = svg::color(ci++);
      s.line = true;
      for (const auto& [x, values] : by_x) {
        const auto st = stats(values);
        s.x.push_back(x);
        s.y.push_back(st.mean);
        s.err.push_back(st.sd);
      }
      p.series.push_back(std::move(s));
    }
    panels.push_back(std::move(p));
  }
  return panels;
}

}  // namespace

std::string plot_bout_slopes(std::span<const BoutRow> rows) {
  XAxis axis;
  axis.percent = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.meta.concentration.has_value(); });
  // Window order per recording gives the peak number.
  std::map<std::pair<std::string, int>, std::size_t> seen;
  Groups groups;
  std::vector<double> xs;
  for (const auto& r : rows) {
    const std::size_t peak = seen[{r.trace_id, r.sensor_id}]++;
    if (!r.result) continue;
    const double x = x_of(r.meta, peak, axis);
    groups[r.sensor_id][r.meta.gas_primary][x].push_back(r.result->slope);
    xs.push_back(x);
  }
  auto panels = mean_sd_panels(groups, axis, "bout slope (units/s)", sorted_unique(xs));
  return svg::render("Bout slope versus concentration", panels);
}

std::string plot_inv_delta_t(std::span<const EventRow> events) {
  XAxis axis;
  axis.percent = std::all_of(events.begin(), events.end(), [](const auto& e) { return e.meta.concentration.has_value(); });
  Groups groups;
  std::vector<double> xs;
  for (const auto& e : events) {
    if (axis.percent && e.index != 0) continue;
    const double x = x_of(e.meta, e.index, axis);
    for (const auto& ev : e.record.sensors) {
      if (!ev.inv_delta_t) continue;
      groups[ev.sensor_id][e.meta.gas_primary][x].push_back(*ev.inv_delta_t);
      xs.push_back(x);
    }
  }
  auto panels = mean_sd_panels(groups, axis, "1 / delta t (1/s)", sorted_unique(xs));
  return svg::render("Inverse latency between Q_out and SD onset", panels);
}

std::string plot_feature_scatter(std::span<const DecodeRow> rows) {
  XAxis axis;
  axis.percent = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.meta.concentration.has_value(); });
  std::map<int, std::map<GasLabel, std::pair<std::vector<double>, std::vector<double>>>> points;
  std::vector<double> xs;
  for (const auto& r : rows) {
    if (!r.feature || (axis.percent && r.index != 0)) continue;
    const double x = x_of(r.meta, r.index, axis);
    xs.push_back(x);
    for (std::size_t k = 0; k < r.feature->sensor_ids.size(); ++k) {
      if (!r.feature->inv_delta_t[k]) continue;
      auto& [px, py] = points[r.feature->sensor_ids[k]][r.meta.gas_primary];
      px.push_back(x);
      py.push_back(*r.feature->inv_delta_t[k]);
    }
    auto& [sx, sy] = points[-1][r.meta.gas_primary];
    sx.push_back(x);
    sy.push_back(r.feature->summed);
  }
  const auto xticks = sorted_unique(xs);
  std::vector<svg::Panel> panels;
  // Summed panel last.
  std::vector<int> order;
  for (const auto& [sensor, _] : points) {
    if (sensor >= 0) order.push_back(sensor);
  }
  if (points.count(-1)) order.push_back(-1);
  for (int sensor : order) {
    svg::Panel p;
    p.title = sensor < 0 ? "summed over sensors" : "sensor " + std::to_string(sensor);
    p.x_label = axis.label();
    p.y_label = "1 / delta t (1/s)";
    p.x_ticks = xticks;
    std::size_t ci = 0;
    for (const auto& [gas, xy] : points[sensor]) {
      const auto& c = svg::color(ci++);
      svg::Series scatter;
      scatter.label = gas.empty() ? "unlabeled" : gas.name();
      scatter.color = c;
      scatter.x = xy.first;
      scatter.y = xy.second;
      p.series.push_back(scatter);
      // Dotted trend through the per-x means.
      std::map<double, std::vector<double>> by_x;
      for (std::size_t i = 0; i < xy.first.size(); ++i) by_x[xy.first[i]].push_back(xy.second[i]);
      svg::Series trend;
      trend.color = c;
      trend.markers = false;
      trend.line = true;
      trend.dashed = true;
      for (const auto& [x, v] : by_x) {
        trend.x.push_back(x);
        trend.y.push_back(stats(v).mean);
      }
      p.series.push_back(std::move(trend));
    }
    panels.push_back(std::move(p));
  }
  return svg::render("Front-end output per sensor and summed", panels);
}

PipelineResult run_pipeline(const PipelineRequest& request) {
  const auto& cfg = request.config;
  cfg.frontend.validate();

  json input;
  std::vector<Recording> recordings;
  if (request.input_dir) {
    input["kind"] = "directory";
    input["path"] = request.input_dir->string();
    input["files"] = json::array();
    for (const auto& f : csv_files(*request.input_dir)) {
      json entry = {{"name", f.filename().string()}, {"fnv1a64", checksum(read_file(f))}};
      if (fs::exists(sidecar_path(f))) entry["sidecar_fnv1a64"] = checksum(read_file(sidecar_path(f)));
      input["files"].push_back(entry);
      recordings.push_back(load_recording(f, request.schema));
    }
  } else {
    input["kind"] = "synthetic";
    input["gases"] = json::array();
    for (const auto& g : request.gases) input["gases"].push_back(g.name());
    input["levels"] = request.levels;
    recordings = synth_battery(request.gases, request.levels, cfg.trials, cfg.noise_sigma, cfg.seed);
  }
  if (recordings.empty()) throw Error("no recordings to process");

  PipelineResult result;
  std::vector<std::vector<BoutRow>> bouts(recordings.size());
  std::vector<std::vector<EventRow>> events(recordings.size());
  parallel_for(recordings.size(), cfg.jobs, [&](std::size_t i) {
    bouts[i] = analyze_bouts(recordings[i], cfg);
    events[i] = simulate_recording(recordings[i], cfg);
  });
  for (auto& b : bouts) std::move(b.begin(), b.end(), std::back_inserter(result.bouts));
  for (auto& e : events) std::move(e.begin(), e.end(), std::back_inserter(result.events));

  result.decoders = fit_decoders(result.events);
  result.decoded = decode_events(result.events, result.decoders);

  const auto& out = request.out_dir;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file_atomic(out / name, content);
    result.outputs.push_back(name);
  };
  emit("bouts.csv", bouts_csv(result.bouts));
  emit("events.jsonl", events_jsonl(result.events));
  emit("decode.csv", decode_csv(result.decoded));
  emit("decoders.json", decoders_to_json(result.decoders).dump(2) + "\n");
  emit("bout_slope_vs_percent.svg", plot_bout_slopes(result.bouts));
  emit("inv_delta_t_vs_percent.svg", plot_inv_delta_t(result.events));
  emit("feature_scatter.svg", plot_feature_scatter(result.decoded));

  json manifest;
  manifest["tool"] = "enose";
  manifest["version"] = kToolVersion;
  manifest["seed"] = cfg.seed;
  manifest["config"] = to_json(cfg);
  manifest["input"] = input;
  manifest["outputs"] = result.outputs;
  result.manifest = manifest;
  write_file_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

PipelineRequest request_from_manifest(const json& manifest, const fs::path& out_dir) {
  PipelineRequest req;
  req.config = app_config_from_json(manifest.at("config"));
  req.out_dir = out_dir;
  const auto& input = manifest.at("input");
  const auto kind = input.at("kind").get<std::string>();
  if (kind == "directory") {
    req.input_dir = fs::path(input.at("path").get<std::string>());
    for (const auto& f : input.at("files")) {
      const auto path = *req.input_dir / f.at("name").get<std::string>();
      if (!fs::exists(path)) throw Error("manifest input " + path.string() + " is missing");
      if (checksum(read_file(path)) != f.at("fnv1a64").get<std::string>()) {
        throw Error("manifest input " + path.string() + " changed since the recorded run");
      }
    }
  } else if (kind == "synthetic") {
    req.gases.clear();
    for (const auto& g : input.at("gases")) req.gases.emplace_back(g.get<std::string>());
    req.levels = input.at("levels").get<std::vector<int>>();
  } else {
    throw Error("unknown manifest input kind '" + kind + "'");
  }
  return req;
}

}  // namespace enose
