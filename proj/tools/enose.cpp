// enose: command-line front end for the e-nose analysis pipeline.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enose/bouts.hpp"
#include "enose/config.hpp"
#include "enose/csv_io.hpp"
#include "enose/error.hpp"
#include "enose/filters.hpp"
#include "enose/io.hpp"
#include "enose/pipeline.hpp"
#include "enose/synth.hpp"

namespace fs = std::filesystem;
using namespace enose;

namespace {

struct StageError : Error {
  StageError(std::string stage, const std::string& what) : Error(what), stage(std::move(stage)) {}
  std::string stage;
};

template <typename F>
auto stage(const std::string& name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

struct Globals {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out_dir = "out";
  std::vector<std::string> sets;
  std::string variant;
};

AppConfig resolve_config(const Globals& g) {
  return stage("config", [&] {
    std::map<std::string, std::string> flags;
    for (const auto& kv : g.sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw Error("--set expects key=value, got '" + kv + "'");
      flags[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    if (!g.variant.empty()) flags["variant"] = g.variant;
    if (g.seed) flags["seed"] = std::to_string(*g.seed);
    if (g.jobs) flags["jobs"] = std::to_string(*g.jobs);
    std::optional<fs::path> file;
    if (g.config) file = fs::path(*g.config);
    return load_config(file, environment_overrides(), flags);
  });
}

std::vector<Recording> load_inputs(const std::string& input, const CsvSchema& schema) {
  return stage("ingest", [&] {
    if (fs::is_directory(input)) return load_recordings(input, schema);
    if (!fs::exists(input)) throw Error("input " + input + " does not exist");
    return std::vector<Recording>{load_recording(input, schema)};
  });
}

void write_output(const fs::path& path, const std::string& content) {
  stage("write", [&] { write_file_atomic(path, content); });
  std::cout << path.string() << "\n";
}

std::vector<GasLabel> parse_gases(const std::vector<std::string>& names) {
  if (names.empty()) return GasLabel::known();
  std::vector<GasLabel> out;
  for (const auto& n : names) out.emplace_back(n);
  return out;
}

std::vector<int> parse_levels(const std::vector<std::string>& texts) {
  std::vector<int> out;
  for (const auto& t : texts) {
    const auto level = ConcentrationLevel::parse(t);
    if (level.index == 0) throw Error("level '" + t + "' is not one of C1..C5");
    out.push_back(level.index);
  }
  if (out.empty()) out = {1, 2, 3, 4, 5};
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-based e-nose analysis: synthesize, filter, measure bouts, simulate the front-end, decode."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  Globals g;
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--jobs", g.jobs, "Parallel trials")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_option("--set", g.sets, "Config override key=value (repeatable)");
  app.add_option("--variant", g.variant, "single_pulse_gated or plume_ungated");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate trace CSVs and write them normalized to a uniform grid");
  std::string ingest_in;
  std::optional<double> ingest_rate;
  ingest->add_option("input", ingest_in, "CSV file or directory")->required();
  ingest->add_option("--rate", ingest_rate, "Resample to this rate (Hz)")->check(CLI::PositiveNumber);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate synthetic sensor traces");
  synth->require_subcommand(1);
  auto* pulse = synth->add_subcommand("pulse", "Single-pulse battery: gases x levels x trials");
  std::vector<std::string> pulse_gases, pulse_levels;
  std::optional<int> pulse_trials;
  std::optional<double> pulse_noise;
  pulse->add_option("--gas", pulse_gases, "Gas label (repeatable; default EB Eu IA)");
  pulse->add_option("--level", pulse_levels, "Concentration level C1..C5 (repeatable; default all)");
  pulse->add_option("--trials", pulse_trials, "Trials per gas and level")->check(CLI::PositiveNumber);
  pulse->add_option("--noise", pulse_noise, "Additive noise standard deviation")->check(CLI::NonNegativeNumber);

  auto* plume = synth->add_subcommand("plume", "Replay a stimulus profile through the sensor model");
  std::string plume_profile, plume_gas = "EB";
  std::optional<std::string> plume_secondary;
  double plume_rate = 100.0;
  std::optional<double> plume_noise;
  plume->add_option("--profile", plume_profile, "Stimulus CSV: time_s, relative concentration")
      ->required()
      ->check(CLI::ExistingFile);
  plume->add_option("--gas", plume_gas, "Gas label");
  plume->add_option("--secondary", plume_secondary, "Secondary gas label (metadata only)");
  plume->add_option("--rate", plume_rate, "Sample rate (Hz)")->check(CLI::PositiveNumber);
  plume->add_option("--noise", plume_noise, "Additive noise standard deviation")->check(CLI::NonNegativeNumber);

  // filter
  auto* filter = app.add_subcommand("filter", "Band-pass traces with the front-end (or bout) filter");
  std::string filter_in;
  bool filter_bout = false;
  filter->add_option("input", filter_in, "CSV file or directory")->required();
  filter->add_flag("--bout", filter_bout, "Use the bout-analysis filter instead of the front-end filter");

  // bouts
  auto* bouts = app.add_subcommand("bouts", "Largest bout and bout slope per sensor and window");
  std::string bouts_in;
  bouts->add_option("input", bouts_in, "CSV file or directory")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run the event-based front-end and emit events as JSON lines");
  std::string sim_in;
  simulate->add_option("input", sim_in, "CSV file or directory")->required();

  // decode
  auto* decode = app.add_subcommand("decode", "Fit or apply decoders to simulated events");
  std::string decode_events_path;
  std::optional<std::string> decode_model;
  decode->add_option("events", decode_events_path, "events.jsonl")->required()->check(CLI::ExistingFile);
  decode->add_option("--decoders", decode_model, "Fitted decoders.json (default: fit on the events)")
      ->check(CLI::ExistingFile);

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "filter -> bouts -> simulate -> decode, with plots and manifest");
  std::optional<std::string> pipe_in, pipe_manifest;
  std::vector<std::string> pipe_gases, pipe_levels;
  pipeline->add_option("--input", pipe_in, "Directory of trace CSVs (default: synthetic battery)");
  pipeline->add_option("--gas", pipe_gases, "Synthetic battery gases (repeatable)");
  pipeline->add_option("--level", pipe_levels, "Synthetic battery levels (repeatable)");
  pipeline->add_option("--manifest", pipe_manifest, "Rerun the run recorded in this manifest.json")
      ->check(CLI::ExistingFile);

  // report
  auto* report = app.add_subcommand("report", "Render SVG plots from pipeline outputs");
  std::string report_events;
  std::optional<std::string> report_decoders;
  report->add_option("events", report_events, "events.jsonl")->required()->check(CLI::ExistingFile);
  report->add_option("--decoders", report_decoders, "decoders.json for the scatter plot")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    const AppConfig cfg = resolve_config(g);
    const fs::path out = g.out_dir;
    stage("write", [&] { fs::create_directories(out); });

    if (*ingest) {
      for (auto rec : load_inputs(ingest_in, {})) {
        if (ingest_rate) {
          rec.traces = stage("ingest", [&] {
            TraceSet resampled;
            for (const auto& t : rec.traces) resampled.push_back(resample(t, *ingest_rate));
            return resampled;
          });
        }
        stage("write", [&] { write_trace_csv(out / (rec.id + ".csv"), rec.traces); });
        std::cout << (out / (rec.id + ".csv")).string() << "\n";
      }
    } else if (*pulse) {
      const auto gases = stage("synth", [&] { return parse_gases(pulse_gases); });
      const auto levels = stage("synth", [&] { return parse_levels(pulse_levels); });
      const auto recs = stage("synth", [&] {
        return synth_battery(gases, levels, pulse_trials.value_or(cfg.trials), pulse_noise.value_or(cfg.noise_sigma),
                             cfg.seed);
      });
      for (const auto& rec : recs) {
        stage("write", [&] { write_trace_csv(out / (rec.id + ".csv"), rec.traces); });
        std::cout << (out / (rec.id + ".csv")).string() << "\n";
      }
    } else if (*plume) {
      const auto traces = stage("synth", [&] {
        PlumeOptions opts;
        opts.sample_rate = plume_rate;
        opts.noise_sigma = plume_noise.value_or(cfg.noise_sigma);
        if (plume_secondary) opts.gas_secondary = GasLabel(*plume_secondary);
        return synth_plume(read_profile_csv(plume_profile), GasLabel(plume_gas), cfg.seed, opts);
      });
      const auto path = out / (fs::path(plume_profile).stem().string() + "_" + plume_gas + ".csv");
      stage("write", [&] { write_trace_csv(path, traces); });
      std::cout << path.string() << "\n";
    } else if (*filter) {
      const FilterSpec spec = filter_bout ? cfg.bout_filter : cfg.frontend.filter;
      for (const auto& rec : load_inputs(filter_in, {})) {
        const auto filtered = stage("filter", [&] { return bandpass_filter(rec.traces, spec); });
        const auto path = out / (rec.id + "_filtered.csv");
        stage("write", [&] { write_trace_csv(path, filtered); });
        std::cout << path.string() << "\n";
      }
    } else if (*bouts) {
      const auto recs = load_inputs(bouts_in, {});
      std::vector<std::vector<BoutRow>> per(recs.size());
      stage("bouts", [&] { parallel_for(recs.size(), cfg.jobs, [&](std::size_t i) { per[i] = analyze_bouts(recs[i], cfg); }); });
      std::vector<BoutRow> rows;
      for (auto& p : per) rows.insert(rows.end(), p.begin(), p.end());
      write_output(out / "bouts.csv", bouts_csv(rows));
    } else if (*simulate) {
      const auto recs = load_inputs(sim_in, {});
      std::vector<std::vector<EventRow>> per(recs.size());
      stage("simulate", [&] {
        parallel_for(recs.size(), cfg.jobs, [&](std::size_t i) { per[i] = simulate_recording(recs[i], cfg); });
      });
      std::vector<EventRow> rows;
      for (auto& p : per) rows.insert(rows.end(), p.begin(), p.end());
      write_output(out / "events.jsonl", events_jsonl(rows));
    } else if (*decode) {
      const auto events = stage("decode", [&] { return parse_events_jsonl(read_file(decode_events_path)); });
      Decoders decoders;
      if (decode_model) {
        decoders = stage("decode", [&] { return decoders_from_json(nlohmann::json::parse(read_file(*decode_model))); });
      } else {
        decoders = stage("decode", [&] { return fit_decoders(events); });
        write_output(out / "decoders.json", decoders_to_json(decoders).dump(2) + "\n");
      }
      for (const auto& note : decoders.notes) std::cerr << "note: " << note << "\n";
      const auto rows = stage("decode", [&] { return decode_events(events, decoders); });
      write_output(out / "decode.csv", decode_csv(rows));
    } else if (*pipeline) {
      PipelineRequest req = stage("pipeline", [&] {
        if (pipe_manifest) return request_from_manifest(nlohmann::json::parse(read_file(*pipe_manifest)), out);
        PipelineRequest r;
        r.config = cfg;
        if (pipe_in) r.input_dir = fs::path(*pipe_in);
        r.gases = parse_gases(pipe_gases);
        r.levels = parse_levels(pipe_levels);
        r.out_dir = out;
        return r;
      });
      if (pipe_manifest && g.jobs) req.config.jobs = *g.jobs;  // parallelism never changes outputs
      const auto result = stage("pipeline", [&] { return run_pipeline(req); });
      for (const auto& note : result.decoders.notes) std::cerr << "note: " << note << "\n";
      for (const auto& name : result.outputs) std::cout << (out / name).string() << "\n";
      std::cout << (out / "manifest.json").string() << "\n";
    } else if (*report) {
      const auto events = stage("report", [&] { return parse_events_jsonl(read_file(report_events)); });
      const auto decoders = stage("report", [&] {
        return report_decoders ? decoders_from_json(nlohmann::json::parse(read_file(*report_decoders)))
                               : fit_decoders(events);
      });
      const auto rows = stage("report", [&] { return decode_events(events, decoders); });
      write_output(out / "inv_delta_t_vs_percent.svg", plot_inv_delta_t(events));
      write_output(out / "feature_scatter.svg", plot_feature_scatter(rows));
    }
  } catch (const StageError& e) {
    std::cerr << "error [" << e.stage << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
