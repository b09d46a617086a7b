#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "enose/bouts.hpp"
#include "enose/config.hpp"
#include "enose/csv_io.hpp"
#include "enose/decode.hpp"
#include "enose/frontend.hpp"
#include "enose/synth.hpp"

namespace enose {

inline constexpr const char* kToolVersion = "0.1.0";

/// One recording: every sensor of one trial.
struct Recording {
  std::string id;
  TraceSet traces;

  const TraceMeta& meta() const { return traces.front().meta(); }
};

/// Every *.csv in `dir`, sorted by file name. An empty directory is an error.
std::vector<Recording> load_recordings(const std::filesystem::path& dir, const CsvSchema& schema = {});
Recording load_recording(const std::filesystem::path& file, const CsvSchema& schema = {});

/// Noiseless or noisy single-pulse battery, gases x levels x trials. Trial
/// seeds are derived from `seed`, gas, level and trial number.
std::vector<Recording> synth_battery(std::span<const GasLabel> gases, std::span<const int> levels, int trials,
                                     double noise_sigma, std::uint64_t seed, const PulseOptions& options = {});

std::uint64_t derive_seed(std::uint64_t seed, const GasLabel& gas, int level, int trial);

/// Recording id used by the battery generator, e.g. "EB_C1_t03".
std::string battery_id(const GasLabel& gas, int level, int trial);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception is rethrown.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

struct BoutRow {
  std::string trace_id;
  TraceMeta meta;
  int sensor_id = 0;
  Window window;
  std::optional<BoutSlope> result;  // nullopt: no bout in that window
};

/// Band-passes with cfg.bout_filter and measures the largest bout in every
/// configured window (whole trace when none are configured).
std::vector<BoutRow> analyze_bouts(const Recording& rec, const AppConfig& cfg);
std::string bouts_csv(std::span<const BoutRow> rows);

struct EventRow {
  std::string trace_id;
  TraceMeta meta;
  std::size_t index = 0;  // position of the event within its recording
  std::optional<std::string> window;  // configured window holding the trigger onset, "0-2"
  EventRecord record;
};

std::vector<EventRow> simulate_recording(const Recording& rec, const AppConfig& cfg);
std::string events_jsonl(std::span<const EventRow> rows);
std::vector<EventRow> parse_events_jsonl(const std::string& text);

/// Calibration curves (one per gas with enough monotone levels) and a gas
/// model at the highest labeled concentration, fitted on the first event of
/// each recording.
struct Decoders {
  std::vector<CalibrationCurve> curves;
  std::optional<GasModel> model;
  double model_percent = 0.0;
  std::vector<std::string> notes;  // why a curve or the model could not be fitted

  const CalibrationCurve* curve_for(const GasLabel& gas) const;
};

Decoders fit_decoders(std::span<const EventRow> events, const FeatureScope& curve_scope = FeatureScope::summed(),
                      const FeatureScope& model_scope = FeatureScope::per_sensor());

struct DecodeRow {
  std::string trace_id;
  std::size_t index = 0;
  TraceMeta meta;
  std::optional<FeatureVector> feature;
  std::optional<GasDecision> decision;
  std::optional<ConcentrationEstimate> estimate;
  std::vector<std::string> flags;
};

/// Concentration uses the recording's own gas label when known, otherwise the
/// predicted gas.
std::vector<DecodeRow> decode_events(std::span<const EventRow> events, const Decoders& decoders);
std::string decode_csv(std::span<const DecodeRow> rows);

nlohmann::json decoders_to_json(const Decoders& d);
Decoders decoders_from_json(const nlohmann::json& j);

std::string plot_bout_slopes(std::span<const BoutRow> rows);
std::string plot_inv_delta_t(std::span<const EventRow> events);
std::string plot_feature_scatter(std::span<const DecodeRow> rows);

/// Everything needed to reproduce a pipeline run.
struct PipelineRequest {
  AppConfig config;
  std::optional<std::filesystem::path> input_dir;
  CsvSchema schema;
  // Synthetic battery, used when input_dir is empty.
  std::vector<GasLabel> gases = GasLabel::known();
  std::vector<int> levels = {1, 2, 3, 4, 5};
  std::filesystem::path out_dir = "out";
};

struct PipelineResult {
  std::vector<BoutRow> bouts;
  std::vector<EventRow> events;
  Decoders decoders;
  std::vector<DecodeRow> decoded;
  std::vector<std::string> outputs;  // file names written under out_dir
  nlohmann::json manifest;
};

/// filter -> bouts -> front-end simulation -> decode, then writes
/// bouts.csv, events.jsonl, decode.csv, decoders.json, three SVG plots and
/// manifest.json into out_dir.
PipelineResult run_pipeline(const PipelineRequest& request);

/// Rebuilds the request recorded in a manifest. Input checksums are verified.
PipelineRequest request_from_manifest(const nlohmann::json& manifest, const std::filesystem::path& out_dir);

/// 64-bit FNV-1a of a byte string, as 16 hex digits.
std::string checksum(std::string_view bytes);

}  // namespace enose
