#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "enose/trace.hpp"

namespace enose {

/// Metadata supplied from the command line. Set fields win over the sidecar.
struct MetaOverrides {
  std::optional<GasLabel> gas_primary;
  std::optional<GasLabel> gas_secondary;
  std::optional<int> trial;
  std::optional<ConcentrationLevel> concentration;
  std::optional<Environment> environment;
};

/// Column mapping for trace CSV files. The public recordings do not follow a
/// fixed layout, so everything here is overridable.
struct CsvSchema {
  std::string time_column = "time_s";        // empty: first column
  std::vector<std::string> sensor_columns;   // empty: every non-time column
  std::vector<int> sensor_ids;               // empty: trailing digits of the name, else position
  std::vector<ChannelKind> channel_kinds;    // empty: 1 -> RED, 2 -> OX, rest OTHER
  MetaOverrides meta;
  bool read_sidecar = true;
  double max_jitter = 0.10;  // relative step deviation still accepted (and resampled)
};

std::vector<SensorTrace> ingest_trace_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Stream form. The sidecar JSON text, when given, supplies metadata and the
/// exact sample rate / t0.
std::vector<SensorTrace> parse_trace_csv(std::istream& in, const CsvSchema& schema = {},
                                         const std::optional<std::string>& sidecar_json = std::nullopt);

/// Writes `time_s,<names>` CSV plus `<path>.meta.json`. Samples are written in
/// shortest round-trip form, so a re-ingest is bit-exact.
void write_trace_csv(const std::filesystem::path& path, std::span<const SensorTrace> traces);
std::string format_trace_csv(std::span<const SensorTrace> traces);
std::string format_sidecar_json(std::span<const SensorTrace> traces);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Two-column `time_s,concentration` file.
StimulusProfile read_profile_csv(const std::filesystem::path& path);
StimulusProfile parse_profile_csv(std::istream& in);

}  // namespace enose
