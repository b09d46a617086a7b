#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace enose {

enum class ChannelKind { Red, Ox, Other };
enum class Environment { SinglePulse, Plume };

std::string_view to_string(ChannelKind kind);
std::string_view to_string(Environment env);
ChannelKind parse_channel_kind(std::string_view text);
Environment parse_environment(std::string_view text);

/// Gas identity. The three odorants of the recordings have fixed slots; any
/// other name is accepted and orders after them, lexicographically.
class GasLabel {
 public:
  enum class Known : std::uint8_t { EB = 0, Eu = 1, IA = 2, Other = 3 };

  GasLabel() = default;
  explicit GasLabel(std::string name);

  static GasLabel eb() { return GasLabel("EB"); }
  static GasLabel eu() { return GasLabel("Eu"); }
  static GasLabel ia() { return GasLabel("IA"); }
  static std::vector<GasLabel> known();

  const std::string& name() const noexcept { return name_; }
  Known kind() const noexcept { return kind_; }
  bool empty() const noexcept { return name_.empty(); }

  bool operator==(const GasLabel& other) const noexcept { return name_ == other.name_; }
  std::strong_ordering operator<=>(const GasLabel& other) const noexcept;

 private:
  std::string name_;
  Known kind_ = Known::Other;
};

/// Stimulus amplitude relative to the highest delivered concentration.
/// C1..C5 map to 20..100 percent.
struct ConcentrationLevel {
  int index = 0;  // 1..5, or 0 for a free-form percent
  double percent = 0.0;

  static ConcentrationLevel from_index(int index);
  static ConcentrationLevel from_percent(double percent);
  /// Accepts "C1".."C5" or a bare percent such as "60".
  static ConcentrationLevel parse(std::string_view text);

  std::string label() const;
  bool operator==(const ConcentrationLevel&) const = default;
};

struct TraceMeta {
  GasLabel gas_primary;
  std::optional<GasLabel> gas_secondary;
  std::optional<int> trial;
  std::optional<ConcentrationLevel> concentration;
  // Plume recordings whose level is only bracketed (e.g. between C2 and C3).
  std::optional<std::pair<double, double>> concentration_bracket;
  Environment environment = Environment::SinglePulse;

  bool operator==(const TraceMeta&) const = default;
};

/// Uniformly sampled single-channel sensor signal. Sample i sits at
/// t0 + i / sample_rate. Immutable after construction.
class SensorTrace {
 public:
  SensorTrace(int sensor_id, ChannelKind kind, double sample_rate, double t0,
              std::vector<double> samples, TraceMeta meta = {}, std::string name = {});

  int sensor_id() const noexcept { return sensor_id_; }
  ChannelKind channel_kind() const noexcept { return kind_; }
  double sample_rate() const noexcept { return sample_rate_; }
  double t0() const noexcept { return t0_; }
  double dt() const noexcept { return 1.0 / sample_rate_; }
  std::span<const double> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  const TraceMeta& meta() const noexcept { return meta_; }
  const std::string& name() const noexcept { return name_; }

  double time_at(std::size_t i) const noexcept {
    return t0_ + static_cast<double>(i) / sample_rate_;
  }
  double t_end() const noexcept { return time_at(samples_.size() - 1); }

  /// Same metadata and time base, new samples (must have equal length).
  SensorTrace with_samples(std::vector<double> samples) const;
  SensorTrace with_meta(TraceMeta meta) const;

 private:
  int sensor_id_;
  ChannelKind kind_;
  double sample_rate_;
  double t0_;
  std::vector<double> samples_;
  TraceMeta meta_;
  std::string name_;
};

/// All sensors of one recording, sharing a time base.
using TraceSet = std::vector<SensorTrace>;

/// Throws unless every trace shares sample rate, t0 and length.
void require_common_time_base(std::span<const SensorTrace> traces);

/// Relative concentration command trace. Values are clamped to [0, 1] on
/// construction; times must be strictly increasing.
class StimulusProfile {
 public:
  StimulusProfile(std::vector<double> times, std::vector<double> relative_concentration);

  std::span<const double> times() const noexcept { return times_; }
  std::span<const double> values() const noexcept { return values_; }

  /// Zero-order hold: value of the last point at or before t, 0 before the first.
  double value_at(double t) const noexcept;

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

/// Linear interpolation onto a uniform grid at new_rate. t0 is preserved
/// and the grid never runs past the original last timestamp.
SensorTrace resample(const SensorTrace& trace, double new_rate);

/// Interpolates an arbitrary strictly increasing grid onto a uniform one
/// starting at times.front().
std::vector<double> resample_grid(std::span<const double> times, std::span<const double> values,
                                  double new_rate);

}  // namespace enose
