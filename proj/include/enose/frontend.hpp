#pragma once

#include <optional>
#include <span>
#include <vector>

#include "enose/filters.hpp"
#include "enose/trace.hpp"

namespace enose {

struct SensorModel;
struct SynthTiming;

enum class Variant {
  SinglePulseGated,  // SD outputs AND-ed with Q_out
  PlumeUngated,      // faster high-pass corner, SD passed through
};

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

struct FrontEndConfig {
  Variant variant = Variant::SinglePulseGated;
  FilterSpec filter = FilterSpec::single_pulse();
  double cd_threshold = 0.0;
  std::vector<double> sd_threshold;  // one value for all sensors, or one per sensor
  double trigger_duration_s = 0.0;
  double refractory_s = 0.0;

  /// Throws on non-positive thresholds or duration, or refractory < duration.
  void validate() const;

  /// Threshold of the sensor at position `index` in the trace set.
  double sd_threshold_for(std::size_t index) const;

  /// Defaults derived from the noiseless synthetic C1 battery; see
  /// calibrate_defaults for the procedure that produced these numbers.
  static FrontEndConfig single_pulse_defaults();
  static FrontEndConfig plume_defaults();
  static FrontEndConfig defaults_for(Variant v);

  bool operator==(const FrontEndConfig&) const = default;
};

/// Margins used by calibrate_defaults.
inline constexpr double kSdThresholdFraction = 0.30;  // of the smallest C1 bout amplitude per sensor
inline constexpr double kCdThresholdFraction = 0.20;  // of the smallest C1 bout amplitude overall
inline constexpr double kTriggerMargin = 0.25;        // C1 SD onset must fall in the first 75 % of Q_out

/// Recomputes the default thresholds and trigger duration from noiseless
/// synthetic pulses of every known gas. Thresholds come from the C1 bout
/// amplitudes under the variant's filter. The trigger duration is shared by
/// both variants: it holds the slowest C1 SD latency of the gated circuit and
/// every C1..C5 SD pulse of the ungated one, each with kTriggerMargin to
/// spare, rounded up to 0.1 s. Refractory equals the trigger duration.
FrontEndConfig calibrate_defaults(Variant variant, const SensorModel& model, const SynthTiming& timing);

/// Active interval of a digital output. An absent offset means the output
/// was still high at the end of the trace.
struct Pulse {
  double onset = 0.0;
  std::optional<double> offset;

  bool contains(const Pulse& inner) const noexcept;
  bool operator==(const Pulse&) const = default;
};

struct SensorEvent {
  int sensor_id = 0;
  std::optional<Pulse> sd;
  std::optional<double> delta_t_s;    // sd.onset - trigger.onset, only when > 0
  std::optional<double> inv_delta_t;  // 1 / delta_t_s

  bool operator==(const SensorEvent&) const = default;
};

struct EventRecord {
  Pulse trigger;  // Q_out
  std::vector<SensorEvent> sensors;

  bool operator==(const EventRecord&) const = default;
};

/// Onsets of the global change-detection trigger: the earliest moment any
/// sensor's filtered output rises through cd_threshold, re-armed only after
/// `refractory_s`. Comparator edges are placed by linear interpolation between
/// the two samples that straddle the threshold.
std::vector<double> change_detect(std::span<const SensorTrace> filtered, double cd_threshold,
                                  double refractory_s);

/// Q_out for one onset: [onset, onset + trigger_duration].
Pulse ramp_timer(double onset, const FrontEndConfig& config);

/// Latched Q_out sequence. Onsets arriving while Q_out is high are absorbed.
std::vector<Pulse> ramp_timer(std::span<const double> onsets, const FrontEndConfig& config);

/// Comparator output: the first interval at or above the threshold that is
/// active at or after within.onset and starts before within.offset. An output
/// already high when the window opens starts at within.onset.
std::optional<Pulse> slope_detect(const SensorTrace& filtered, double sd_threshold, const Pulse& within);

/// Interval intersection (AND gate).
std::optional<Pulse> gate_and(const std::optional<Pulse>& sd, const Pulse& trigger);

/// Applies the variant's output stage: AND gate for SinglePulseGated,
/// pass-through for PlumeUngated.
std::optional<Pulse> apply_gate(Variant variant, const std::optional<Pulse>& sd, const Pulse& trigger);

/// Full pipeline: band-pass, change detection, timer, slope detection, gating.
std::vector<EventRecord> simulate_front_end(std::span<const SensorTrace> traces, const FrontEndConfig& config);

/// Same, for traces that are already band-pass filtered.
std::vector<EventRecord> simulate_filtered(std::span<const SensorTrace> filtered, const FrontEndConfig& config);

}  // namespace enose
