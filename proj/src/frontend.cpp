#include "enose/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enose/bouts.hpp"
#include "enose/error.hpp"
#include "enose/synth.hpp"

namespace enose {

std::string_view to_string(Variant v) {
  return v == Variant::PlumeUngated ? "plume_ungated" : "single_pulse_gated";
}

Variant parse_variant(std::string_view text) {
  if (text == "single_pulse_gated" || text == "SinglePulseGated" || text == "single_pulse") {
    return Variant::SinglePulseGated;
  }
  if (text == "plume_ungated" || text == "PlumeUngated" || text == "plume") return Variant::PlumeUngated;
  throw Error("unknown front-end variant '" + std::string(text) + "'");
}

void FrontEndConfig::validate() const {
  filter.validate();
  if (!(cd_threshold > 0.0) || !std::isfinite(cd_threshold)) throw Error("cd_threshold must be positive");
  if (sd_threshold.empty()) throw Error("sd_threshold is missing");
  for (double t : sd_threshold) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error("sd_threshold values must be positive");
  }
  if (!(trigger_duration_s > 0.0) || !std::isfinite(trigger_duration_s)) {
    throw Error("trigger_duration must be positive");
  }
  if (!(refractory_s >= trigger_duration_s) || !std::isfinite(refractory_s)) {
    throw Error("refractory must be at least the trigger duration");
  }
}

double FrontEndConfig::sd_threshold_for(std::size_t index) const {
  if (sd_threshold.size() == 1) return sd_threshold.front();
  if (index >= sd_threshold.size()) {
    throw Error("no sd_threshold for sensor position " + std::to_string(index + 1));
  }
  return sd_threshold[index];
}

// Frozen output of calibrate_defaults(variant, SensorModel::mics6814_like(), SynthTiming{}).
// tests/unit/test_frontend.cpp recomputes and compares them.
FrontEndConfig FrontEndConfig::single_pulse_defaults() {
  FrontEndConfig c;
  c.variant = Variant::SinglePulseGated;
  c.filter = FilterSpec::single_pulse();
  c.cd_threshold = 0.0063320181256971003;
  c.sd_threshold = {0.018996054377090708, 0.0094980271885456505, 0.011081031719969853};
  c.trigger_duration_s = 1.9;
  c.refractory_s = 1.9;
  return c;
}

FrontEndConfig FrontEndConfig::plume_defaults() {
  FrontEndConfig c;
  c.variant = Variant::PlumeUngated;
  c.filter = FilterSpec::plume();
  c.cd_threshold = 0.0022901481346735051;
  c.sd_threshold = {0.006870444404020553, 0.003435222202010257, 0.0040077592356786438};
  c.trigger_duration_s = 1.9;
  c.refractory_s = 1.9;
  return c;
}

FrontEndConfig FrontEndConfig::defaults_for(Variant v) {
  return v == Variant::PlumeUngated ? plume_defaults() : single_pulse_defaults();
}

bool Pulse::contains(const Pulse& inner) const noexcept {
  if (inner.onset < onset) return false;
  if (!offset) return true;
  return inner.offset && *inner.offset <= *offset;
}

namespace {

// Time at which the segment (t_prev, a) -> (t_prev + dt, b) meets `level`.
double crossing_time(double t_prev, double dt, double a, double b, double level) {
  if (b == a) return t_prev + dt;
  return t_prev + std::clamp((level - a) / (b - a), 0.0, 1.0) * dt;
}

}  // namespace

std::vector<double> change_detect(std::span<const SensorTrace> filtered, double cd_threshold,
                                  double refractory_s) {
  require_common_time_base(filtered);
  const auto& ref = filtered.front();
  const std::size_t n = ref.size();
  const double dt = ref.dt();

  std::vector<double> onsets;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double level = -std::numeric_limits<double>::infinity();
    for (const auto& tr : filtered) level = std::max(level, tr.samples()[i]);
    if (prev < cd_threshold && level >= cd_threshold) {
      // Earliest sensor to cross inside this sample interval.
      double t = ref.time_at(i);
      for (const auto& tr : filtered) {
        const double a = tr.samples()[i - 1];
        const double b = tr.samples()[i];
        if (a < cd_threshold && b >= cd_threshold) {
          t = std::min(t, crossing_time(ref.time_at(i - 1), dt, a, b, cd_threshold));
        }
      }
      if (onsets.empty() || t - onsets.back() >= refractory_s) onsets.push_back(t);
    }
    prev = level;
  }
  return onsets;
}

Pulse ramp_timer(double onset, const FrontEndConfig& config) {
  if (!std::isfinite(onset)) throw Error("trigger onset must be finite");
  return {onset, onset + config.trigger_duration_s};
}

std::vector<Pulse> ramp_timer(std::span<const double> onsets, const FrontEndConfig& config) {
  std::vector<Pulse> out;
  for (double t : onsets) {
    if (!out.empty() && t < *out.back().offset) continue;
    out.push_back(ramp_timer(t, config));
  }
  return out;
}

std::optional<Pulse> slope_detect(const SensorTrace& filtered, double sd_threshold, const Pulse& within) {
  const auto x = filtered.samples();
  const double rate = filtered.sample_rate();
  const double dt = filtered.dt();
  const double first_pos = std::ceil((within.onset - filtered.t0()) * rate - 1e-6);
  if (first_pos > static_cast<double>(x.size() - 1)) return std::nullopt;
  std::size_t i = static_cast<std::size_t>(std::max(first_pos, 0.0));
  while (i < x.size() && x[i] < sd_threshold) ++i;
  if (i == x.size()) return std::nullopt;

  double onset = filtered.time_at(i);
  if (i > 0 && x[i - 1] < sd_threshold) {
    onset = crossing_time(filtered.time_at(i - 1), dt, x[i - 1], x[i], sd_threshold);
  }
  // Already high when the window opened.
  onset = std::max(onset, within.onset);
  if (within.offset && onset >= *within.offset) return std::nullopt;

  Pulse sd{onset, std::nullopt};
  for (std::size_t j = i + 1; j < x.size(); ++j) {
    if (x[j] < sd_threshold) {
      sd.offset = crossing_time(filtered.time_at(j - 1), dt, x[j - 1], x[j], sd_threshold);
      break;
    }
  }
  return sd;
}

std::optional<Pulse> gate_and(const std::optional<Pulse>& sd, const Pulse& trigger) {
  if (!sd) return std::nullopt;
  const double onset = std::max(sd->onset, trigger.onset);
  std::optional<double> offset;
  if (sd->offset && trigger.offset) offset = std::min(*sd->offset, *trigger.offset);
  else if (sd->offset) offset = sd->offset;
  else offset = trigger.offset;
  if (offset && !(*offset > onset)) return std::nullopt;
  return Pulse{onset, offset};
}

std::optional<Pulse> apply_gate(Variant variant, const std::optional<Pulse>& sd, const Pulse& trigger) {
  return variant == Variant::SinglePulseGated ? gate_and(sd, trigger) : sd;
}

std::vector<EventRecord> simulate_filtered(std::span<const SensorTrace> filtered, const FrontEndConfig& config) {
  config.validate();
  require_common_time_base(filtered);
  if (config.sd_threshold.size() != 1 && config.sd_threshold.size() < filtered.size()) {
    throw Error("sd_threshold lists fewer values than there are sensors");
  }

  const auto onsets = change_detect(filtered, config.cd_threshold, config.refractory_s);
  std::vector<EventRecord> records;
  for (const auto& trigger : ramp_timer(onsets, config)) {
    EventRecord rec{trigger, {}};
    for (std::size_t k = 0; k < filtered.size(); ++k) {
      SensorEvent ev;
      ev.sensor_id = filtered[k].sensor_id();
      ev.sd = apply_gate(config.variant, slope_detect(filtered[k], config.sd_threshold_for(k), trigger), trigger);
      if (ev.sd) {
        const double dt = ev.sd->onset - trigger.onset;
        if (dt > 0.0) {
          ev.delta_t_s = dt;
          ev.inv_delta_t = 1.0 / dt;
        }
      }
      rec.sensors.push_back(std::move(ev));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<EventRecord> simulate_front_end(std::span<const SensorTrace> traces, const FrontEndConfig& config) {
  config.validate();
  require_common_time_base(traces);
  const auto filtered = bandpass_filter(traces, config.filter);
  return simulate_filtered(filtered, config);
}

namespace {

struct VariantThresholds {
  FilterSpec filter;
  double cd_threshold = 0.0;
  std::vector<double> sd_threshold;
};

VariantThresholds thresholds_for(Variant variant, const PulseOptions& opts) {
  VariantThresholds th;
  th.filter = variant == Variant::PlumeUngated ? FilterSpec::plume() : FilterSpec::single_pulse();
  const auto& timing = opts.timing;
  const Window whole(timing.t0, timing.t0 + timing.duration_s);
  std::vector<double> min_amp(opts.model.sensors.size(), std::numeric_limits<double>::infinity());
  for (const auto& gas : GasLabel::known()) {
    const auto filtered =
        bandpass_filter(synth_single_pulse(gas, ConcentrationLevel::from_index(1), 0.0, 0, opts), th.filter);
    for (std::size_t k = 0; k < filtered.size(); ++k) {
      min_amp[k] = std::min(min_amp[k], locate_largest_bout(filtered[k], whole).amplitude());
    }
  }
  for (double a : min_amp) th.sd_threshold.push_back(kSdThresholdFraction * a);
  th.cd_threshold = kCdThresholdFraction * *std::min_element(min_amp.begin(), min_amp.end());
  return th;
}

// Longest interval from trigger onset to the end of SD activity over the
// noiseless battery at the given levels; `onset_only` measures SD onset instead.
double longest_activity(const VariantThresholds& th, const PulseOptions& opts, int max_level, bool onset_only) {
  double worst = 0.0;
  for (const auto& gas : GasLabel::known()) {
    for (int level = 1; level <= max_level; ++level) {
      const auto filtered = bandpass_filter(
          synth_single_pulse(gas, ConcentrationLevel::from_index(level), 0.0, 0, opts), th.filter);
      const auto onsets = change_detect(filtered, th.cd_threshold, opts.timing.duration_s);
      if (onsets.empty()) throw Error("calibration: no change detected on a synthetic pulse");
      const Pulse open{onsets.front(), std::nullopt};
      for (std::size_t k = 0; k < filtered.size(); ++k) {
        const auto sd = slope_detect(filtered[k], th.sd_threshold[k], open);
        if (!sd) throw Error("calibration: synthetic pulse never reaches its SD threshold");
        const double end = onset_only ? sd->onset : sd->offset.value_or(filtered[k].t_end());
        worst = std::max(worst, end - open.onset);
      }
    }
  }
  return worst;
}

}  // namespace

FrontEndConfig calibrate_defaults(Variant variant, const SensorModel& model, const SynthTiming& timing) {
  const PulseOptions opts{model, timing, std::nullopt};
  const auto single = thresholds_for(Variant::SinglePulseGated, opts);
  const auto plume = thresholds_for(Variant::PlumeUngated, opts);

  // One timer serves both variants. It must hold the slowest C1 latency of
  // the gated circuit and outlast every SD pulse of the ungated one.
  const double need = std::max(longest_activity(single, opts, 1, true), longest_activity(plume, opts, 5, false));
  const double duration = std::ceil(need / (1.0 - kTriggerMargin) * 10.0 - 1e-9) / 10.0;

  const auto& th = variant == Variant::PlumeUngated ? plume : single;
  FrontEndConfig cfg;
  cfg.variant = variant;
  cfg.filter = th.filter;
  cfg.cd_threshold = th.cd_threshold;
  cfg.sd_threshold = th.sd_threshold;
  cfg.trigger_duration_s = duration;
  cfg.refractory_s = duration;
  return cfg;
}

}  // namespace enose
