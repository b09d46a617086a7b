#include "enose/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "enose/error.hpp"

namespace enose {

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Red: return "RED";
    case ChannelKind::Ox: return "OX";
    case ChannelKind::Other: return "OTHER";
  }
  return "OTHER";
}

std::string_view to_string(Environment env) {
  return env == Environment::Plume ? "plume" : "single_pulse";
}

ChannelKind parse_channel_kind(std::string_view text) {
  if (text == "RED" || text == "red") return ChannelKind::Red;
  if (text == "OX" || text == "ox") return ChannelKind::Ox;
  if (text == "OTHER" || text == "other") return ChannelKind::Other;
  throw Error("unknown channel kind '" + std::string(text) + "'");
}

Environment parse_environment(std::string_view text) {
  if (text == "single_pulse" || text == "SinglePulse") return Environment::SinglePulse;
  if (text == "plume" || text == "Plume") return Environment::Plume;
  throw Error("unknown environment '" + std::string(text) + "'");
}

GasLabel::GasLabel(std::string name) : name_(std::move(name)) {
  if (name_ == "EB") kind_ = Known::EB;
  else if (name_ == "Eu") kind_ = Known::Eu;
  else if (name_ == "IA") kind_ = Known::IA;
  else kind_ = Known::Other;
}

std::vector<GasLabel> GasLabel::known() { return {eb(), eu(), ia()}; }

std::strong_ordering GasLabel::operator<=>(const GasLabel& other) const noexcept {
  if (auto c = kind_ <=> other.kind_; c != 0) return c;
  return name_ <=> other.name_;
}

ConcentrationLevel ConcentrationLevel::from_index(int index) {
  if (index < 1 || index > 5) throw Error("concentration level must be C1..C5");
  return {index, 20.0 * index};
}

ConcentrationLevel ConcentrationLevel::from_percent(double percent) {
  if (!(percent > 0.0 && percent <= 100.0)) throw Error("concentration percent must lie in (0, 100]");
  for (int i = 1; i <= 5; ++i) {
    if (percent == 20.0 * i) return from_index(i);
  }
  return {0, percent};
}

ConcentrationLevel ConcentrationLevel::parse(std::string_view text) {
  if (text.size() == 2 && (text[0] == 'C' || text[0] == 'c') && text[1] >= '1' && text[1] <= '5') {
    return from_index(text[1] - '0');
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error("bad concentration level '" + std::string(text) + "'");
  }
  return from_percent(value);
}

std::string ConcentrationLevel::label() const {
  if (index >= 1) return "C" + std::to_string(index);
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, percent);
  return std::string(buf, ptr) + "pct";
}

SensorTrace::SensorTrace(int sensor_id, ChannelKind kind, double sample_rate, double t0,
                         std::vector<double> samples, TraceMeta meta, std::string name)
    : sensor_id_(sensor_id),
      kind_(kind),
      sample_rate_(sample_rate),
      t0_(t0),
      samples_(std::move(samples)),
      meta_(std::move(meta)),
      name_(std::move(name)) {
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) throw Error("sample_rate must be positive");
  if (!std::isfinite(t0_)) throw Error("t0 must be finite");
  if (samples_.empty()) throw Error("trace has no samples");
  if (!std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); })) {
    throw Error("trace contains non-finite samples");
  }
  if (meta_.trial && *meta_.trial < 1) throw Error("trial must be >= 1");
  if (name_.empty()) name_ = "s" + std::to_string(sensor_id_);
}

SensorTrace SensorTrace::with_samples(std::vector<double> samples) const {
  if (samples.size() != samples_.size()) throw Error("with_samples: length mismatch");
  return SensorTrace(sensor_id_, kind_, sample_rate_, t0_, std::move(samples), meta_, name_);
}

SensorTrace SensorTrace::with_meta(TraceMeta meta) const {
  return SensorTrace(sensor_id_, kind_, sample_rate_, t0_, samples_, std::move(meta), name_);
}

void require_common_time_base(std::span<const SensorTrace> traces) {
  if (traces.empty()) throw Error("no traces given");
  const auto& ref = traces.front();
  for (const auto& tr : traces) {
    if (tr.sample_rate() != ref.sample_rate() || tr.t0() != ref.t0() || tr.size() != ref.size()) {
      throw Error("traces do not share a time base (sample rate, t0, length)");
    }
  }
}

StimulusProfile::StimulusProfile(std::vector<double> times, std::vector<double> relative_concentration)
    : times_(std::move(times)), values_(std::move(relative_concentration)) {
  if (times_.size() != values_.size()) throw Error("profile times and values differ in length");
  if (times_.empty()) throw Error("empty stimulus profile");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i])) throw Error("non-finite profile value");
    if (i > 0 && !(times_[i] > times_[i - 1])) throw Error("profile times must be strictly increasing");
    values_[i] = std::clamp(values_[i], 0.0, 1.0);
  }
}

double StimulusProfile::value_at(double t) const noexcept {
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1];
}

namespace {

std::size_t grid_length(double span, double rate) {
  // The epsilon keeps an exact multiple of the period from losing its last point.
  return static_cast<std::size_t>(std::floor(span * rate + 1e-9)) + 1;
}

}  // namespace

std::vector<double> resample_grid(std::span<const double> times, std::span<const double> values,
                                  double new_rate) {
  if (!(new_rate > 0.0) || !std::isfinite(new_rate)) throw Error("new_rate must be positive");
  if (times.size() != values.size()) throw Error("times and values differ in length");
  if (times.size() < 2) throw Error("insufficient samples to resample");
  const double start = times.front();
  const std::size_t n = grid_length(times.back() - start, new_rate);
  std::vector<double> out(n);
  std::size_t k = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double t = start + static_cast<double>(j) / new_rate;
    while (k + 2 < times.size() && times[k + 1] <= t) ++k;
    const double span = times[k + 1] - times[k];
    const double frac = std::clamp((t - times[k]) / span, 0.0, 1.0);
    out[j] = values[k] + frac * (values[k + 1] - values[k]);
  }
  return out;
}

SensorTrace resample(const SensorTrace& trace, double new_rate) {
  if (!(new_rate > 0.0) || !std::isfinite(new_rate)) throw Error("new_rate must be positive");
  if (trace.size() < 2) throw Error("insufficient samples to resample");
  if (new_rate == trace.sample_rate()) return trace;

  const auto src = trace.samples();
  const double old_rate = trace.sample_rate();
  const double span = static_cast<double>(src.size() - 1) / old_rate;
  const std::size_t n = grid_length(span, new_rate);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double pos = static_cast<double>(j) * old_rate / new_rate;
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i >= src.size() - 1) {
      out[j] = src.back();
      continue;
    }
    const double frac = pos - static_cast<double>(i);
    out[j] = src[i] + frac * (src[i + 1] - src[i]);
  }
  return SensorTrace(trace.sensor_id(), trace.channel_kind(), new_rate, trace.t0(), std::move(out),
                     trace.meta(), trace.name());
}

}  // namespace enose
