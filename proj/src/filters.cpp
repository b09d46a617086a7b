#include "enose/filters.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "enose/error.hpp"
#include "enose/io.hpp"

namespace enose {

std::string_view to_string(FilterTopology topology) {
  return topology == FilterTopology::RcCascade ? "rc_cascade" : "edge_exact";
}

FilterTopology parse_filter_topology(std::string_view text) {
  if (text == "edge_exact") return FilterTopology::EdgeExact;
  if (text == "rc_cascade") return FilterTopology::RcCascade;
  throw Error("unknown filter topology '" + std::string(text) + "'");
}

void FilterSpec::validate() const {
  if (!std::isfinite(f_low_hz) || !std::isfinite(f_high_hz) || !(f_low_hz > 0.0) || !(f_low_hz < f_high_hz)) {
    throw Error("filter cutoffs must satisfy 0 < f_low < f_high");
  }
  if (!std::isfinite(prime_window_s) || prime_window_s < 0.0) throw Error("prime_window_s must be >= 0");
}

namespace {

FilterState::Coefficients design(const FilterSpec& spec, double fs) {
  const double k = 2.0 * fs;
  const double w_low = k * std::tan(std::numbers::pi * spec.f_low_hz / fs);
  const double w_high = k * std::tan(std::numbers::pi * spec.f_high_hz / fs);
  double n0 = 0.0, a0 = 0.0, a1 = 0.0, a2 = 0.0;
  if (spec.topology == FilterTopology::EdgeExact) {
    // B s / (s^2 + B s + w0^2), B = wH - wL, w0^2 = wL wH
    const double bw = w_high - w_low;
    const double w0sq = w_low * w_high;
    n0 = bw * k;
    a0 = k * k + bw * k + w0sq;
    a1 = 2.0 * (w0sq - k * k);
    a2 = k * k - bw * k + w0sq;
  } else {
    // s / (s + wL) * wH / (s + wH)
    n0 = k * w_high;
    a0 = (k + w_low) * (k + w_high);
    a1 = (w_low - k) * (k + w_high) + (k + w_low) * (w_high - k);
    a2 = (w_low - k) * (w_high - k);
  }
  // Both numerators reduce to n0 * (1 - z^-2).
  return {n0 / a0, 0.0, -n0 / a0, a1 / a0, a2 / a0};
}

}  // namespace

FilterState::FilterState(const FilterSpec& spec, double sample_rate) : spec_(spec), sample_rate_(sample_rate) {
  spec_.validate();
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) throw Error("sample_rate must be positive");
  if (sample_rate_ < kMinOversampling * spec_.f_high_hz) {
    throw Error("sample rate " + format_double(sample_rate_) + " Hz is below " +
                format_double(kMinOversampling) + " x f_high; resample the trace first");
  }
  c_ = design(spec_, sample_rate_);
}

void FilterState::prime(double level) {
  if (!std::isfinite(level)) throw Error("filter input must be finite");
  x1_ = x2_ = level;
  primed_ = true;
}

double FilterState::step(double x) {
  if (!std::isfinite(x)) throw Error("filter input must be finite");
  if (!primed_) prime(x);
  const double y = c_.b0 * x + c_.b1 * x1_ + c_.b2 * x2_ - c_.a1 * y1_ - c_.a2 * y2_;
  x2_ = x1_;
  x1_ = x;
  y2_ = y1_;
  y1_ = y;
  return y;
}

std::pair<FilterState, double> filter_step(FilterState state, double x) {
  const double y = state.step(x);
  return {std::move(state), y};
}

SensorTrace bandpass_filter(const SensorTrace& trace, const FilterSpec& spec) {
  FilterState state(spec, trace.sample_rate());
  const auto x = trace.samples();
  const auto n_prime = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(spec.prime_window_s * trace.sample_rate())), 1, x.size());
  double level = 0.0;
  for (std::size_t i = 0; i < n_prime; ++i) level += x[i];
  state.prime(level / static_cast<double>(n_prime));
  std::vector<double> out;
  out.reserve(trace.size());
  for (double x : trace.samples()) out.push_back(state.step(x));
  return trace.with_samples(std::move(out));
}

TraceSet bandpass_filter(std::span<const SensorTrace> traces, const FilterSpec& spec) {
  TraceSet out;
  out.reserve(traces.size());
  for (const auto& tr : traces) out.push_back(bandpass_filter(tr, spec));
  return out;
}

double filter_gain(const FilterSpec& spec, double sample_rate, double f_hz) {
  const auto c = FilterState(spec, sample_rate).coefficients();
  const std::complex<double> z1 = std::polar(1.0, -2.0 * std::numbers::pi * f_hz / sample_rate);
  const auto z2 = z1 * z1;
  const auto num = c.b0 + c.b1 * z1 + c.b2 * z2;
  const auto den = 1.0 + c.a1 * z1 + c.a2 * z2;
  return std::abs(num / den);
}

}  // namespace enose
