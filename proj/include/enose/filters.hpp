#pragma once

#include <utility>

#include "enose/trace.hpp"

namespace enose {

/// How the two corners are realized.
///  - EdgeExact: first-order low-pass prototype mapped to a band-pass; the
///    -3 dB points sit exactly at f_low and f_high with unit gain at
///    sqrt(f_low * f_high). Equivalent to an RC high-pass/low-pass pair with
///    shifted corners whenever f_high / f_low is wide enough for real poles.
///  - RcCascade: first-order high-pass at f_low followed by a first-order
///    low-pass at f_high, corners taken literally.
enum class FilterTopology { EdgeExact, RcCascade };

std::string_view to_string(FilterTopology topology);
FilterTopology parse_filter_topology(std::string_view text);

struct FilterSpec {
  double f_low_hz = 0.1;
  double f_high_hz = 1.0;
  FilterTopology topology = FilterTopology::EdgeExact;
  // Batch filtering primes the input memory with the mean of this leading
  // span, so a noisy first sample does not inject a startup step. 0 primes
  // with the first sample alone.
  double prime_window_s = 0.5;

  /// Throws unless 0 < f_low < f_high, both finite.
  void validate() const;
  bool operator==(const FilterSpec&) const = default;

  static FilterSpec bout_analysis() { return {0.1, 1.0}; }
  static FilterSpec single_pulse() { return {0.04, 1.0}; }
  static FilterSpec plume() { return {0.4, 1.0}; }
};

/// Minimum oversampling of f_high accepted by the discretization.
inline constexpr double kMinOversampling = 20.0;

/// Streaming band-pass: one direct-form-I biquad with bilinear-transform
/// coefficients, corners prewarped. The first sample primes the input
/// memory so a constant input produces exactly zero output.
class FilterState {
 public:
  FilterState(const FilterSpec& spec, double sample_rate);

  const FilterSpec& spec() const noexcept { return spec_; }
  double sample_rate() const noexcept { return sample_rate_; }

  /// Advances one sample. Non-finite input throws.
  /// Sets the input memory to `level`, as if the input had always been there.
  /// An unprimed state primes itself with its first input.
  void prime(double level);

  double step(double x);

  struct Coefficients {
    double b0, b1, b2, a1, a2;
  };
  const Coefficients& coefficients() const noexcept { return c_; }

 private:
  FilterSpec spec_;
  double sample_rate_;
  Coefficients c_{};
  double x1_ = 0.0, x2_ = 0.0, y1_ = 0.0, y2_ = 0.0;
  bool primed_ = false;
};

/// Value-semantics form of FilterState::step.
std::pair<FilterState, double> filter_step(FilterState state, double x);

/// Causal band-pass over a whole trace; same length and time base.
SensorTrace bandpass_filter(const SensorTrace& trace, const FilterSpec& spec);
TraceSet bandpass_filter(std::span<const SensorTrace> traces, const FilterSpec& spec);

/// Magnitude response of the discrete filter at frequency f (Hz).
double filter_gain(const FilterSpec& spec, double sample_rate, double f_hz);

}  // namespace enose
