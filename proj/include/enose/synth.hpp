#pragma once

#include <cstdint>
#include <vector>

#include "enose/trace.hpp"

namespace enose {

/// Asymmetric first-order MOx response: the output relaxes toward the
/// drive with tau_rise while below it and tau_decay while above it.
/// Gains are per (gas, sensor); baseline per sensor.
struct SensorModel {
  struct Sensor {
    int id;
    ChannelKind kind;
    double baseline;
  };

  std::vector<Sensor> sensors;
  double tau_rise_s = 1.0;
  double tau_decay_s = 4.0;

  /// Three MiCS-6814-like channels with separated gain vectors for EB, Eu, IA.
  static SensorModel mics6814_like();

  /// Response amplitude per unit relative concentration. Unknown gases get a
  /// deterministic gain derived from the label text.
  double gain(const GasLabel& gas, int sensor_id) const;
};

/// Sampling grid and pulse placement of generated traces.
struct SynthTiming {
  double sample_rate = 100.0;
  double t0 = -2.0;
  double duration_s = 12.0;
  double pulse_onset_s = 0.0;
  double pulse_width_s = 1.0;

  std::size_t sample_count() const;
};

struct PulseOptions {
  SensorModel model = SensorModel::mics6814_like();
  SynthTiming timing;
  std::optional<int> trial;
};

/// One trace per model sensor. A rectangular stimulus of amplitude
/// gain * percent / 100 drives the sensor model; white Gaussian noise of
/// noise_sigma is added. Deterministic for a fixed seed.
TraceSet synth_single_pulse(const GasLabel& gas, const ConcentrationLevel& level, double noise_sigma,
                            std::uint64_t seed, const PulseOptions& options = {});

struct PlumeOptions {
  SensorModel model = SensorModel::mics6814_like();
  double sample_rate = 100.0;
  std::optional<double> t0;          // default: first profile time
  std::optional<double> duration_s;  // default: profile span
  double noise_sigma = 0.0;
  std::optional<GasLabel> gas_secondary;
  std::optional<int> trial;
};

/// Same sensor model driven by a relative-concentration profile (value 1.0
/// corresponds to C5), sampled by zero-order hold.
TraceSet synth_plume(const StimulusProfile& profile, const GasLabel& gas, std::uint64_t seed,
                     const PlumeOptions& options = {});

/// Noiseless sensor response to an arbitrary drive sequence sampled at
/// `sample_rate`, starting from rest at zero drive. Exact for piecewise
/// constant drive (zero-order hold discretization).
std::vector<double> sensor_response(std::span<const double> drive, double sample_rate, double tau_rise_s,
                                    double tau_decay_s);

}  // namespace enose
