#include "enose/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "enose/error.hpp"

namespace enose {

namespace {

// Rows: EB, Eu, IA. Columns: sensor 1 (RED), 2 (OX), 3 (OTHER).
constexpr double kGains[3][3] = {
    {1.00, 0.45, 0.70},
    {0.60, 1.10, 0.35},
    {0.85, 0.30, 0.95},
};

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::mt19937_64 sensor_rng(std::uint64_t seed, int sensor_id, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sensor_id), static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

void add_noise(std::vector<double>& samples, double sigma, std::mt19937_64& rng) {
  if (sigma == 0.0) return;
  std::normal_distribution<double> noise(0.0, sigma);
  for (double& v : samples) v += noise(rng);
}

}  // namespace

SensorModel SensorModel::mics6814_like() {
  SensorModel m;
  m.sensors = {{1, ChannelKind::Red, 2.0}, {2, ChannelKind::Ox, 1.5}, {3, ChannelKind::Other, 1.0}};
  return m;
}

double SensorModel::gain(const GasLabel& gas, int sensor_id) const {
  if (sensor_id < 1) throw Error("sensor ids start at 1");
  const auto kind = gas.kind();
  if (kind != GasLabel::Known::Other && sensor_id <= 3) {
    return kGains[static_cast<int>(kind)][sensor_id - 1];
  }
  const auto h = fnv1a(gas.name() + "#" + std::to_string(sensor_id));
  return 0.3 + 0.9 * static_cast<double>(h % 1000) / 999.0;
}

std::size_t SynthTiming::sample_count() const {
  if (!(sample_rate > 0.0) || !(duration_s > 0.0)) throw Error("synth timing needs positive rate and duration");
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

std::vector<double> sensor_response(std::span<const double> drive, double sample_rate, double tau_rise_s,
                                    double tau_decay_s) {
  if (!(tau_rise_s > 0.0) || !(tau_decay_s > 0.0)) throw Error("time constants must be positive");
  const double dt = 1.0 / sample_rate;
  const double keep_rise = std::exp(-dt / tau_rise_s);
  const double keep_decay = std::exp(-dt / tau_decay_s);
  std::vector<double> y(drive.size(), 0.0);
  for (std::size_t n = 1; n < drive.size(); ++n) {
    const double u = drive[n - 1];
    const double prev = y[n - 1];
    const double keep = u > prev ? keep_rise : keep_decay;
    y[n] = u + (prev - u) * keep;
  }
  return y;
}

TraceSet synth_single_pulse(const GasLabel& gas, const ConcentrationLevel& level, double noise_sigma,
                            std::uint64_t seed, const PulseOptions& options) {
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw Error("noise_sigma must be >= 0");
  const auto& timing = options.timing;
  const std::size_t n = timing.sample_count();
  if (n < 2) throw Error("synth timing yields fewer than two samples");

  std::vector<double> on(n, 0.0);
  const double pulse_end = timing.pulse_onset_s + timing.pulse_width_s;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = timing.t0 + static_cast<double>(i) / timing.sample_rate;
    if (t >= timing.pulse_onset_s && t < pulse_end) on[i] = 1.0;
  }

  TraceMeta meta;
  meta.gas_primary = gas;
  meta.concentration = level;
  meta.trial = options.trial;
  meta.environment = Environment::SinglePulse;

  TraceSet out;
  for (const auto& sensor : options.model.sensors) {
    const double amplitude = options.model.gain(gas, sensor.id) * level.percent / 100.0;
    std::vector<double> drive(n);
    std::transform(on.begin(), on.end(), drive.begin(), [&](double v) { return v * amplitude; });
    auto samples = sensor_response(drive, timing.sample_rate, options.model.tau_rise_s, options.model.tau_decay_s);
    for (double& v : samples) v += sensor.baseline;
    auto rng = sensor_rng(seed, sensor.id, 0x5157u);
    add_noise(samples, noise_sigma, rng);
    out.emplace_back(sensor.id, sensor.kind, timing.sample_rate, timing.t0, std::move(samples), meta,
                     "s" + std::to_string(sensor.id));
  }
  return out;
}

TraceSet synth_plume(const StimulusProfile& profile, const GasLabel& gas, std::uint64_t seed,
                     const PlumeOptions& options) {
  if (!(options.noise_sigma >= 0.0)) throw Error("noise_sigma must be >= 0");
  if (!(options.sample_rate > 0.0)) throw Error("sample_rate must be positive");
  const double t0 = options.t0.value_or(profile.times().front());
  const double duration = options.duration_s.value_or(profile.times().back() - profile.times().front());
  const auto n = static_cast<std::size_t>(std::llround(duration * options.sample_rate));
  if (n < 2) throw Error("plume duration yields fewer than two samples");

  std::vector<double> relative(n);
  for (std::size_t i = 0; i < n; ++i) {
    relative[i] = profile.value_at(t0 + static_cast<double>(i) / options.sample_rate);
  }

  TraceMeta meta;
  meta.gas_primary = gas;
  meta.gas_secondary = options.gas_secondary;
  meta.trial = options.trial;
  meta.environment = Environment::Plume;

  TraceSet out;
  for (const auto& sensor : options.model.sensors) {
    const double gain = options.model.gain(gas, sensor.id);
    std::vector<double> drive(n);
    std::transform(relative.begin(), relative.end(), drive.begin(), [&](double v) { return v * gain; });
    auto samples = sensor_response(drive, options.sample_rate, options.model.tau_rise_s, options.model.tau_decay_s);
    for (double& v : samples) v += sensor.baseline;
    auto rng = sensor_rng(seed, sensor.id, 0x9e37u);
    add_noise(samples, options.noise_sigma, rng);
    out.emplace_back(sensor.id, sensor.kind, options.sample_rate, t0, std::move(samples), meta,
                     "s" + std::to_string(sensor.id));
  }
  return out;
}

}  // namespace enose
