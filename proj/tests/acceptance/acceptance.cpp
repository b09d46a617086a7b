// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "enose/bouts.hpp"
#include "enose/decode.hpp"
#include "enose/error.hpp"
#include "enose/filters.hpp"
#include "enose/frontend.hpp"
#include "enose/io.hpp"
#include "enose/pipeline.hpp"
#include "enose/synth.hpp"
#include "oracles.hpp"

using namespace enose;
namespace fs = std::filesystem;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int decimals = 3) { return format_fixed(v, decimals); }

// 1. Corner gains and DC rejection for every preset, measured by simulation.
Outcome filter_fidelity() {
  const auto start = Clock::now();
  const double rate = 100.0;
  double worst_corner = 0.0, worst_dc = 0.0;
  for (const auto& spec : {FilterSpec::single_pulse(), FilterSpec::bout_analysis(), FilterSpec::plume()}) {
    const double mid = oracle::measured_gain(spec, rate, std::sqrt(spec.f_low_hz * spec.f_high_hz));
    for (double corner : {spec.f_low_hz, spec.f_high_hz}) {
      const double ratio = oracle::measured_gain(spec, rate, corner) / mid;
      worst_corner = std::max(worst_corner, std::abs(ratio * std::sqrt(2.0) - 1.0));
    }
    // DC: a unit step, long after it settles.
    FilterState st(spec, rate);
    st.step(0.0);
    double y = 0.0;
    for (int i = 0; i < static_cast<int>(200.0 / spec.f_low_hz * rate); ++i) y = st.step(1.0);
    worst_dc = std::max({worst_dc, std::abs(y) / mid, filter_gain(spec, rate, 0.0)});
  }
  const double elapsed = seconds_since(start);
  const bool ok = worst_corner <= 0.05 && worst_dc < 1e-6 && elapsed < 1.0;
  return {ok ? Status::Pass : Status::Fail, "worst corner deviation " + fmt(100 * worst_corner, 2) + " %, DC gain " +
                                                format_double(worst_dc) + ", " + fmt(elapsed) + " s"};
}

// 2. Largest bout versus the exhaustive pair scan.
Outcome bout_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<int> len(2, 1000);
  std::uniform_int_distribution<int> coarse(-6, 6);
  std::normal_distribution<double> g;
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(len(rng));
    std::vector<double> v(n);
    double walk = 0.0;
    for (auto& x : v) {
      switch (trial % 3) {
        case 0: x = g(rng); break;
        case 1: x = coarse(rng); break;
        default: x = (walk += g(rng)); break;
      }
    }
    const auto tr = oracle::make_trace(v);
    const auto expect = oracle::pair_scan_bout(v, 0, n - 1);
    try {
      const auto got = locate_largest_bout(tr, Window(tr.t0(), tr.t_end()));
      if (!expect || got.min_index != expect->min_index || got.max_index != expect->max_index) ++mismatches;
    } catch (const Error&) {
      if (expect) ++mismatches;
    }
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < 30.0 ? Status::Pass : Status::Fail,
          std::to_string(mismatches) + " mismatches over 1000 traces, " + fmt(elapsed) + " s"};
}

// 3. Bout slope formula and amplitude equivariance.
Outcome slope_exactness() {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> k(0.01, 100.0);
  int formula_errors = 0;
  double worst_rel = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(300);
    for (auto& x : v) x = g(rng);
    const auto tr = oracle::make_trace(v);
    const Window w(tr.t0(), tr.t_end());
    Bout b;
    try {
      b = locate_largest_bout(tr, w);
    } catch (const Error&) {
      --trial;
      continue;
    }
    const double s = bout_slope(b).slope;
    if (s != (b.max_value - b.min_value) / (b.max_t - b.min_t)) ++formula_errors;
    const double factor = k(rng);
    std::vector<double> scaled(v);
    for (auto& x : scaled) x *= factor;
    const double sk = bout_slope(locate_largest_bout(oracle::make_trace(scaled), w)).slope;
    worst_rel = std::max(worst_rel, std::abs(sk - factor * s) / (factor * s));
  }
  const bool ok = formula_errors == 0 && worst_rel <= 1e-12;
  return {ok ? Status::Pass : Status::Fail, std::to_string(formula_errors) + " formula mismatches, worst scaling error " +
                                                format_double(worst_rel)};
}

// 4. Bout slope and inverse latency rise strictly with concentration.
Outcome monotone_encoding() {
  const auto start = Clock::now();
  const AppConfig cfg;
  const std::vector<int> levels{1, 2, 3, 4, 5};
  const auto battery = synth_battery(GasLabel::known(), levels, 1, 0.0, 1);
  std::map<std::pair<std::string, int>, std::vector<double>> slopes, inv;
  for (const auto& rec : battery) {
    for (const auto& row : analyze_bouts(rec, cfg)) {
      slopes[{rec.meta().gas_primary.name(), row.sensor_id}].push_back(row.result ? row.result->slope : NAN);
    }
    const auto events = simulate_recording(rec, cfg);
    for (const auto& ev : events.empty() ? std::vector<SensorEvent>{} : events.front().record.sensors) {
      inv[{rec.meta().gas_primary.name(), ev.sensor_id}].push_back(ev.inv_delta_t.value_or(NAN));
    }
    if (events.size() != 1) inv[{rec.meta().gas_primary.name(), 0}].push_back(NAN);
  }
  auto strictly_rising = [](const std::vector<double>& v) {
    if (v.size() != 5) return false;
    for (std::size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] > v[i - 1])) return false;
    }
    return true;
  };
  int ok_slope = 0, ok_inv = 0;
  for (const auto& [key, v] : slopes) ok_slope += strictly_rising(v);
  for (const auto& [key, v] : inv) ok_inv += strictly_rising(v);
  const double elapsed = seconds_since(start);
  const bool ok = ok_slope == 9 && ok_inv == 9 && slopes.size() == 9 && inv.size() == 9 && elapsed < 60.0;
  return {ok ? Status::Pass : Status::Fail, "bout slope " + std::to_string(ok_slope) + "/9, inv delta t " +
                                                std::to_string(ok_inv) + "/9 (gas, sensor) pairs, " + fmt(elapsed) +
                                                " s"};
}

// 5. Ideal post-filter ramps: delta t = threshold / slope.
Outcome inverse_law() {
  const auto cfg = FrontEndConfig::single_pulse_defaults();
  const double thr = cfg.sd_threshold_for(0);
  const double onset = 1.0;
  std::vector<double> s_list{0.2, 0.5, 1.0, 2.0, 5.0}, inv;
  double worst = 0.0;
  for (double s : s_list) {
    std::vector<double> v(600);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(0.0, s * (static_cast<double>(i) / 100.0 - onset));
    const auto sd = slope_detect(oracle::make_trace(v), thr, ramp_timer(onset, cfg));
    if (!sd) return {Status::Fail, "no SD pulse for slope " + format_double(s)};
    const double dt = sd->onset - onset;
    worst = std::max(worst, std::abs(dt - thr / s));
    inv.push_back(1.0 / dt);
  }
  const auto [slope, r2] = oracle::linear_fit(s_list, inv);
  const bool ok = worst <= 0.01 && r2 >= 0.999;
  return {ok ? Status::Pass : Status::Fail,
          "worst |delta t - thr/s| " + format_double(worst) + " s, R^2 " + format_fixed(r2, 9)};
}

// 6. Gated SD intervals stay inside Q_out.
Outcome gating_invariant() {
  const auto cfg = FrontEndConfig::single_pulse_defaults();
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int violations = 0, sd_count = 0;
  for (int trial = 0; trial < 500; ++trial) {
    PulseOptions opts;
    opts.timing.pulse_width_s = 0.3 + 3.0 * u(rng);
    opts.timing.pulse_onset_s = 2.0 * u(rng);
    const auto gas = GasLabel::known()[static_cast<std::size_t>(trial) % 3];
    const auto level = ConcentrationLevel::from_percent(5.0 + 95.0 * u(rng));
    const double noise = trial % 2 ? 0.0 : 0.01 * u(rng);
    for (const auto& r : simulate_front_end(synth_single_pulse(gas, level, noise, rng(), opts), cfg)) {
      for (const auto& ev : r.sensors) {
        if (!ev.sd) continue;
        ++sd_count;
        if (!r.trigger.contains(*ev.sd)) ++violations;
      }
    }
  }
  return {violations == 0 ? Status::Pass : Status::Fail,
          std::to_string(violations) + " violations over " + std::to_string(sd_count) + " SD pulses, 500 runs"};
}

// 7. Latch exclusivity on randomized two-peak plumes.
Outcome latch_exclusivity() {
  const auto cfg = FrontEndConfig::plume_defaults();
  const double separation_floor = cfg.trigger_duration_s + cfg.refractory_s;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int overlaps = 0, wrong_count = 0, separated = 0, total = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const double first = 0.5 * u(rng);
    const bool well_separated = trial % 3 != 0;
    const double gap = well_separated ? separation_floor + 0.1 + 3.0 * u(rng) : 0.5 + 3.0 * u(rng);
    const double w1 = 0.3 + 0.9 * u(rng), w2 = 0.3 + 0.9 * u(rng);
    const double a1 = 0.4 + 0.6 * u(rng), a2 = 0.4 + 0.6 * u(rng);
    const double second = first + std::max(gap, w1 + 0.05);
    const StimulusProfile p({first, first + w1, second, second + w2}, {a1, 0.0, a2, 0.0});
    PlumeOptions opts;
    opts.t0 = -2.0;
    opts.duration_s = second + 10.0;
    opts.noise_sigma = trial % 2 ? 0.0 : 0.0005;
    const auto recs = simulate_front_end(synth_plume(p, GasLabel::known()[static_cast<std::size_t>(trial) % 3], rng(), opts), cfg);
    ++total;
    for (std::size_t i = 1; i < recs.size(); ++i) {
      if (recs[i].trigger.onset < *recs[i - 1].trigger.offset) ++overlaps;
    }
    if (well_separated) {
      ++separated;
      // Exactly one record per peak, each starting near its rise.
      int matched = 0;
      for (double rise : {first, second}) {
        int n = 0;
        for (const auto& r : recs) n += r.trigger.onset >= rise - 1e-9 && r.trigger.onset < rise + 0.5;
        matched += n == 1;
      }
      if (recs.size() != 2 || matched != 2) ++wrong_count;
    }
  }
  const bool ok = overlaps == 0 && wrong_count == 0;
  return {ok ? Status::Pass : Status::Fail, std::to_string(overlaps) + " overlapping Q_out pairs over " +
                                                std::to_string(total) + " plumes, " + std::to_string(wrong_count) +
                                                "/" + std::to_string(separated) +
                                                " well-separated plumes without exactly one record per peak"};
}

// 8. Calibration round trip and gas recognition at C5.
Outcome decode_round_trip() {
  const AppConfig cfg;
  const std::vector<int> levels{1, 2, 3, 4, 5};
  auto events_of = [&](const std::vector<Recording>& recs) {
    std::vector<EventRow> rows;
    for (const auto& r : recs) {
      auto e = simulate_recording(r, cfg);
      rows.insert(rows.end(), e.begin(), e.end());
    }
    return rows;
  };

  // Concentration: fit on one noiseless battery, estimate on another seed.
  const auto calib = fit_decoders(events_of(synth_battery(GasLabel::known(), levels, 1, 0.0, 1)));
  const auto held = decode_events(events_of(synth_battery(GasLabel::known(), levels, 2, 0.0, 2)), calib);
  double worst_pct = 0.0;
  for (const auto& row : held) {
    if (!row.estimate) return {Status::Fail, "no concentration estimate for " + row.trace_id};
    worst_pct = std::max(worst_pct, std::abs(row.estimate->percent - row.meta.concentration->percent));
  }

  // Noise level: 10 % of the mean noiseless C1 response excursion over gases and sensors.
  double c1 = 0.0;
  int n_c1 = 0;
  const auto model = SensorModel::mics6814_like();
  for (const auto& gas : GasLabel::known()) {
    const auto t = synth_single_pulse(gas, ConcentrationLevel::from_index(1), 0.0, 1);
    for (std::size_t k = 0; k < t.size(); ++k) {
      c1 += *std::max_element(t[k].samples().begin(), t[k].samples().end()) - model.sensors[k].baseline;
      ++n_c1;
    }
  }
  const double sigma = 0.1 * c1 / n_c1;

  auto recognition = [&](double noise, std::uint64_t train_seed, std::uint64_t test_seed, int train_n, int test_n) {
    const std::vector<int> c5{5};
    const auto train = events_of(synth_battery(GasLabel::known(), c5, train_n, noise, train_seed));
    const auto decoders = fit_decoders(train);
    const auto test = decode_events(events_of(synth_battery(GasLabel::known(), c5, test_n, noise, test_seed)), decoders);
    int correct = 0, total = 0;
    std::map<std::string, bool> seen;
    for (const auto& row : test) {
      if (seen[row.trace_id]) continue;  // first event of each recording
      seen[row.trace_id] = true;
      ++total;
      correct += row.decision && row.decision->gas == row.meta.gas_primary;
    }
    return total ? static_cast<double>(correct) / total : 0.0;
  };
  const double clean = recognition(0.0, 3, 4, 5, 20);
  const double noisy = recognition(sigma, 5, 6, 20, 50);

  const bool ok = worst_pct <= 5.0 && clean == 1.0 && noisy >= 0.9;
  return {ok ? Status::Pass : Status::Fail,
          "worst concentration error " + fmt(worst_pct) + " points, recognition " + fmt(100 * clean, 1) +
              " % noiseless, " + fmt(100 * noisy, 1) + " % at sigma " + format_fixed(sigma, 5)};
}

// 9. Manifest rerun reproduces every output byte.
Outcome determinism() {
  oracle::TempDir dir("acceptance");
  PipelineRequest req;
  req.config = load_config(std::nullopt, {}, {{"trials", "4"}, {"noise_sigma", "0.002"}, {"seed", "2024"}, {"jobs", "4"}});
  req.out_dir = dir.path / "run1";
  run_pipeline(req);
  const auto manifest = nlohmann::json::parse(read_file(dir.path / "run1" / "manifest.json"));
  run_pipeline(request_from_manifest(manifest, dir.path / "run2"));
  int files = 0, differing = 0;
  for (const auto& e : fs::directory_iterator(dir.path / "run1")) {
    ++files;
    const auto other = dir.path / "run2" / e.path().filename();
    if (!fs::exists(other) || read_file(other) != read_file(e.path())) ++differing;
  }
  const bool ok = differing == 0 && files >= 8;
  return {ok ? Status::Pass : Status::Fail,
          std::to_string(differing) + " of " + std::to_string(files) + " files differ after manifest rerun"};
}

// 10. Public plume recordings: Eu separable from EB and IA on sensor 2, first peak.
Outcome dataset_check() {
  const char* dir = std::getenv("ENOSE_DATASET_DIR");
  if (dir == nullptr || *dir == '\0') return {Status::Skip, "ENOSE_DATASET_DIR not set"};
  const auto cfg = load_config(std::nullopt, environment_overrides(), {{"variant", "plume_ungated"}});
  std::map<std::string, std::vector<double>> by_gas;
  for (const auto& rec : load_recordings(dir)) {
    for (const auto& row : simulate_recording(rec, cfg)) {
      if (row.window != "0-2") continue;
      for (const auto& ev : row.record.sensors) {
        if (ev.sensor_id == 2 && ev.inv_delta_t) by_gas[rec.meta().gas_primary.name()].push_back(*ev.inv_delta_t);
      }
      break;
    }
  }
  auto mean_var = [](const std::vector<double>& v) {
    double m = 0.0, s = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, v.size() > 1 ? s / static_cast<double>(v.size() - 1) : 0.0};
  };
  if (by_gas["Eu"].size() < 2) return {Status::Fail, "fewer than two Eu first-peak features on sensor 2"};
  const auto [m_eu, v_eu] = mean_var(by_gas["Eu"]);
  double worst = 1e300;
  for (const char* other : {"EB", "IA"}) {
    if (by_gas[other].size() < 2) return {Status::Fail, std::string("fewer than two ") + other + " features"};
    const auto [m, v] = mean_var(by_gas[other]);
    const double pooled = std::sqrt(0.5 * (v + v_eu));
    worst = std::min(worst, std::abs(m_eu - m) / pooled);
  }
  return {worst >= 2.0 ? Status::Pass : Status::Fail, "Eu separation " + fmt(worst, 2) + " pooled standard deviations"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"filter fidelity", filter_fidelity},
      {"bout oracle equivalence", bout_oracle},
      {"bout slope exactness", slope_exactness},
      {"monotone encoding", monotone_encoding},
      {"inverse-proportionality law", inverse_law},
      {"gating invariant", gating_invariant},
      {"latch exclusivity", latch_exclusivity},
      {"decode round trip", decode_round_trip},
      {"determinism", determinism},
      {"dataset structure (optional)", dataset_check},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {Status::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = out.status == Status::Pass ? "PASS" : out.status == Status::Fail ? "FAIL" : "SKIP";
    failures += out.status == Status::Fail;
    std::cout << tag << "  [" << (i + 1) << "] " << criteria[i].first << ": " << out.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
