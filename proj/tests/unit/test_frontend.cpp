#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "enose/error.hpp"
#include "enose/filters.hpp"
#include "enose/frontend.hpp"
#include "enose/synth.hpp"
#include "oracles.hpp"

using namespace enose;

namespace {

FrontEndConfig test_config(double thr = 0.5, double duration = 2.0) {
  FrontEndConfig c = FrontEndConfig::single_pulse_defaults();
  c.cd_threshold = thr;
  c.sd_threshold = {thr};
  c.trigger_duration_s = duration;
  c.refractory_s = duration;
  return c;
}

std::vector<double> values(const SensorTrace& t) { return {t.samples().begin(), t.samples().end()}; }

TraceSet two_peak_plume(double first_onset, double second_onset, double width, double level2) {
  const StimulusProfile p({first_onset, first_onset + width, second_onset, second_onset + width},
                          {1.0, 0.0, level2, 0.0});
  PlumeOptions opts;
  opts.t0 = -2.0;
  opts.duration_s = 12.0;
  return synth_plume(p, GasLabel::eb(), 1, opts);
}

}  // namespace

TEST_CASE("config validation") {
  auto c = test_config();
  CHECK_NOTHROW(c.validate());
  c.refractory_s = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = test_config();
  c.sd_threshold = {};
  CHECK_THROWS_AS(c.validate(), Error);
  c.sd_threshold = {0.1, -0.1};
  CHECK_THROWS_AS(c.validate(), Error);
  c = test_config();
  c.trigger_duration_s = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK(parse_variant("plume_ungated") == Variant::PlumeUngated);
  CHECK_THROWS_AS(parse_variant("other"), Error);
  c = test_config();
  c.sd_threshold = {0.1, 0.2};
  CHECK(c.sd_threshold_for(1) == 0.2);
  CHECK_THROWS_AS(c.sd_threshold_for(2), Error);
}

TEST_CASE("frozen defaults equal a fresh calibration") {
  for (auto v : {Variant::SinglePulseGated, Variant::PlumeUngated}) {
    const auto fresh = calibrate_defaults(v, SensorModel::mics6814_like(), SynthTiming{});
    const auto frozen = FrontEndConfig::defaults_for(v);
    CHECK(fresh.variant == frozen.variant);
    CHECK(fresh.filter == frozen.filter);
    CHECK(fresh.cd_threshold == doctest::Approx(frozen.cd_threshold).epsilon(1e-12));
    REQUIRE(fresh.sd_threshold.size() == frozen.sd_threshold.size());
    for (std::size_t k = 0; k < fresh.sd_threshold.size(); ++k) {
      CHECK(fresh.sd_threshold[k] == doctest::Approx(frozen.sd_threshold[k]).epsilon(1e-12));
    }
    CHECK(fresh.trigger_duration_s == doctest::Approx(frozen.trigger_duration_s));
    CHECK(fresh.refractory_s == doctest::Approx(frozen.refractory_s));
  }
}

TEST_CASE("default trigger duration leaves 25 percent margin on C1 latency") {
  const auto cfg = FrontEndConfig::single_pulse_defaults();
  for (const auto& gas : GasLabel::known()) {
    const auto recs = simulate_front_end(synth_single_pulse(gas, ConcentrationLevel::from_index(1), 0.0, 1), cfg);
    REQUIRE(recs.size() == 1);
    for (const auto& ev : recs[0].sensors) {
      REQUIRE(ev.delta_t_s);
      CHECK(*ev.delta_t_s <= 0.75 * cfg.trigger_duration_s);
    }
  }
}

TEST_CASE("ramp timer and latch") {
  const auto c = test_config(0.5, 2.0);
  CHECK(ramp_timer(1.0, c) == Pulse{1.0, 3.0});
  const std::vector<double> onsets{1.0, 1.5};
  const auto q = ramp_timer(onsets, c);
  REQUIRE(q.size() == 1);
  CHECK(q[0] == Pulse{1.0, 3.0});
  const std::vector<double> apart{1.0, 3.0, 4.0, 4.9};
  const auto q2 = ramp_timer(apart, c);
  REQUIRE(q2.size() == 2);
  CHECK(q2[1] == Pulse{3.0, 5.0});
  CHECK_THROWS_AS(ramp_timer(NAN, c), Error);
}

TEST_CASE("AND gate is interval intersection") {
  const Pulse trig{1.0, 4.0};
  CHECK(gate_and(Pulse{2.0, 6.0}, trig) == Pulse{2.0, 4.0});
  CHECK_FALSE(gate_and(std::nullopt, trig));
  CHECK_FALSE(gate_and(Pulse{5.0, 6.0}, trig));
  CHECK(gate_and(Pulse{2.0, std::nullopt}, trig) == Pulse{2.0, 4.0});
  CHECK(apply_gate(Variant::PlumeUngated, Pulse{2.0, 6.0}, trig) == Pulse{2.0, 6.0});
  CHECK(apply_gate(Variant::SinglePulseGated, Pulse{2.0, 6.0}, trig) == Pulse{2.0, 4.0});
}

TEST_CASE("slope detection: absent below threshold") {
  const auto t = oracle::make_trace(std::vector<double>(500, 0.2));
  CHECK_FALSE(slope_detect(t, 0.5, Pulse{0.0, 4.0}));
}

TEST_CASE("slope detection on ideal ramps: delta t = threshold / slope") {
  const double thr = 0.3, onset = 1.0;
  for (double s : {0.2, 0.5, 1.0, 2.0, 5.0}) {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(0.0, s * (i / 100.0 - onset));
    const auto sd = slope_detect(oracle::make_trace(v), thr, Pulse{onset, onset + 9.0});
    REQUIRE(sd);
    CHECK(std::abs((sd->onset - onset) - thr / s) <= 0.01);
    CHECK(sd->onset - onset == doctest::Approx(thr / s).epsilon(1e-9));
  }
}

TEST_CASE("slope detection: pulse already high and pulse after window") {
  std::vector<double> v(300, 1.0);
  for (std::size_t i = 200; i < 300; ++i) v[i] = 0.0;
  const auto sd = slope_detect(oracle::make_trace(v), 0.5, Pulse{0.5, 2.5});
  REQUIRE(sd);
  CHECK(sd->onset == 0.5);
  CHECK(*sd->offset == doctest::Approx(1.995));
  std::vector<double> late(300, 0.0);
  for (std::size_t i = 250; i < 300; ++i) late[i] = 1.0;
  CHECK_FALSE(slope_detect(oracle::make_trace(late), 0.5, Pulse{0.0, 2.0}));
}

TEST_CASE("change detection: silence, single pulse, two pulses") {
  const std::vector<SensorTrace> zeros{oracle::make_trace(std::vector<double>(500, 0.0)),
                                       oracle::make_trace(std::vector<double>(500, 0.0), 100.0, 0.0, 2)};
  CHECK(change_detect(zeros, 0.1, 2.0).empty());

  const auto cfg = FrontEndConfig::single_pulse_defaults();
  const auto filtered = bandpass_filter(synth_single_pulse(GasLabel::eu(), ConcentrationLevel::from_index(2), 0.0, 1),
                                        cfg.filter);
  const auto onsets = change_detect(filtered, cfg.cd_threshold, cfg.refractory_s);
  REQUIRE(onsets.size() == 1);
  // Oracle: scan each sensor for its first upcrossing and take the earliest interpolated time.
  double expect = 1e300;
  for (const auto& tr : filtered) {
    const auto v = values(tr);
    if (auto i = oracle::first_upcrossing(v, cfg.cd_threshold)) {
      expect = std::min(expect, oracle::crossing_time(v, cfg.cd_threshold, *i, tr.t0(), tr.sample_rate()));
    }
  }
  CHECK(onsets[0] == doctest::Approx(expect).epsilon(1e-12));

  // The slow corner keeps the first pulse above threshold for seconds; the plume filter lets it fall back.
  const auto plume = FrontEndConfig::plume_defaults();
  const auto two = bandpass_filter(two_peak_plume(0.0, 3.0, 1.0, 1.0), plume.filter);
  CHECK(change_detect(two, plume.cd_threshold, 2.5).size() == 2);
  CHECK(change_detect(two, plume.cd_threshold, 3.5).size() == 1);
}

TEST_CASE("single C1 pulse: one record, every sensor fires inside Q_out") {
  const auto cfg = FrontEndConfig::single_pulse_defaults();
  const auto recs = simulate_front_end(synth_single_pulse(GasLabel::eb(), ConcentrationLevel::from_index(1), 0.0, 1), cfg);
  REQUIRE(recs.size() == 1);
  const auto& r = recs[0];
  CHECK(r.trigger.offset);
  CHECK(*r.trigger.offset - r.trigger.onset == doctest::Approx(cfg.trigger_duration_s));
  REQUIRE(r.sensors.size() == 3);
  for (const auto& ev : r.sensors) {
    REQUIRE(ev.sd);
    CHECK(r.trigger.contains(*ev.sd));
    REQUIRE(ev.delta_t_s);
    CHECK(*ev.delta_t_s > 0.0);
    CHECK(*ev.inv_delta_t == doctest::Approx(1.0 / *ev.delta_t_s));
    CHECK(r.trigger.onset <= ev.sd->onset);
    CHECK(ev.sd->onset < *r.trigger.offset);
  }
}

TEST_CASE("inverse latency rises strictly with concentration for every sensor") {
  const auto cfg = FrontEndConfig::single_pulse_defaults();
  for (const auto& gas : GasLabel::known()) {
    std::vector<double> prev(3, 0.0);
    for (int level = 1; level <= 5; ++level) {
      const auto recs = simulate_front_end(synth_single_pulse(gas, ConcentrationLevel::from_index(level), 0.0, 1), cfg);
      REQUIRE(recs.size() == 1);
      for (std::size_t k = 0; k < 3; ++k) {
        REQUIRE(recs[0].sensors[k].inv_delta_t);
        CHECK(*recs[0].sensors[k].inv_delta_t > prev[k]);
        prev[k] = *recs[0].sensors[k].inv_delta_t;
      }
    }
  }
}

TEST_CASE("two-peak plume: two records near the rise onsets") {
  const auto cfg = FrontEndConfig::plume_defaults();
  // Drives rise at 0.0 s and 2.7 s; sensor maxima land near 0.8 s and 3.5 s.
  const auto raw = two_peak_plume(0.0, 2.7, 0.8, 0.8);
  const auto recs = simulate_front_end(raw, cfg);
  REQUIRE(recs.size() == 2);
  // The undershoot after the first peak delays the second crossing slightly.
  CHECK(recs[0].trigger.onset >= 0.0);
  CHECK(recs[0].trigger.onset <= 0.1);
  CHECK(recs[1].trigger.onset >= 2.7);
  CHECK(recs[1].trigger.onset <= 3.0);
  CHECK(*recs[0].trigger.offset <= recs[1].trigger.onset);
  for (const auto& r : recs) {
    for (const auto& ev : r.sensors) {
      REQUIRE(ev.sd);
      // The faster high-pass corner lets SD fall before the timer resets.
      REQUIRE(ev.sd->offset);
      CHECK(*ev.sd->offset < *r.trigger.offset);
    }
  }
}

TEST_CASE("gated SD never outlives Q_out on randomized pulses") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::uniform_real_distribution<double> noise(0.0, 0.01);
  const auto cfg = FrontEndConfig::single_pulse_defaults();
  int violations = 0;
  for (int k = 0; k < 60; ++k) {
    PulseOptions opts;
    opts.timing.pulse_width_s = 0.5 + 2.0 * u(rng);
    const auto gas = GasLabel::known()[static_cast<std::size_t>(k) % 3];
    const auto level = ConcentrationLevel::from_percent(100.0 * u(rng));
    for (const auto& r : simulate_front_end(synth_single_pulse(gas, level, noise(rng), rng(), opts), cfg)) {
      for (const auto& ev : r.sensors) {
        if (ev.sd && !r.trigger.contains(*ev.sd)) ++violations;
      }
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("simulation is deterministic and checks its inputs") {
  const auto cfg = FrontEndConfig::single_pulse_defaults();
  const auto traces = synth_single_pulse(GasLabel::ia(), ConcentrationLevel::from_index(3), 0.01, 17);
  CHECK(simulate_front_end(traces, cfg) == simulate_front_end(traces, cfg));
  TraceSet mixed = traces;
  mixed.push_back(oracle::make_trace(std::vector<double>(10, 0.0)));
  CHECK_THROWS_AS(simulate_front_end(mixed, cfg), Error);
}
