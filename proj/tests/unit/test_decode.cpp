#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "enose/decode.hpp"
#include "enose/error.hpp"
#include "enose/pipeline.hpp"

using namespace enose;

namespace {

EventRecord record_with(const std::vector<std::optional<double>>& delta_t) {
  EventRecord r;
  r.trigger = {0.0, 2.0};
  for (std::size_t k = 0; k < delta_t.size(); ++k) {
    SensorEvent ev;
    ev.sensor_id = static_cast<int>(k) + 1;
    if (delta_t[k]) {
      ev.sd = Pulse{*delta_t[k], 1.5};
      ev.delta_t_s = delta_t[k];
      ev.inv_delta_t = 1.0 / *delta_t[k];
    }
    r.sensors.push_back(ev);
  }
  return r;
}

FeatureVector fv(std::vector<std::optional<double>> inv) {
  FeatureVector f;
  for (std::size_t k = 0; k < inv.size(); ++k) f.sensor_ids.push_back(static_cast<int>(k) + 1);
  f.inv_delta_t = std::move(inv);
  for (const auto& v : f.inv_delta_t) f.summed += v.value_or(0.0);
  return f;
}

FeatureVector synthetic_feature(const GasLabel& gas, int level, double noise, std::uint64_t seed) {
  const auto recs = simulate_front_end(synth_single_pulse(gas, ConcentrationLevel::from_index(level), noise, seed),
                                       FrontEndConfig::single_pulse_defaults());
  REQUIRE(!recs.empty());
  return extract_features(recs.front());
}

}  // namespace

TEST_CASE("features from delta t") {
  const auto f = extract_features(record_with({0.5, 0.25}));
  CHECK(*f.inv_delta_t[0] == 2.0);
  CHECK(*f.inv_delta_t[1] == 4.0);
  CHECK(f.summed == 6.0);
  CHECK(f.complete());

  const auto g = extract_features(record_with({0.5, std::nullopt}));
  CHECK(g.summed == 2.0);
  CHECK_FALSE(g.complete());
  CHECK(g.present() == 1);
  CHECK_FALSE(g.for_sensor(2));

  CHECK_THROWS_WITH_AS(extract_features(record_with({std::nullopt, std::nullopt})), doctest::Contains("no feature"),
                       Error);
}

TEST_CASE("summed feature is permutation invariant and exact") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::optional<double>> dt{u(rng), u(rng), u(rng), u(rng)};
    auto rec = record_with(dt);
    const double base = extract_features(rec).summed;
    std::shuffle(rec.sensors.begin(), rec.sensors.end(), rng);
    CHECK(extract_features(rec).summed == base);
  }
  const auto f = extract_features(record_with({0.5, 0.25, 0.125}));
  CHECK(f.summed == *f.inv_delta_t[0] + *f.inv_delta_t[1] + *f.inv_delta_t[2]);
}

TEST_CASE("feature scopes") {
  for (const auto& s : {FeatureScope::summed(), FeatureScope::per_sensor(), FeatureScope::sensor(2)}) {
    CHECK(FeatureScope::parse(s.label()) == s);
  }
  CHECK_THROWS_AS(FeatureScope::parse("median"), Error);
  CHECK(*FeatureScope::sensor(2).value(fv({1.0, 3.0})) == 3.0);
  CHECK_THROWS_AS(FeatureScope::per_sensor().value(fv({1.0})), Error);
}

TEST_CASE("two-level calibration and inversion") {
  const std::vector<CalibrationSample> samples{{ConcentrationLevel::from_index(1), fv({1.0})},
                                               {ConcentrationLevel::from_index(5), fv({5.0})}};
  const auto curve = fit_calibration(samples, GasLabel::eb(), FeatureScope::summed());
  CHECK(curve.evaluate(60.0) == doctest::Approx(3.0));
  const auto mid = estimate_concentration(curve, fv({3.0}));
  CHECK(mid.percent == doctest::Approx(60.0));
  CHECK_FALSE(mid.out_of_range);
  const auto low = estimate_concentration(curve, fv({0.5}));
  CHECK(low.percent == 20.0);
  CHECK(low.out_of_range);
  const auto high = estimate_concentration(curve, fv({9.0}));
  CHECK(high.percent == 100.0);
  CHECK(high.out_of_range);
  CHECK(curve.evaluate(0.0) == doctest::Approx(0.0));  // end-segment extension
}

TEST_CASE("calibration rejects bad input") {
  const std::vector<CalibrationSample> falling{{ConcentrationLevel::from_index(1), fv({5.0})},
                                               {ConcentrationLevel::from_index(2), fv({1.0})}};
  CHECK_THROWS_WITH_AS(fit_calibration(falling, GasLabel::eb(), FeatureScope::summed()),
                       "calibration not monotone", Error);
  const std::vector<CalibrationSample> single{{ConcentrationLevel::from_index(1), fv({5.0})}};
  CHECK_THROWS_AS(fit_calibration(single, GasLabel::eb(), FeatureScope::summed()), Error);
  CHECK_THROWS_AS(CalibrationCurve(GasLabel::eb(), FeatureScope::per_sensor(), {{20, 1}, {40, 2}}), Error);
  const CalibrationCurve curve(GasLabel::eb(), FeatureScope::sensor(3), {{20, 1}, {40, 2}});
  CHECK_THROWS_AS(estimate_concentration(curve, fv({1.0, 1.0})), Error);
}

TEST_CASE("noiseless synthetic calibration round trips exactly at the knots") {
  for (const auto& gas : GasLabel::known()) {
    std::vector<CalibrationSample> samples;
    std::vector<FeatureVector> features;
    for (int level = 1; level <= 5; ++level) {
      features.push_back(synthetic_feature(gas, level, 0.0, 1));
      samples.push_back({ConcentrationLevel::from_index(level), features.back()});
    }
    for (const auto& scope : {FeatureScope::summed(), FeatureScope::sensor(1), FeatureScope::sensor(2),
                              FeatureScope::sensor(3)}) {
      const auto curve = fit_calibration(samples, gas, scope);
      for (std::size_t i = 1; i < curve.knots().size(); ++i) CHECK(curve.knots()[i].second > curve.knots()[i - 1].second);
      for (int level = 1; level <= 5; ++level) {
        const auto est = estimate_concentration(curve, features[static_cast<std::size_t>(level - 1)]);
        CHECK(est.percent == 20.0 * level);
        CHECK(std::abs(est.percent - 20.0 * level) <= 1.0);
        CHECK_FALSE(est.out_of_range);
      }
    }
  }
}

TEST_CASE("recovery error shrinks as noise falls") {
  const auto gas = GasLabel::eu();
  std::vector<CalibrationSample> samples;
  for (int level = 1; level <= 5; ++level) samples.push_back({ConcentrationLevel::from_index(level), synthetic_feature(gas, level, 0.0, 1)});
  const auto curve = fit_calibration(samples, gas, FeatureScope::summed());
  std::vector<double> errors;
  for (double noise : {0.004, 0.001, 0.0}) {
    double total = 0.0;
    int n = 0;
    for (int level = 1; level <= 5; ++level) {
      for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        total += std::abs(estimate_concentration(curve, synthetic_feature(gas, level, noise, seed)).percent - 20.0 * level);
        ++n;
      }
    }
    errors.push_back(total / n);
  }
  CHECK(errors[0] > errors[1]);
  CHECK(errors[1] > errors[2]);
  CHECK(errors[2] <= 1.0);
}

TEST_CASE("nearest centroid basics") {
  const std::vector<LabeledFeature> train{{GasLabel::eb(), fv({1.0, 2.0})}, {GasLabel::eb(), fv({1.2, 2.2})},
                                          {GasLabel::eu(), fv({3.0, 0.5})}, {GasLabel::eu(), fv({3.2, 0.7})}};
  const auto model = fit_gas_model(train);
  CHECK(model.fitted());
  const auto at_centroid = classify_gas(model, fv({1.1, 2.1}));
  CHECK(at_centroid.gas == GasLabel::eb());
  CHECK(at_centroid.distance == doctest::Approx(0.0).scale(1.0));
  CHECK(at_centroid.distances.size() == 2);
  CHECK_FALSE(at_centroid.ambiguous);

  const auto tie = classify_gas(model, fv({2.1, 1.35}));
  CHECK(tie.ambiguous);
  CHECK(tie.gas == GasLabel::eb());  // label order

  CHECK_THROWS_AS(classify_gas(GasModel{}, fv({1.0, 1.0})), Error);
  const std::vector<LabeledFeature> one_each{{GasLabel::eb(), fv({1.0})}, {GasLabel::eu(), fv({2.0})}};
  CHECK_THROWS_AS(fit_gas_model(one_each), Error);
}

TEST_CASE("classification argmin is invariant under common rescaling") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 0.3);
  std::vector<LabeledFeature> train;
  const std::vector<std::pair<GasLabel, std::vector<double>>> centers{
      {GasLabel::eb(), {5, 2, 3}}, {GasLabel::eu(), {3, 5, 1.5}}, {GasLabel::ia(), {4, 1.5, 4}}};
  for (const auto& [gas, c] : centers) {
    for (int i = 0; i < 10; ++i) train.push_back({gas, fv({c[0] + g(rng), c[1] + g(rng), c[2] + g(rng)})});
  }
  const auto model = fit_gas_model(train);
  for (double k : {0.01, 3.0, 250.0}) {
    std::vector<LabeledFeature> scaled = train;
    for (auto& s : scaled) {
      for (auto& v : s.feature.inv_delta_t) *v *= k;
      s.feature.summed *= k;
    }
    const auto model_k = fit_gas_model(scaled);
    for (int q = 0; q < 50; ++q) {
      auto probe = fv({3 + 2 * std::abs(g(rng)) * 3, 1.5 + std::abs(g(rng)) * 10, 1.5 + std::abs(g(rng)) * 8});
      auto probe_k = probe;
      for (auto& v : probe_k.inv_delta_t) *v *= k;
      CHECK(classify_gas(model, probe).gas == classify_gas(model_k, probe_k).gas);
    }
  }
}

TEST_CASE("three synthetic gases at C5 are recognized") {
  std::vector<LabeledFeature> train;
  for (const auto& gas : GasLabel::known()) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) train.push_back({gas, synthetic_feature(gas, 5, 0.0, seed)});
  }
  const auto model = fit_gas_model(train);
  for (const auto& gas : GasLabel::known()) {
    for (std::uint64_t seed = 100; seed < 103; ++seed) {
      CHECK(classify_gas(model, synthetic_feature(gas, 5, 0.0, seed)).gas == gas);
    }
  }
}
