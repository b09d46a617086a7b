#include "enose/decode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "enose/error.hpp"

namespace enose {

std::size_t FeatureVector::present() const {
  return static_cast<std::size_t>(
      std::count_if(inv_delta_t.begin(), inv_delta_t.end(), [](const auto& v) { return v.has_value(); }));
}

std::optional<double> FeatureVector::for_sensor(int sensor_id) const {
  for (std::size_t k = 0; k < sensor_ids.size(); ++k) {
    if (sensor_ids[k] == sensor_id) return inv_delta_t[k];
  }
  return std::nullopt;
}

FeatureVector extract_features(const EventRecord& record) {
  FeatureVector f;
  std::vector<double> present;
  for (const auto& ev : record.sensors) {
    f.sensor_ids.push_back(ev.sensor_id);
    f.inv_delta_t.push_back(ev.inv_delta_t);
    if (ev.inv_delta_t) present.push_back(*ev.inv_delta_t);
  }
  if (present.empty()) throw Error("no feature: no sensor produced an SD pulse");
  // Summing in sorted order makes the result independent of sensor order.
  std::sort(present.begin(), present.end());
  f.summed = std::accumulate(present.begin(), present.end(), 0.0);
  return f;
}

std::string FeatureScope::label() const {
  switch (kind) {
    case Kind::Summed: return "summed";
    case Kind::PerSensor: return "per_sensor";
    case Kind::Sensor: return "sensor:" + std::to_string(sensor_id);
  }
  return "summed";
}

FeatureScope FeatureScope::parse(std::string_view text) {
  if (text == "summed") return summed();
  if (text == "per_sensor") return per_sensor();
  if (text.rfind("sensor:", 0) == 0) return sensor(std::stoi(std::string(text.substr(7))));
  throw Error("unknown feature scope '" + std::string(text) + "'");
}

std::optional<double> FeatureScope::value(const FeatureVector& f) const {
  switch (kind) {
    case Kind::Summed: return f.present() > 0 ? std::optional<double>(f.summed) : std::nullopt;
    case Kind::Sensor: return f.for_sensor(sensor_id);
    case Kind::PerSensor: break;
  }
  throw Error("per_sensor scope has no scalar value");
}

CalibrationCurve::CalibrationCurve(GasLabel gas, FeatureScope scope, std::vector<std::pair<double, double>> knots)
    : gas_(std::move(gas)), scope_(scope), knots_(std::move(knots)) {
  if (scope_.kind == FeatureScope::Kind::PerSensor) throw Error("calibration curves need a scalar scope");
  if (knots_.size() < 2) throw Error("calibration needs at least two knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].first) || !std::isfinite(knots_[i].second)) throw Error("non-finite knot");
    if (i > 0 && !(knots_[i].first > knots_[i - 1].first && knots_[i].second > knots_[i - 1].second)) {
      throw Error("calibration not monotone");
    }
  }
}

double CalibrationCurve::evaluate(double percent) const {
  std::size_t i = 0;
  if (percent >= knots_.back().first) {
    i = knots_.size() - 2;
  } else if (percent > knots_.front().first) {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), percent,
                               [](double p, const auto& k) { return p < k.first; });
    i = static_cast<std::size_t>(std::distance(knots_.begin(), it)) - 1;
  }
  const auto& [p0, v0] = knots_[i];
  const auto& [p1, v1] = knots_[i + 1];
  if (percent == p0) return v0;
  if (percent == p1) return v1;
  return v0 + (percent - p0) * (v1 - v0) / (p1 - p0);
}

ConcentrationEstimate CalibrationCurve::invert(double feature) const {
  if (!std::isfinite(feature)) throw Error("feature must be finite");
  if (feature < knots_.front().second) return {knots_.front().first, true};
  if (feature > knots_.back().second) return {knots_.back().first, true};
  for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
    const auto& [p0, v0] = knots_[i];
    const auto& [p1, v1] = knots_[i + 1];
    if (feature == v0) return {p0, false};
    if (feature < v1) return {p0 + (feature - v0) * (p1 - p0) / (v1 - v0), false};
  }
  return {knots_.back().first, false};
}

CalibrationCurve fit_calibration(std::span<const CalibrationSample> samples, const GasLabel& gas,
                                 const FeatureScope& scope) {
  std::map<double, std::pair<double, std::size_t>> sums;
  for (const auto& s : samples) {
    const auto v = scope.value(s.feature);
    if (!v) continue;
    auto& [sum, n] = sums[s.level.percent];
    sum += *v;
    ++n;
  }
  if (sums.size() < 2) throw Error("calibration needs at least two distinct concentration levels");
  std::vector<std::pair<double, double>> knots;
  for (const auto& [percent, acc] : sums) knots.emplace_back(percent, acc.first / static_cast<double>(acc.second));
  return CalibrationCurve(gas, scope, std::move(knots));
}

ConcentrationEstimate estimate_concentration(const CalibrationCurve& curve, const FeatureVector& feature) {
  const auto v = curve.scope().value(feature);
  if (!v) throw Error("feature lacks the " + curve.scope().label() + " component");
  return curve.invert(*v);
}

std::vector<std::optional<double>> GasModel::components(const FeatureVector& f) const {
  if (scope.kind != FeatureScope::Kind::PerSensor) return {scope.value(f)};
  std::vector<std::optional<double>> out;
  out.reserve(sensor_ids.size());
  for (int id : sensor_ids) out.push_back(f.for_sensor(id));
  return out;
}

GasModel fit_gas_model(std::span<const LabeledFeature> samples, const FeatureScope& scope) {
  GasModel model;
  model.scope = scope;
  if (scope.kind == FeatureScope::Kind::PerSensor) {
    for (const auto& s : samples) {
      for (int id : s.feature.sensor_ids) {
        if (std::find(model.sensor_ids.begin(), model.sensor_ids.end(), id) == model.sensor_ids.end()) {
          model.sensor_ids.push_back(id);
        }
      }
    }
    std::sort(model.sensor_ids.begin(), model.sensor_ids.end());
  }
  const std::size_t dims = scope.kind == FeatureScope::Kind::PerSensor ? model.sensor_ids.size() : 1;
  if (dims == 0) throw Error("gas model needs at least one feature component");

  struct Acc {
    std::vector<double> sum, sumsq;
    std::vector<std::size_t> n;
    std::size_t count = 0;
  };
  std::map<GasLabel, Acc> per_gas;
  std::vector<double> all_sum(dims, 0.0), all_sumsq(dims, 0.0);
  std::vector<std::size_t> all_n(dims, 0);
  for (const auto& s : samples) {
    auto& acc = per_gas[s.gas];
    if (acc.sum.empty()) {
      acc.sum.assign(dims, 0.0);
      acc.sumsq.assign(dims, 0.0);
      acc.n.assign(dims, 0);
    }
    ++acc.count;
    const auto comps = model.components(s.feature);
    for (std::size_t d = 0; d < dims; ++d) {
      if (!comps[d]) continue;
      const double v = *comps[d];
      acc.sum[d] += v;
      acc.sumsq[d] += v * v;
      ++acc.n[d];
      all_sum[d] += v;
      all_sumsq[d] += v * v;
      ++all_n[d];
    }
  }
  if (per_gas.empty()) throw Error("gas model needs training samples");

  auto spread = [](double sum, double sumsq, std::size_t n) {
    if (n == 0) return 0.0;
    const double mean = sum / static_cast<double>(n);
    return std::sqrt(std::max(0.0, sumsq / static_cast<double>(n) - mean * mean));
  };

  model.scale.resize(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    const double sd = spread(all_sum[d], all_sumsq[d], all_n[d]);
    // A component with no spread carries no scale information; leave it in raw units.
    model.scale[d] = sd > 0.0 ? sd : 1.0;
  }

  for (const auto& [gas, acc] : per_gas) {
    if (acc.count < 2) throw Error("gas model needs at least two samples for " + gas.name());
    GasModel::Centroid c;
    c.count = acc.count;
    for (std::size_t d = 0; d < dims; ++d) {
      if (acc.n[d] == 0) throw Error("gas " + gas.name() + " has no value for component " + std::to_string(d + 1));
      c.mean.push_back(acc.sum[d] / static_cast<double>(acc.n[d]));
      c.dispersion.push_back(spread(acc.sum[d], acc.sumsq[d], acc.n[d]));
    }
    model.centroids.emplace(gas, std::move(c));
  }
  return model;
}

GasDecision classify_gas(const GasModel& model, const FeatureVector& feature) {
  if (!model.fitted()) throw Error("gas model is not fitted");
  const auto comps = model.components(feature);
  if (std::none_of(comps.begin(), comps.end(), [](const auto& v) { return v.has_value(); })) {
    throw Error("feature has none of the model's components");
  }

  GasDecision out;
  for (const auto& [gas, c] : model.centroids) {
    double sq = 0.0;
    for (std::size_t d = 0; d < comps.size(); ++d) {
      if (!comps[d]) continue;
      const double z = (*comps[d] - c.mean[d]) / model.scale[d];
      sq += z * z;
    }
    out.distances.emplace_back(gas, std::sqrt(sq));
  }
  // Distances are in label order already, so the first minimum wins ties.
  auto best = out.distances.begin();
  for (auto it = out.distances.begin(); it != out.distances.end(); ++it) {
    if (it->second < best->second) best = it;
  }
  out.gas = best->first;
  out.distance = best->second;
  const double tol = 1e-12 * std::max(1.0, best->second);
  for (auto it = out.distances.begin(); it != out.distances.end(); ++it) {
    if (it != best && std::abs(it->second - best->second) <= tol) out.ambiguous = true;
  }
  return out;
}

}  // namespace enose
