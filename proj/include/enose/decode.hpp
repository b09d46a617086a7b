#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "enose/frontend.hpp"
#include "enose/trace.hpp"

namespace enose {

/// Per-sensor inverse latencies of one event, plus their sum over the
/// sensors that fired.
struct FeatureVector {
  std::vector<int> sensor_ids;
  std::vector<std::optional<double>> inv_delta_t;
  double summed = 0.0;

  std::size_t present() const;
  bool complete() const { return present() == inv_delta_t.size(); }
  std::optional<double> for_sensor(int sensor_id) const;
};

FeatureVector extract_features(const EventRecord& record);

/// Which number of a FeatureVector a curve or model looks at.
struct FeatureScope {
  enum class Kind { Sensor, Summed, PerSensor };
  Kind kind = Kind::Summed;
  int sensor_id = 0;  // Kind::Sensor only

  static FeatureScope sensor(int id) { return {Kind::Sensor, id}; }
  static FeatureScope summed() { return {Kind::Summed, 0}; }
  static FeatureScope per_sensor() { return {Kind::PerSensor, 0}; }

  /// "summed", "per_sensor" or "sensor:<id>".
  std::string label() const;
  static FeatureScope parse(std::string_view text);

  /// Scalar value for Sensor / Summed scopes; nullopt when that sensor is missing.
  std::optional<double> value(const FeatureVector& f) const;
  bool operator==(const FeatureScope&) const = default;
};

struct ConcentrationEstimate {
  double percent = 0.0;
  bool out_of_range = false;
};

/// Monotone piecewise-linear map from concentration percent to feature value.
class CalibrationCurve {
 public:
  /// Knots must be strictly increasing in both percent and feature value.
  CalibrationCurve(GasLabel gas, FeatureScope scope, std::vector<std::pair<double, double>> knots);

  const GasLabel& gas() const noexcept { return gas_; }
  const FeatureScope& scope() const noexcept { return scope_; }
  std::span<const std::pair<double, double>> knots() const noexcept { return knots_; }

  /// Feature value expected at `percent`; linear extension of the end segments outside the knots.
  double evaluate(double percent) const;

  /// Inverse interpolation. Values beyond the knot range clamp to the end
  /// percent and set out_of_range.
  ConcentrationEstimate invert(double feature) const;

 private:
  GasLabel gas_;
  FeatureScope scope_;
  std::vector<std::pair<double, double>> knots_;
};

struct CalibrationSample {
  ConcentrationLevel level;
  FeatureVector feature;
};

/// One knot per distinct level at the mean feature; missing sensors are skipped.
/// Throws "calibration not monotone" unless the means rise strictly with percent.
CalibrationCurve fit_calibration(std::span<const CalibrationSample> samples, const GasLabel& gas,
                                 const FeatureScope& scope);

/// Throws when the feature lacks the component the curve is built on.
ConcentrationEstimate estimate_concentration(const CalibrationCurve& curve, const FeatureVector& feature);

/// Nearest-centroid gas recognizer at one reference concentration.
/// Components are standardized by their spread over the whole training set.
struct GasModel {
  struct Centroid {
    std::vector<double> mean;
    std::vector<double> dispersion;  // per-component standard deviation within the gas
    std::size_t count = 0;
  };

  FeatureScope scope = FeatureScope::per_sensor();
  std::vector<int> sensor_ids;  // component order for PerSensor scope
  std::vector<double> scale;    // standardization divisor per component
  std::map<GasLabel, Centroid> centroids;

  bool fitted() const noexcept { return !centroids.empty(); }
  std::vector<std::optional<double>> components(const FeatureVector& f) const;
};

struct LabeledFeature {
  GasLabel gas;
  FeatureVector feature;
};

/// Needs at least two samples per gas. Scope may be PerSensor, Summed or Sensor.
GasModel fit_gas_model(std::span<const LabeledFeature> samples, const FeatureScope& scope = FeatureScope::per_sensor());

struct GasDecision {
  GasLabel gas;
  double distance = 0.0;
  bool ambiguous = false;  // another gas is equally close; label order decided
  std::vector<std::pair<GasLabel, double>> distances;  // every centroid, label order
};

GasDecision classify_gas(const GasModel& model, const FeatureVector& feature);

}  // namespace enose
