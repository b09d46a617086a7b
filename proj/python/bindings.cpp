#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "enose/bouts.hpp"
#include "enose/config.hpp"
#include "enose/decode.hpp"
#include "enose/error.hpp"
#include "enose/filters.hpp"
#include "enose/frontend.hpp"
#include "enose/pipeline.hpp"
#include "enose/synth.hpp"

namespace py = pybind11;
using namespace enose;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

FilterSpec make_spec(double f_low, double f_high, const std::string& topology) {
  FilterSpec spec{f_low, f_high, parse_filter_topology(topology)};
  spec.validate();
  return spec;
}

TraceSet synth_pulse(const std::string& gas, const std::string& level, double noise, std::uint64_t seed,
                     double pulse_width) {
  PulseOptions opts;
  opts.timing.pulse_width_s = pulse_width;
  return synth_single_pulse(GasLabel(gas), ConcentrationLevel::parse(level), noise, seed, opts);
}

TraceSet synth_plume_py(std::vector<double> times, std::vector<double> values, const std::string& gas,
                        std::uint64_t seed, double noise, std::optional<double> t0,
                        std::optional<double> duration) {
  PlumeOptions opts;
  opts.noise_sigma = noise;
  opts.t0 = t0;
  opts.duration_s = duration;
  return synth_plume(StimulusProfile(std::move(times), std::move(values)), GasLabel(gas), seed, opts);
}

FrontEndConfig frontend_for(const std::string& variant) { return FrontEndConfig::defaults_for(parse_variant(variant)); }

py::dict pipeline_py(const std::filesystem::path& out_dir, std::optional<std::filesystem::path> input_dir,
                     const std::map<std::string, std::string>& settings, std::vector<std::string> gases,
                     std::vector<int> levels) {
  PipelineRequest req;
  req.config = load_config(std::nullopt, {}, settings);
  req.input_dir = std::move(input_dir);
  req.out_dir = out_dir;
  if (!gases.empty()) {
    req.gases.clear();
    for (auto& g : gases) req.gases.emplace_back(std::move(g));
  }
  if (!levels.empty()) req.levels = std::move(levels);
  const auto res = run_pipeline(req);
  py::dict d;
  d["outputs"] = res.outputs;
  d["events"] = res.events.size();
  d["manifest"] = res.manifest.dump();
  return d;
}

}  // namespace

PYBIND11_MODULE(_enose, m) {
  m.doc() = "Event-based electronic-nose signal chain";
  m.attr("__version__") = kToolVersion;

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<Error>(m, "EnoseError", PyExc_ValueError);

  py::class_<SensorTrace>(m, "SensorTrace")
      .def(py::init([](int sensor_id, double sample_rate, double t0, std::vector<double> samples) {
             return SensorTrace(sensor_id, ChannelKind::Other, sample_rate, t0, std::move(samples));
           }),
           py::arg("sensor_id"), py::arg("sample_rate"), py::arg("t0"), py::arg("samples"))
      .def_property_readonly("sensor_id", &SensorTrace::sensor_id)
      .def_property_readonly("sample_rate", &SensorTrace::sample_rate)
      .def_property_readonly("t0", &SensorTrace::t0)
      .def_property_readonly("name", &SensorTrace::name)
      .def_property_readonly("gas", [](const SensorTrace& t) { return t.meta().gas_primary.name(); })
      .def_property_readonly("samples", [](const SensorTrace& t) { return to_array(t.samples()); })
      .def_property_readonly("times",
                             [](const SensorTrace& t) {
                               std::vector<double> ts(t.size());
                               for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = t.time_at(i);
                               return to_array(ts);
                             })
      .def("__len__", &SensorTrace::size);

  m.def("synth_single_pulse", &synth_pulse, py::arg("gas"), py::arg("level"), py::arg("noise_sigma") = 0.0,
        py::arg("seed") = 1, py::arg("pulse_width_s") = 1.0,
        "Three-sensor response to one square odor pulse at level C1..C5 or a percent.");
  m.def("synth_plume", &synth_plume_py, py::arg("times"), py::arg("values"), py::arg("gas"), py::arg("seed") = 1,
        py::arg("noise_sigma") = 0.0, py::arg("t0") = py::none(), py::arg("duration_s") = py::none(),
        "Three-sensor response to a relative-concentration profile (zero-order hold).");

  m.def(
      "bandpass_filter",
      [](const SensorTrace& t, double f_low, double f_high, const std::string& topology) {
        return bandpass_filter(t, make_spec(f_low, f_high, topology));
      },
      py::arg("trace"), py::arg("f_low_hz"), py::arg("f_high_hz"), py::arg("topology") = "edge_exact");
  m.def(
      "filter_gain",
      [](double f_low, double f_high, double rate, double f, const std::string& topology) {
        return filter_gain(make_spec(f_low, f_high, topology), rate, f);
      },
      py::arg("f_low_hz"), py::arg("f_high_hz"), py::arg("sample_rate"), py::arg("f_hz"),
      py::arg("topology") = "edge_exact");

  py::class_<Bout>(m, "Bout")
      .def_readonly("min_t", &Bout::min_t)
      .def_readonly("max_t", &Bout::max_t)
      .def_readonly("min_value", &Bout::min_value)
      .def_readonly("max_value", &Bout::max_value)
      .def_readonly("min_index", &Bout::min_index)
      .def_readonly("max_index", &Bout::max_index)
      .def_property_readonly("slope", [](const Bout& b) { return bout_slope(b).slope; });
  m.def(
      "locate_largest_bout",
      [](const SensorTrace& t, double start, double end) { return locate_largest_bout(t, Window(start, end)); },
      py::arg("filtered"), py::arg("t_start"), py::arg("t_end"));

  py::class_<Pulse>(m, "Pulse").def_readonly("onset", &Pulse::onset).def_readonly("offset", &Pulse::offset);
  py::class_<SensorEvent>(m, "SensorEvent")
      .def_readonly("sensor_id", &SensorEvent::sensor_id)
      .def_readonly("sd", &SensorEvent::sd)
      .def_readonly("delta_t_s", &SensorEvent::delta_t_s)
      .def_readonly("inv_delta_t", &SensorEvent::inv_delta_t);
  py::class_<EventRecord>(m, "EventRecord")
      .def_readonly("trigger", &EventRecord::trigger)
      .def_readonly("sensors", &EventRecord::sensors);

  m.def(
      "simulate_front_end",
      [](const TraceSet& traces, const std::string& variant) {
        return simulate_front_end(traces, frontend_for(variant));
      },
      py::arg("traces"), py::arg("variant") = "single_pulse_gated");

  py::class_<FeatureVector>(m, "FeatureVector")
      .def_readonly("sensor_ids", &FeatureVector::sensor_ids)
      .def_readonly("inv_delta_t", &FeatureVector::inv_delta_t)
      .def_readonly("summed", &FeatureVector::summed)
      .def("complete", &FeatureVector::complete);
  m.def("extract_features", &extract_features, py::arg("record"));

  py::class_<ConcentrationEstimate>(m, "ConcentrationEstimate")
      .def_readonly("percent", &ConcentrationEstimate::percent)
      .def_readonly("out_of_range", &ConcentrationEstimate::out_of_range);
  py::class_<CalibrationCurve>(m, "CalibrationCurve")
      .def_property_readonly("gas", [](const CalibrationCurve& c) { return c.gas().name(); })
      .def_property_readonly("knots",
                             [](const CalibrationCurve& c) {
                               return std::vector<std::pair<double, double>>(c.knots().begin(), c.knots().end());
                             })
      .def("evaluate", &CalibrationCurve::evaluate, py::arg("percent"))
      .def("invert", &CalibrationCurve::invert, py::arg("feature"))
      .def("estimate", &estimate_concentration, py::arg("features"));
  m.def(
      "fit_calibration",
      [](const std::string& gas, const std::vector<std::pair<double, FeatureVector>>& samples,
         const std::string& scope) {
        std::vector<CalibrationSample> s;
        for (const auto& [pct, f] : samples) s.push_back({ConcentrationLevel::from_percent(pct), f});
        return fit_calibration(s, GasLabel(gas), FeatureScope::parse(scope));
      },
      py::arg("gas"), py::arg("samples"), py::arg("scope") = "summed",
      "samples: (percent, FeatureVector) pairs.");

  py::class_<GasDecision>(m, "GasDecision")
      .def_property_readonly("gas", [](const GasDecision& d) { return d.gas.name(); })
      .def_readonly("distance", &GasDecision::distance)
      .def_readonly("ambiguous", &GasDecision::ambiguous);
  py::class_<GasModel>(m, "GasModel")
      .def_property_readonly("gases",
                             [](const GasModel& g) {
                               std::vector<std::string> out;
                               for (const auto& [k, v] : g.centroids) out.push_back(k.name());
                               return out;
                             })
      .def("classify", &classify_gas, py::arg("features"));
  m.def(
      "fit_gas_model",
      [](const std::vector<std::pair<std::string, FeatureVector>>& samples, const std::string& scope) {
        std::vector<LabeledFeature> s;
        for (const auto& [gas, f] : samples) s.push_back({GasLabel(gas), f});
        return fit_gas_model(s, FeatureScope::parse(scope));
      },
      py::arg("samples"), py::arg("scope") = "per_sensor", "samples: (gas, FeatureVector) pairs.");

  m.def("run_pipeline", &pipeline_py, py::arg("out_dir"), py::arg("input_dir") = py::none(),
        py::arg("settings") = std::map<std::string, std::string>{}, py::arg("gases") = std::vector<std::string>{},
        py::arg("levels") = std::vector<int>{},
        "Full chain on a CSV directory or a synthetic battery; writes outputs and a manifest to out_dir.");
}
