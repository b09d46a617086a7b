#pragma once

#include <cstddef>
#include <utility>

#include "enose/trace.hpp"

namespace enose {

struct Window {
  double t_start = 0.0;
  double t_end = 0.0;

  Window() = default;
  Window(double start, double end);  // throws unless start < end
  bool operator==(const Window&) const = default;
};

/// A rising edge: the window maximum and the lowest point before it.
struct Bout {
  double min_t = 0.0;
  double max_t = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  std::size_t min_index = 0;
  std::size_t max_index = 0;

  double amplitude() const noexcept { return max_value - min_value; }
  double duration() const noexcept { return max_t - min_t; }
  bool operator==(const Bout&) const = default;
};

struct BoutSlope {
  double slope = 0.0;  // signal units per second
  Bout bout;
};

/// Inclusive sample index range [first, last] covered by the window.
/// Throws when the window misses the trace entirely.
std::pair<std::size_t, std::size_t> window_indices(const SensorTrace& trace, const Window& window);

/// Largest bout inside the window. The maximum is window-global; the minimum
/// is searched only between the window start and that maximum. Ties go to the
/// earliest sample. Throws "no bout found" when the maximum is the first
/// sample of the window.
Bout locate_largest_bout(const SensorTrace& filtered, const Window& window);

/// (max_value - min_value) / (max_t - min_t). Degenerate bouts throw.
BoutSlope bout_slope(const Bout& bout);

/// Trapezoidal area of the signal over the window (clipped to the trace),
/// with linear interpolation at window edges that fall between samples.
double exposure_measure(const SensorTrace& trace, const Window& window);

}  // namespace enose
