#include "enose/bouts.hpp"

#include <algorithm>
#include <cmath>

#include "enose/error.hpp"
#include "enose/io.hpp"

namespace enose {

Window::Window(double start, double end) : t_start(start), t_end(end) {
  if (!std::isfinite(start) || !std::isfinite(end) || !(start < end)) {
    throw Error("window needs t_start < t_end");
  }
}

std::pair<std::size_t, std::size_t> window_indices(const SensorTrace& trace, const Window& window) {
  if (!(window.t_start < window.t_end)) throw Error("window needs t_start < t_end");
  const double rate = trace.sample_rate();
  const double n = static_cast<double>(trace.size());
  // Slack of a millionth of a sample absorbs rounding in t0 + i / rate.
  const double lo = std::ceil((window.t_start - trace.t0()) * rate - 1e-6);
  const double hi = std::floor((window.t_end - trace.t0()) * rate + 1e-6);
  if (hi < 0.0 || lo > n - 1.0 || lo > hi) {
    throw Error("window [" + format_double(window.t_start) + ", " + format_double(window.t_end) +
                "] lies outside the trace");
  }
  return {static_cast<std::size_t>(std::max(lo, 0.0)), static_cast<std::size_t>(std::min(hi, n - 1.0))};
}

Bout locate_largest_bout(const SensorTrace& filtered, const Window& window) {
  const auto [first, last] = window_indices(filtered, window);
  const auto x = filtered.samples();

  std::size_t imax = first;
  for (std::size_t i = first + 1; i <= last; ++i) {
    if (x[i] > x[imax]) imax = i;
  }
  if (imax == first) throw Error("no bout found in window");

  std::size_t imin = first;
  for (std::size_t i = first + 1; i < imax; ++i) {
    if (x[i] < x[imin]) imin = i;
  }

  Bout b;
  b.min_index = imin;
  b.max_index = imax;
  b.min_t = filtered.time_at(imin);
  b.max_t = filtered.time_at(imax);
  b.min_value = x[imin];
  b.max_value = x[imax];
  return b;
}

BoutSlope bout_slope(const Bout& bout) {
  const double duration = bout.max_t - bout.min_t;
  if (duration == 0.0) throw Error("degenerate bout: max_t equals min_t");
  if (!(duration > 0.0) || !(bout.max_value > bout.min_value)) throw Error("bout is not a rising edge");
  return {(bout.max_value - bout.min_value) / duration, bout};
}

double exposure_measure(const SensorTrace& trace, const Window& window) {
  if (!(window.t_start < window.t_end)) throw Error("window needs t_start < t_end");
  const double a = std::max(window.t_start, trace.t0());
  const double b = std::min(window.t_end, trace.t_end());
  if (!(a < b)) throw Error("window lies outside the trace");

  const auto x = trace.samples();
  const double rate = trace.sample_rate();
  auto value_at = [&](double t) {
    const double pos = (t - trace.t0()) * rate;
    auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(x.size() - 2)));
    const double frac = pos - static_cast<double>(i);
    return x[i] + frac * (x[i + 1] - x[i]);
  };

  // Interior knots are the samples strictly inside (a, b).
  const auto first = static_cast<std::size_t>(std::floor((a - trace.t0()) * rate)) + 1;
  double area = 0.0;
  double t_prev = a;
  double v_prev = value_at(a);
  for (std::size_t i = first; i < x.size(); ++i) {
    const double t = trace.time_at(i);
    if (t >= b) break;
    if (t <= t_prev) continue;
    area += 0.5 * (v_prev + x[i]) * (t - t_prev);
    t_prev = t;
    v_prev = x[i];
  }
  area += 0.5 * (v_prev + value_at(b)) * (b - t_prev);
  return area;
}

}  // namespace enose
