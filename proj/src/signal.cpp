#include "seamloc/signal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "seamloc/error.hpp"

namespace seamloc {

void Trace::validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ImuSample& s = samples[i];
    bool finite = std::isfinite(s.t);
    for (int k = 0; k < 3; ++k) {
      finite = finite && std::isfinite(s.accel[k]) && std::isfinite(s.gyro[k]) &&
               std::isfinite(s.mag[k]);
    }
    if (!finite) {
      fail(ErrorCategory::kInvariantViolation,
           "components-finite: sample " + std::to_string(i) + " has a non-finite value");
    }
    if (i > 0 && !(s.t > samples[i - 1].t)) {
      fail(ErrorCategory::kInvariantViolation,
           "timestamps-strictly-increasing: sample " + std::to_string(i));
    }
  }
}

void SignalConfig::validate() const {
  if (!(gravity > 0.0)) fail(ErrorCategory::kInvalidParameter, "gravity must be positive");
  if (!(door_hi < step_hi) || !(door_lo > step_lo)) {
    fail(ErrorCategory::kInvalidParameter, "door band must lie inside the step thresholds");
  }
  if (!(door_hi > 0.0) || !(door_lo < 0.0)) {
    fail(ErrorCategory::kInvalidParameter, "door band must straddle zero");
  }
  if (!(step_refractory > 0.0) || !(door_window > 0.0)) {
    fail(ErrorCategory::kInvalidParameter, "detection windows must be positive");
  }
  if (door_min_zero_crossings < 1) {
    fail(ErrorCategory::kInvalidParameter, "door_min_zero_crossings must be >= 1");
  }
  if (smoothing_window < 1) {
    fail(ErrorCategory::kInvalidParameter, "smoothing_window must be >= 1");
  }
}

double normalize_accel(const ImuSample& sample, const SignalConfig& cfg) {
  const auto& a = sample.accel;
  return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]) - cfg.gravity;
}

std::vector<SignalPoint> moving_average(std::span<const SignalPoint> series, int width) {
  if (width < 1) fail(ErrorCategory::kInvalidParameter, "moving-average width must be >= 1");
  std::vector<SignalPoint> out(series.begin(), series.end());
  if (width == 1 || series.empty()) return out;
  const auto n = static_cast<std::ptrdiff_t>(series.size());
  const std::ptrdiff_t before = (width - 1) / 2;
  const std::ptrdiff_t after = width - 1 - before;
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - before);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + after);
    double sum = 0.0;
    for (std::ptrdiff_t k = lo; k <= hi; ++k) sum += series[k].value;
    out[i].value = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<SignalPoint> normalized_series(const Trace& trace, const SignalConfig& cfg) {
  std::vector<SignalPoint> series;
  series.reserve(trace.size());
  for (const ImuSample& s : trace.samples) series.push_back({s.t, normalize_accel(s, cfg)});
  return moving_average(series, cfg.smoothing_window);
}

std::vector<StepEvent> detect_steps(std::span<const SignalPoint> series,
                                    const SignalConfig& cfg) {
  enum class Phase { kWaitHigh, kHigh, kLow };

  std::vector<StepEvent> steps;
  Phase phase = Phase::kWaitHigh;
  double peak = 0.0;
  double trough = 0.0;
  double trough_t = 0.0;
  bool crossed_zero = false;

  auto emit = [&] {
    if (!crossed_zero) return;
    if (!steps.empty() && trough_t - steps.back().t < cfg.step_refractory) return;
    steps.push_back({steps.size(), trough_t, peak});
  };

  for (const SignalPoint& p : series) {
    switch (phase) {
      case Phase::kWaitHigh:
        if (p.value > cfg.step_hi) {
          phase = Phase::kHigh;
          peak = p.value;
          crossed_zero = false;
        }
        break;
      case Phase::kHigh:
        peak = std::max(peak, p.value);
        if (p.value <= 0.0) crossed_zero = true;
        if (p.value < cfg.step_lo) {
          phase = Phase::kLow;
          trough = p.value;
          trough_t = p.t;
        }
        break;
      case Phase::kLow:
        if (p.value < trough) {
          trough = p.value;
          trough_t = p.t;
        }
        if (p.value >= cfg.step_lo) {
          emit();
          phase = Phase::kWaitHigh;
          // A sample may leave the trough straight into the next high lobe.
          if (p.value > cfg.step_hi) {
            phase = Phase::kHigh;
            peak = p.value;
            crossed_zero = false;
          }
        }
        break;
    }
  }
  if (phase == Phase::kLow) emit();
  return steps;
}

namespace {

bool is_zero_crossing(double prev, double cur) {
  return (prev < 0.0) != (cur < 0.0);
}

}  // namespace

int count_zero_crossings(std::span<const SignalPoint> series, double t0, double t1) {
  int count = 0;
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i - 1].t < t0 || series[i].t > t1) continue;
    if (is_zero_crossing(series[i - 1].value, series[i].value)) ++count;
  }
  return count;
}

std::vector<DoorOpenEvent> detect_door_openings(std::span<const SignalPoint> series,
                                                const SignalConfig& cfg,
                                                std::span<const StepEvent> steps) {
  std::vector<DoorOpenEvent> events;
  const std::size_t n = series.size();
  if (n < 2) return events;

  // crossings_before[k] = sign changes between samples (0,1) .. (k-1,k).
  std::vector<int> crossings_before(n, 0);
  for (std::size_t k = 1; k < n; ++k) {
    crossings_before[k] =
        crossings_before[k - 1] + (is_zero_crossing(series[k - 1].value, series[k].value) ? 1 : 0);
  }

  std::vector<double> step_times;
  step_times.reserve(steps.size());
  for (const StepEvent& s : steps) step_times.push_back(s.t);

  std::deque<std::size_t> max_q;  // indices, values decreasing
  std::deque<std::size_t> min_q;  // indices, values increasing
  std::size_t end = 0;            // one past the last sample in the window

  bool open = false;
  DoorOpenEvent current;

  for (std::size_t begin = 0; begin < n; ++begin) {
    const double t_limit = series[begin].t + cfg.door_window;
    if (t_limit > series.back().t + 1e-12) break;  // partial window at the tail
    while (end < n && series[end].t <= t_limit + 1e-12) {
      while (!max_q.empty() && series[max_q.back()].value <= series[end].value) max_q.pop_back();
      max_q.push_back(end);
      while (!min_q.empty() && series[min_q.back()].value >= series[end].value) min_q.pop_back();
      min_q.push_back(end);
      ++end;
    }
    while (max_q.front() < begin) max_q.pop_front();
    while (min_q.front() < begin) min_q.pop_front();

    const double hi = series[max_q.front()].value;
    const double lo = series[min_q.front()].value;
    const std::size_t last = end - 1;
    const double t0 = series[begin].t;
    const double t1 = series[last].t;

    const bool in_band = (hi >= cfg.door_hi || lo <= cfg.door_lo) && hi < cfg.step_hi &&
                         lo > cfg.step_lo;
    const int crossings = crossings_before[last] - crossings_before[begin];
    const auto step_it = std::lower_bound(step_times.begin(), step_times.end(), t0);
    const bool step_inside = step_it != step_times.end() && *step_it <= t1;

    if (in_band && crossings >= cfg.door_min_zero_crossings && !step_inside) {
      if (open && t0 <= current.t_end) {
        current.t_end = std::max(current.t_end, t1);
      } else {
        if (open) events.push_back(current);
        current = {t0, t1, 0};
        open = true;
      }
    }
  }
  if (open) events.push_back(current);

  for (DoorOpenEvent& e : events) {
    e.zero_crossings = count_zero_crossings(series, e.t_start, e.t_end);
  }
  return events;
}

}  // namespace seamloc
