#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace seamloc {

using Vec3 = std::array<double, 3>;

/// One IMU reading. Units: s, m/s^2, rad/s, microtesla.
struct ImuSample {
  double t = 0.0;
  Vec3 accel{};
  Vec3 gyro{};
  Vec3 mag{};

  friend bool operator==(const ImuSample&, const ImuSample&) = default;
};

/// Timestamped IMU stream; timestamps strictly increasing.
struct Trace {
  std::vector<ImuSample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }
  /// Throws kInvariantViolation naming the first broken invariant.
  void validate() const;
};

struct SignalConfig {
  double gravity = 9.81;
  double step_hi = 1.5;
  double step_lo = -1.5;
  double door_hi = 0.5;
  double door_lo = -0.5;
  double step_refractory = 0.3;
  double door_window = 1.5;
  int door_min_zero_crossings = 2;
  /// Moving-average width in samples applied before detection; 1 disables it.
  int smoothing_window = 1;

  void validate() const;
};

/// (t, a_norm) pair.
struct SignalPoint {
  double t = 0.0;
  double value = 0.0;
};

struct StepEvent {
  std::size_t index = 0;
  double t = 0.0;
  double peak = 0.0;
};

struct DoorOpenEvent {
  double t_start = 0.0;
  double t_end = 0.0;
  int zero_crossings = 0;
};

/// Acceleration magnitude minus gravity.
double normalize_accel(const ImuSample& sample, const SignalConfig& cfg);

/// a_norm for every sample, smoothed when cfg.smoothing_window > 1.
std::vector<SignalPoint> normalized_series(const Trace& trace, const SignalConfig& cfg);

/// Centred moving average of the given odd-or-even width (1 = identity).
std::vector<SignalPoint> moving_average(std::span<const SignalPoint> series, int width);

// A step is a rise above step_hi followed by a fall below step_lo (through
// zero). The event is stamped at the trough of the low excursion; events
// closer than step_refractory to the previous one are dropped.
std::vector<StepEvent> detect_steps(std::span<const SignalPoint> series,
                                    const SignalConfig& cfg);

// Door openings: windows of length door_window whose peak |a_norm| sits in
// [door_hi, step_hi), with at least door_min_zero_crossings sign changes and
// no step inside. Overlapping qualifying windows merge.
std::vector<DoorOpenEvent> detect_door_openings(std::span<const SignalPoint> series,
                                                const SignalConfig& cfg,
                                                std::span<const StepEvent> steps);

/// Sign changes between consecutive samples within [t0, t1].
int count_zero_crossings(std::span<const SignalPoint> series, double t0, double t1);

}  // namespace seamloc
