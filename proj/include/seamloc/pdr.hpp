#pragma once

#include <span>
#include <vector>

#include "seamloc/geometry.hpp"
#include "seamloc/signal.hpp"

namespace seamloc {

enum class Axis { kX = 0, kY = 1, kZ = 2 };

struct PdrConfig {
  double step_length = 0.75;
  Pose initial_pose;
  Axis yaw_axis = Axis::kZ;

  void validate() const;
};

double integrate_heading(double heading, double gyro_yaw_rate, double dt);

Pose propagate_step(const Pose& pose, const PdrConfig& cfg);

/// Trapezoidal yaw integrator over a sample stream.
class HeadingIntegrator {
 public:
  HeadingIntegrator(double initial_heading, Axis yaw_axis)
      : heading_(wrap_angle(initial_heading)), axis_(yaw_axis) {}

  /// Advances to `sample`; the first sample only primes the integrator.
  double update(const ImuSample& sample);

  double heading() const { return heading_; }
  void reset(double heading) { heading_ = wrap_angle(heading); }

 private:
  double heading_;
  Axis axis_;
  bool primed_ = false;
  double last_t_ = 0.0;
  double last_rate_ = 0.0;
};

/// Heading at each sample of the trace, trapezoid-integrated from the start.
std::vector<double> integrate_headings(const Trace& trace, double initial_heading, Axis yaw_axis);

/// Heading at time t from per-sample headings (value at the last sample <= t).
double heading_at(const Trace& trace, std::span<const double> headings, double t);

/// Dead-reckoned pose after each step.
std::vector<Pose> run_pdr(const Trace& trace, std::span<const StepEvent> steps,
                          const PdrConfig& cfg);

}  // namespace seamloc
