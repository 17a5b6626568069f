#include "seamloc/pdr.hpp"

#include <algorithm>
#include <cmath>

namespace seamloc {

void PdrConfig::validate() const {
  if (!(step_length > 0.0) || !std::isfinite(step_length)) {
    fail(ErrorCategory::kInvalidParameter, "step_length must be positive");
  }
  if (!initial_pose.position.finite() || !std::isfinite(initial_pose.heading)) {
    fail(ErrorCategory::kInvalidParameter, "initial pose must be finite");
  }
}

double integrate_heading(double heading, double gyro_yaw_rate, double dt) {
  if (!(dt > 0.0)) fail(ErrorCategory::kInvalidParameter, "dt must be positive");
  return wrap_angle(heading + gyro_yaw_rate * dt);
}

Pose propagate_step(const Pose& pose, const PdrConfig& cfg) {
  return {pose.position + cfg.step_length * Point2{std::cos(pose.heading), std::sin(pose.heading)},
          pose.heading};
}

double HeadingIntegrator::update(const ImuSample& sample) {
  const double rate = sample.gyro[static_cast<int>(axis_)];
  if (primed_) {
    const double dt = sample.t - last_t_;
    heading_ = integrate_heading(heading_, 0.5 * (last_rate_ + rate), dt);
  }
  primed_ = true;
  last_t_ = sample.t;
  last_rate_ = rate;
  return heading_;
}

std::vector<double> integrate_headings(const Trace& trace, double initial_heading,
                                       Axis yaw_axis) {
  HeadingIntegrator integrator(initial_heading, yaw_axis);
  std::vector<double> headings;
  headings.reserve(trace.size());
  for (const ImuSample& s : trace.samples) headings.push_back(integrator.update(s));
  return headings;
}

double heading_at(const Trace& trace, std::span<const double> headings, double t) {
  const auto it = std::upper_bound(trace.samples.begin(), trace.samples.end(), t,
                                   [](double v, const ImuSample& s) { return v < s.t; });
  if (it == trace.samples.begin()) return headings.empty() ? 0.0 : headings.front();
  return headings[static_cast<std::size_t>(it - trace.samples.begin()) - 1];
}

std::vector<Pose> run_pdr(const Trace& trace, std::span<const StepEvent> steps,
                          const PdrConfig& cfg) {
  cfg.validate();
  const std::vector<double> headings =
      integrate_headings(trace, cfg.initial_pose.heading, cfg.yaw_axis);
  std::vector<Pose> path;
  path.reserve(steps.size());
  Pose pose = cfg.initial_pose;
  for (const StepEvent& step : steps) {
    pose.heading = heading_at(trace, headings, step.t);
    pose = propagate_step(pose, cfg);
    path.push_back(pose);
  }
  return path;
}

}  // namespace seamloc
