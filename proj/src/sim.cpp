#include "seamloc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace seamloc {

NoiseModel NoiseModel::calibrated(std::uint64_t seed) {
  NoiseModel noise;
  noise.accel_sigma = 0.05;
  noise.gyro_sigma = 0.01;
  noise.gyro_bias = 0.002;
  noise.mag_sigma = 3.0;
  noise.seed = seed;
  return noise;
}

void NoiseModel::validate() const {
  if (!(accel_sigma >= 0.0) || !(gyro_sigma >= 0.0) || !(mag_sigma >= 0.0) ||
      !std::isfinite(gyro_bias)) {
    fail(ErrorCategory::kInvalidParameter, "noise sigmas must be non-negative");
  }
}

void WalkScript::validate() const {
  if (waypoints.size() < 2) fail(ErrorCategory::kInvalidScript, "script needs >= 2 waypoints");
  if (!(cadence > 0.0)) fail(ErrorCategory::kInvalidScript, "cadence must be positive");
  if (!(step_length_true > 0.0)) fail(ErrorCategory::kInvalidScript, "step length must be positive");
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    if (!waypoints[i].finite()) {
      fail(ErrorCategory::kInvalidScript, "waypoint " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && distance(waypoints[i], waypoints[i - 1]) <= kGeomTol) {
      fail(ErrorCategory::kInvalidScript,
           "waypoints " + std::to_string(i - 1) + " and " + std::to_string(i) + " coincide");
    }
  }
  const std::size_t last = waypoints.size() - 1;
  for (const DoorAction& a : door_actions) {
    const bool cross = a.action == DoorActionKind::kOpenAndCross;
    if (a.waypoint >= last || (!cross && a.waypoint == 0)) {
      fail(ErrorCategory::kInvalidScript,
           "door action at waypoint " + std::to_string(a.waypoint) + " has no leg to act on");
    }
    const bool known = std::any_of(doors.begin(), doors.end(),
                                   [&](const Door& d) { return d.id == a.door_id; });
    if (!known) fail(ErrorCategory::kInvalidScript, "door action names unknown door " + a.door_id);
  }
  for (const Pause& p : pauses) {
    if (p.waypoint > last || !(p.seconds >= 0.0)) {
      fail(ErrorCategory::kInvalidScript, "pause is out of range");
    }
  }
}

namespace {

enum class Activity { kStep, kJiggle, kStill };

struct Interval {
  double t0 = 0.0;
  double t1 = 0.0;
  Activity kind = Activity::kStill;
};

struct Turn {
  double t0 = 0.0;
  double t1 = 0.0;
  double delta = 0.0;
};

double heading_of(Point2 d) { return std::atan2(d.y, d.x); }

const Door& door_by_id(const WalkScript& script, const std::string& id) {
  return *std::find_if(script.doors.begin(), script.doors.end(),
                       [&](const Door& d) { return d.id == id; });
}

double true_accel(const Interval& iv, double t, double step_period) {
  switch (iv.kind) {
    case Activity::kStep:
      return SimConstants::kStepAmplitude * std::sin(2.0 * kPi * (t - iv.t0) / step_period);
    case Activity::kJiggle:
      return SimConstants::kJiggleAmplitude *
             std::sin(2.0 * kPi * (t - iv.t0) / SimConstants::kJigglePeriod);
    case Activity::kStill:
      return 0.0;
  }
  return 0.0;
}

}  // namespace

SimResult generate_walk(const WalkScript& script, const NoiseModel& noise, double sample_rate) {
  script.validate();
  noise.validate();
  if (!(sample_rate >= 20.0)) fail(ErrorCategory::kInvalidParameter, "sample_rate must be >= 20 Hz");

  const double period = 1.0 / script.cadence;
  const double step = script.step_length_true;
  const std::size_t legs = script.waypoints.size() - 1;

  SimResult result;
  GroundTruth& truth = result.truth;
  truth.group = script.group;
  truth.initial_environment = script.initial_environment;
  truth.initial_pose = {script.waypoints[0],
                        heading_of(script.waypoints[1] - script.waypoints[0])};

  std::vector<Interval> timeline;
  std::vector<Turn> turns;
  double t = 0.0;
  Point2 pos = script.waypoints[0];
  Environment env = script.initial_environment;
  double prev_heading = truth.initial_pose.heading;

  auto dwell_at = [&](std::size_t w) {
    double pause = 0.0;
    for (const Pause& p : script.pauses) {
      if (p.waypoint == w) pause += p.seconds;
    }
    if (pause > 0.0) {
      timeline.push_back({t, t + pause, Activity::kStill});
      t += pause;
    }
    for (const DoorAction& a : script.door_actions) {
      const bool jiggle = a.action == DoorActionKind::kOpenAndCross || a.touches_door;
      if (a.waypoint != w || !jiggle) continue;
      timeline.push_back({t, t + SimConstants::kJiggleDuration, Activity::kJiggle});
      truth.door_open_intervals.push_back({t, t + SimConstants::kJiggleDuration, a.door_id});
      t += SimConstants::kJiggleDuration;
    }
  };

  for (std::size_t leg = 0; leg < legs; ++leg) {
    const double arrival = t;
    dwell_at(leg);

    const Point2 delta = script.waypoints[leg + 1] - script.waypoints[leg];
    const double heading = heading_of(delta);
    if (leg > 0) {
      const double turn = wrap_angle(heading - prev_heading);
      // The turn sits strictly between the troughs of the adjacent steps.
      if (turn != 0.0) turns.push_back({arrival - 0.2 * period, t + 0.6 * period, turn});
      for (const DoorAction& a : script.door_actions) {
        if (a.waypoint == leg && a.action == DoorActionKind::kApproachAndTurnBack) {
          truth.turnbacks.push_back({truth.poses.size() - 1, a.door_id});
        }
      }
    }
    prev_heading = heading;

    const auto n_steps = std::max<long>(1, std::lround(delta.norm() / step));
    const Point2 unit = (1.0 / delta.norm()) * delta;
    const std::size_t first_step = truth.poses.size();
    for (long k = 0; k < n_steps; ++k) {
      timeline.push_back({t, t + period, Activity::kStep});
      truth.step_times.push_back(t + 0.75 * period);
      pos = pos + step * unit;
      truth.poses.push_back({pos, heading});
      t += period;
    }

    for (const DoorAction& a : script.door_actions) {
      if (a.waypoint != leg || a.action != DoorActionKind::kOpenAndCross) continue;
      const Door& door = door_by_id(script, a.door_id);
      const CrossingZone zone = zone_for_door(door, SimConstants::kTruthZoneWidth);
      bool found = false;
      for (std::size_t s = first_step; s < truth.poses.size() && !found; ++s) {
        const Point2 from = s == 0 ? truth.initial_pose.position : truth.poses[s - 1].position;
        if (segment_intersection(zone.segment, {from, truth.poses[s].position})) {
          truth.crossings.push_back({s, door.id, env, door.other_side(env)});
          env = door.other_side(env);
          found = true;
        }
      }
      if (!found) {
        fail(ErrorCategory::kInvalidScript,
             "leg from waypoint " + std::to_string(leg) + " never crosses door " + door.id);
      }
    }
  }
  dwell_at(legs);

  // Environment after each step, flipping at the true crossings.
  env = script.initial_environment;
  truth.environments.resize(truth.poses.size());
  std::size_t next_crossing = 0;
  for (std::size_t s = 0; s < truth.poses.size(); ++s) {
    if (next_crossing < truth.crossings.size() && truth.crossings[next_crossing].step_index == s) {
      env = truth.crossings[next_crossing++].to_env;
    }
    truth.environments[s] = env;
  }

  const double t_end = t;
  const auto n_samples = static_cast<std::size_t>(std::floor(t_end * sample_rate + 1e-9)) + 1;
  std::vector<double> times(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) times[i] = static_cast<double>(i) / sample_rate;

  // Yaw rate: triangular pulses rescaled so their trapezoidal integral over
  // the sample grid equals the commanded turn.
  std::vector<double> rate(n_samples, 0.0);
  for (const Turn& turn : turns) {
    const double mid = 0.5 * (turn.t0 + turn.t1);
    const double half = 0.5 * (turn.t1 - turn.t0);
    std::vector<double> pulse(n_samples, 0.0);
    for (std::size_t i = 0; i < n_samples; ++i) {
      pulse[i] = std::max(0.0, 1.0 - std::abs(times[i] - mid) / half);
    }
    double area = 0.0;
    for (std::size_t i = 1; i < n_samples; ++i) {
      area += 0.5 * (pulse[i - 1] + pulse[i]) * (times[i] - times[i - 1]);
    }
    for (std::size_t i = 0; i < n_samples; ++i) rate[i] += pulse[i] * (turn.delta / area);
  }

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  auto jitter = [&](double sigma) { return sigma * unit(rng); };

  result.trace.samples.reserve(n_samples);
  double heading = truth.initial_pose.heading;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double ti = times[i];
    if (i > 0) heading = wrap_angle(heading + 0.5 * (rate[i - 1] + rate[i]) * (ti - times[i - 1]));
    while (cursor + 1 < timeline.size() && ti >= timeline[cursor].t1) ++cursor;
    const double a_norm = timeline.empty() ? 0.0 : true_accel(timeline[cursor], ti, period);

    ImuSample s;
    s.t = ti;
    s.accel = {jitter(noise.accel_sigma), jitter(noise.accel_sigma),
               SimConstants::kGravity + a_norm + jitter(noise.accel_sigma)};
    s.gyro = {jitter(noise.gyro_sigma), jitter(noise.gyro_sigma),
              rate[i] + noise.gyro_bias + jitter(noise.gyro_sigma)};
    s.mag = {SimConstants::kFieldHorizontal * std::cos(heading) + jitter(noise.mag_sigma),
             -SimConstants::kFieldHorizontal * std::sin(heading) + jitter(noise.mag_sigma),
             SimConstants::kFieldVertical + jitter(noise.mag_sigma)};
    result.trace.samples.push_back(s);
  }
  return result;
}

WalkScript script_from_route(const FloorPlan& plan, const std::string& route_name) {
  const auto it = plan.routes.find(route_name);
  if (it == plan.routes.end()) {
    fail(ErrorCategory::kInvalidInput, "plan has no route named '" + route_name + "'");
  }
  WalkScript script;
  script.waypoints = it->second.waypoints;
  script.door_actions = it->second.door_actions;
  script.pauses = it->second.pauses;
  script.doors = plan.doors;
  script.initial_environment = plan.initial_environment;
  script.group = route_name;
  return script;
}

std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 over base ^ golden-ratio-scaled index
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<SimResult> scenario_suite(const FloorPlan& plan, std::size_t n_trials,
                                      const NoiseModel& noise, const SuiteOptions& options) {
  if (plan.doors.empty()) fail(ErrorCategory::kInvalidInput, "scenario suite needs a door");
  if (!(options.turnback_fraction >= 0.0 && options.turnback_fraction <= 1.0)) {
    fail(ErrorCategory::kInvalidParameter, "turnback_fraction must lie in [0, 1]");
  }
  const auto n_turnback = static_cast<std::size_t>(
      std::llround(static_cast<double>(n_trials) * options.turnback_fraction));
  const std::size_t n_crossing = n_trials - n_turnback;

  std::vector<SimResult> out;
  out.reserve(n_trials);
  for (std::size_t i = 0; i < n_trials; ++i) {
    WalkScript script = script_from_route(plan, i < n_crossing ? "crossing" : "turnback");
    script.cadence = options.cadence;
    script.step_length_true = options.step_length_true;
    NoiseModel trial_noise = noise;
    trial_noise.seed = trial_seed(noise.seed, i);
    out.push_back(generate_walk(script, trial_noise, options.sample_rate));
  }
  return out;
}

}  // namespace seamloc
