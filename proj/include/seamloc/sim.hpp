#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seamloc/geometry.hpp"
#include "seamloc/signal.hpp"

namespace seamloc {

/// Scripted walk. Each leg between consecutive waypoints is walked in
/// round(length / step_length_true) steps of exactly step_length_true along
/// the leg direction, so the true path ends on the waypoints only when leg
/// lengths are multiples of the step.
struct WalkScript {
  std::vector<Point2> waypoints;
  double cadence = 2.0;            // steps/s
  double step_length_true = 0.75;  // m
  std::vector<DoorAction> door_actions;
  std::vector<Pause> pauses;
  /// Doors referenced by door_actions.
  std::vector<Door> doors;
  Environment initial_environment = Environment::kIndoor;
  std::string group = "default";

  void validate() const;
};

struct NoiseModel {
  double accel_sigma = 0.0;  // m/s^2 per axis
  double gyro_sigma = 0.0;   // rad/s
  double gyro_bias = 0.0;    // rad/s
  double mag_sigma = 0.0;    // microtesla per axis
  std::uint64_t seed = 0;

  static NoiseModel none(std::uint64_t seed = 0) { return {0.0, 0.0, 0.0, 0.0, seed}; }
  /// Smartphone-grade preset used by the benchmark scenarios.
  static NoiseModel calibrated(std::uint64_t seed = 0);
  void validate() const;
};

/// Synthesis constants; shapes follow the recorded door-opening traces.
struct SimConstants {
  static constexpr double kGravity = 9.81;
  static constexpr double kStepAmplitude = 2.0;    // m/s^2
  static constexpr double kJiggleAmplitude = 0.8;  // m/s^2
  static constexpr double kJigglePeriod = 0.4;     // s
  static constexpr double kJiggleDuration = 1.5;   // s
  static constexpr double kFieldHorizontal = 30.0; // microtesla, along +x
  static constexpr double kFieldVertical = 40.0;   // microtesla
  static constexpr double kTruthZoneWidth = 5.0;   // m
};

struct DoorInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  std::string door_id;
};

struct TrueCrossing {
  std::size_t step_index = 0;
  std::string door_id;
  Environment from_env = Environment::kIndoor;
  Environment to_env = Environment::kOutdoor;
};

struct TrueTurnBack {
  std::size_t step_index = 0;  // last step before turning around
  std::string door_id;
};

struct GroundTruth {
  std::string group = "default";
  Pose initial_pose;
  Environment initial_environment = Environment::kIndoor;
  std::vector<Pose> poses;          // after each step
  std::vector<double> step_times;   // trough of each step
  std::vector<Environment> environments;  // after each step
  std::vector<DoorInterval> door_open_intervals;
  std::vector<TrueCrossing> crossings;
  std::vector<TrueTurnBack> turnbacks;

  std::size_t step_count() const { return poses.size(); }
  Point2 final_position() const {
    return poses.empty() ? initial_pose.position : poses.back().position;
  }
};

struct SimResult {
  Trace trace;
  GroundTruth truth;
};

SimResult generate_walk(const WalkScript& script, const NoiseModel& noise,
                        double sample_rate = 100.0);

struct SuiteOptions {
  double turnback_fraction = 0.0;
  double sample_rate = 100.0;
  double cadence = 2.0;
  double step_length_true = 0.75;
};

/// n_trials seeded replays of the plan's "crossing" and "turnback" routes;
/// the first n_trials - round(n_trials * turnback_fraction) are crossings.
std::vector<SimResult> scenario_suite(const FloorPlan& plan, std::size_t n_trials,
                                      const NoiseModel& noise, const SuiteOptions& options = {});

/// Script for one named route of the plan.
WalkScript script_from_route(const FloorPlan& plan, const std::string& route_name);

/// Derives a decorrelated seed for trial `index`.
std::uint64_t trial_seed(std::uint64_t base, std::uint64_t index);

}  // namespace seamloc
