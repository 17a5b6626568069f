#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "seamloc/crossing.hpp"
#include "seamloc/filters.hpp"
#include "seamloc/geometry.hpp"
#include "seamloc/pdr.hpp"
#include "seamloc/signal.hpp"

namespace seamloc {

enum class ActiveFilter { kParticle, kKalman };

std::string_view to_string(ActiveFilter filter);

enum class DivergencePolicy {
  /// Re-seed at the last estimate and retry; if that also fails, take a plain
  /// PDR step and re-seed there (logged as a FilterReset).
  kRecover,
  /// Throw TrackError carrying the step index.
  kFail,
};

struct TrackConfig {
  SignalConfig signal;
  PdrConfig pdr;  // initial_pose is taken from the plan
  PfConfig pf;
  KfConfig kf;
  CrossingConfig crossing;
  std::uint64_t seed = 1;
  DivergencePolicy divergence = DivergencePolicy::kRecover;

  void validate() const;
};

/// Everything the pipeline carries from one step to the next.
struct TrackerState {
  Pose pose;
  Environment environment = Environment::kIndoor;
  ActiveFilter active_filter = ActiveFilter::kParticle;
  CrossingState crossing;
  std::size_t step_count = 0;
  std::optional<ParticleSet> particles;
  std::optional<HeadingKfState> kalman;
};

TrackerState initial_tracker_state(const FloorPlan& plan, const TrackConfig& cfg);

/// Hands tracking over to the back-end of the new environment: particle
/// filter seeded at the crossing point indoors, heading Kalman filter seeded
/// with the current heading outdoors.
TrackerState on_switch(TrackerState tracker, const SwitchEvent& ev, const TrackConfig& cfg);

struct FilterReset {
  std::size_t step_index = 0;
  Point2 position;
};

/// A DoorOpenEvent tagged with the step it is reported at (the first step
/// after it ends; the step count if none follows).
struct DoorOpenRecord {
  DoorOpenEvent event;
  std::size_t step_index = 0;
};

struct LogEntry {
  double t = 0.0;
  std::variant<StepEvent, DoorOpenRecord, SwitchEvent, FilterReset> payload;
};

struct EventLog {
  std::vector<LogEntry> entries;  // time order

  std::vector<SwitchEvent> switches() const;
  std::size_t count_steps() const;
  std::size_t count_door_opens() const;
};

struct TrackResult {
  std::vector<Pose> path;
  std::vector<Environment> environments;  // after each step
  EventLog events;
};

TrackResult track(const Trace& trace, const FloorPlan& plan, const TrackConfig& cfg);

}  // namespace seamloc
