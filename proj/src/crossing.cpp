#include "seamloc/crossing.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace seamloc {

void CrossingConfig::validate() const {
  if (!(zone_width > 0.0) || !(area_radius > 0.0) || coincidence_steps < 1) {
    fail(ErrorCategory::kInvalidParameter, "crossing parameters must be positive");
  }
  if (exit_radius && !(*exit_radius > 0.0)) {
    fail(ErrorCategory::kInvalidParameter, "exit_radius must be positive");
  }
}

void CrossingState::clear_evidence() {
  last_crossing.reset();
  last_door_open.reset();
  pending_events.clear();
}

ZoneIndex::ZoneIndex(std::span<const Door> doors, double zone_width)
    : doors_(doors.begin(), doors.end()) {
  zones_.reserve(doors_.size());
  for (const Door& d : doors_) zones_.push_back(zone_for_door(d, zone_width));
}

const Door* ZoneIndex::door(std::string_view id) const {
  for (const Door& d : doors_) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

const CrossingZone* ZoneIndex::zone(std::string_view id) const {
  for (const CrossingZone& z : zones_) {
    if (z.door_id == id) return &z;
  }
  return nullptr;
}

CrossingState arm_check(CrossingState state, const Pose& pose, std::span<const Door> doors,
                        const CrossingConfig& cfg) {
  if (state.phase == CrossingPhase::kArmed) {
    const auto it = std::find_if(doors.begin(), doors.end(),
                                 [&](const Door& d) { return d.id == *state.armed_door; });
    if (it == doors.end() || !in_crossing_area(pose.position, *it, cfg.leave_radius())) {
      state.phase = CrossingPhase::kIdle;
      state.armed_door.reset();
      state.clear_evidence();
    }
    return state;
  }

  const Door* nearest = nullptr;
  double best = std::numeric_limits<double>::infinity();
  for (const Door& d : doors) {
    const double dist = distance(pose.position, d.center);
    // Strict '<' keeps the earlier door on exact ties.
    if (in_crossing_area(pose.position, d, cfg.area_radius) && dist < best) {
      best = dist;
      nearest = &d;
    }
  }
  if (nearest != nullptr) {
    state.phase = CrossingPhase::kArmed;
    state.armed_door = nearest->id;
    state.clear_evidence();
  }
  return state;
}

namespace {

void remember(CrossingState& state, Evidence::Kind kind, std::size_t step_index) {
  state.pending_events.push_back({kind, step_index});
  while (state.pending_events.size() > CrossingState::kHistoryLimit) {
    state.pending_events.pop_front();
  }
}

std::size_t step_gap(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

std::pair<CrossingState, std::optional<SwitchEvent>> observe_step(
    CrossingState state, std::size_t step_index, Point2 prev_pos, Point2 cur_pos,
    bool door_opened_now, const CrossingConfig& cfg, const ZoneIndex& zones) {
  if (state.phase != CrossingPhase::kArmed) return {std::move(state), std::nullopt};

  const auto window = static_cast<std::size_t>(cfg.coincidence_steps);
  if (state.last_door_open && step_index - *state.last_door_open > window) {
    state.last_door_open.reset();
  }
  if (state.last_crossing && step_index - state.last_crossing->step_index > window) {
    state.last_crossing.reset();
  }

  if (door_opened_now) {
    state.last_door_open = step_index;
    remember(state, Evidence::Kind::kDoorOpen, step_index);
  }

  const Door* door = zones.door(*state.armed_door);
  const CrossingZone* zone = zones.zone(*state.armed_door);
  if (door == nullptr || zone == nullptr) {
    fail(ErrorCategory::kStateInconsistency, "armed door '" + *state.armed_door + "' is unknown");
  }
  if (!(prev_pos == cur_pos)) {
    if (const auto hit = segment_intersection(zone->segment, {prev_pos, cur_pos})) {
      state.last_crossing = CrossingRecord{step_index, *hit};
      remember(state, Evidence::Kind::kZoneCrossing, step_index);
    }
  }

  if (state.last_crossing && state.last_door_open &&
      step_gap(state.last_crossing->step_index, *state.last_door_open) <= window) {
    SwitchEvent ev{step_index, door->id, state.last_crossing->point, state.environment,
                   door->other_side(state.environment)};
    state.environment = ev.to_env;
    state.phase = CrossingPhase::kIdle;
    state.armed_door.reset();
    state.clear_evidence();
    return {std::move(state), std::move(ev)};
  }
  return {std::move(state), std::nullopt};
}

}  // namespace seamloc
