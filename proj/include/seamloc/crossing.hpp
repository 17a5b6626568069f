#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seamloc/geometry.hpp"
#include "seamloc/pdr.hpp"

namespace seamloc {

struct CrossingConfig {
  double zone_width = 5.0;
  double area_radius = 5.0;
  /// Radius for leaving the armed area; empty means the same as area_radius.
  std::optional<double> exit_radius;
  int coincidence_steps = 5;

  double leave_radius() const { return exit_radius.value_or(area_radius); }
  void validate() const;
};

enum class CrossingPhase { kIdle, kArmed };

struct CrossingRecord {
  std::size_t step_index = 0;
  Point2 point;
};

/// Evidence entry kept in the bounded history (diagnostics only).
struct Evidence {
  enum class Kind { kDoorOpen, kZoneCrossing } kind = Kind::kDoorOpen;
  std::size_t step_index = 0;
};

struct CrossingState {
  CrossingPhase phase = CrossingPhase::kIdle;
  std::optional<std::string> armed_door;
  std::optional<CrossingRecord> last_crossing;
  std::optional<std::size_t> last_door_open;
  Environment environment = Environment::kIndoor;
  std::deque<Evidence> pending_events;

  static constexpr std::size_t kHistoryLimit = 32;

  void clear_evidence();
};

struct SwitchEvent {
  std::size_t step_index = 0;
  std::string door_id;
  Point2 crossing_point;
  Environment from_env = Environment::kIndoor;
  Environment to_env = Environment::kOutdoor;
};

/// Doors with their precomputed crossing zones.
class ZoneIndex {
 public:
  ZoneIndex(std::span<const Door> doors, double zone_width);

  const Door* door(std::string_view id) const;
  const CrossingZone* zone(std::string_view id) const;
  std::span<const Door> doors() const { return doors_; }

 private:
  std::vector<Door> doors_;
  std::vector<CrossingZone> zones_;
};

/// Arms on entering the nearest door's area; disarms (dropping evidence) on
/// leaving it.
CrossingState arm_check(CrossingState state, const Pose& pose, std::span<const Door> doors,
                        const CrossingConfig& cfg);

/// Records this step's evidence and emits a switch when a door opening and a
/// zone crossing lie within coincidence_steps of each other. No-op when idle.
std::pair<CrossingState, std::optional<SwitchEvent>> observe_step(
    CrossingState state, std::size_t step_index, Point2 prev_pos, Point2 cur_pos,
    bool door_opened_now, const CrossingConfig& cfg, const ZoneIndex& zones);

}  // namespace seamloc
