#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seamloc/error.hpp"

namespace seamloc {

/// Geometric tolerance in meters used by every predicate in this module.
inline constexpr double kGeomTol = 1e-9;

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double radians);

/// Point (or displacement) in the local Cartesian frame, meters.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point2, Point2) = default;

  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

/// Directed segment with distinct endpoints.
struct Segment2 {
  Point2 a;
  Point2 b;

  Point2 direction() const { return b - a; }
  Point2 midpoint() const { return 0.5 * (a + b); }
  double length() const { return direction().norm(); }
  /// Throws kInvalidParameter when endpoints coincide or are non-finite.
  void validate() const;
};

enum class Environment { kIndoor, kOutdoor };

std::string_view to_string(Environment env);
/// Parses "indoor" / "outdoor"; throws kParse otherwise.
Environment parse_environment(std::string_view label);

/// A door in a wall. `inner_env` lies on the left of `tangent` (the side of
/// the normal rotated +90 degrees from the tangent), `outer_env` on the right.
struct Door {
  std::string id;
  Point2 center;
  Point2 tangent{1.0, 0.0};
  Environment inner_env = Environment::kIndoor;
  Environment outer_env = Environment::kOutdoor;

  /// Unit normal pointing into the inner side.
  Point2 normal() const { return {-tangent.y, tangent.x}; }
  /// Environment across the door from `env`.
  Environment other_side(Environment env) const {
    return env == inner_env ? outer_env : inner_env;
  }
  void validate() const;
};

struct CrossingZone {
  std::string door_id;
  Segment2 segment;
};

/// Position plus heading, counterclockwise from +x, wrapped to (-pi, pi].
struct Pose {
  Point2 position;
  double heading = 0.0;
};

enum class DoorActionKind { kOpenAndCross, kApproachAndTurnBack };

std::string_view to_string(DoorActionKind kind);
DoorActionKind parse_door_action(std::string_view name);

/// What the walker does at a waypoint next to a door.
struct DoorAction {
  std::size_t waypoint = 0;
  std::string door_id;
  DoorActionKind action = DoorActionKind::kOpenAndCross;
  /// Turn-back only: the walker touches the door, producing the jiggle.
  bool touches_door = false;
};

struct Pause {
  std::size_t waypoint = 0;
  double seconds = 0.0;
};

/// A walkable path annotated on a plan, replayed by the simulator.
struct Route {
  std::vector<Point2> waypoints;
  std::vector<DoorAction> door_actions;
  std::vector<Pause> pauses;
};

/// Wall segments, door annotations and the start annotation. Doorways are
/// gaps in the wall list.
struct FloorPlan {
  std::vector<Segment2> walls;
  std::vector<Door> doors;
  Pose initial_pose;
  Environment initial_environment = Environment::kIndoor;
  /// Named routes, e.g. "crossing" and "turnback".
  std::map<std::string, Route> routes;

  const Door* find_door(std::string_view id) const;
  /// Checks walls, doors (unique ids) and routes.
  void validate() const;
};

/// Intersection of two segments via the closed-form line-line formula,
/// restricted to points lying on both segments (inclusive, kGeomTol).
/// Parallel and collinear inputs yield nothing.
std::optional<Point2> segment_intersection(const Segment2& l1, const Segment2& l2);

/// Zone segment of the given width centred on the door along its wall.
CrossingZone zone_for_door(const Door& door, double width);

/// Closed disc membership around the door centre.
bool in_crossing_area(Point2 p, const Door& door, double radius);

bool segment_hits_walls(const Segment2& path_seg, std::span<const Segment2> walls);
bool segment_hits_walls(const Segment2& path_seg, const FloorPlan& plan);

}  // namespace seamloc
