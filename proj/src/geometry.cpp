#include "seamloc/geometry.hpp"

#include <algorithm>

namespace seamloc {

double wrap_angle(double radians) {
  double wrapped = std::remainder(radians, 2.0 * kPi);  // [-pi, pi]
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

void Segment2::validate() const {
  if (!a.finite() || !b.finite()) {
    fail(ErrorCategory::kInvalidParameter, "segment endpoint is not finite");
  }
  if (a == b) {
    fail(ErrorCategory::kInvalidParameter, "segment has zero length");
  }
}

std::string_view to_string(Environment env) {
  return env == Environment::kIndoor ? "indoor" : "outdoor";
}

Environment parse_environment(std::string_view label) {
  if (label == "indoor") return Environment::kIndoor;
  if (label == "outdoor") return Environment::kOutdoor;
  fail(ErrorCategory::kParse, "unknown environment label '" + std::string(label) + "'");
}

void Door::validate() const {
  if (!center.finite()) {
    fail(ErrorCategory::kInvariantViolation, "door " + id + ": centre is not finite");
  }
  if (std::abs(tangent.norm() - 1.0) > 1e-9) {
    fail(ErrorCategory::kInvariantViolation, "door " + id + ": tangent is not a unit vector");
  }
  if (inner_env == outer_env) {
    fail(ErrorCategory::kInvariantViolation, "door " + id + ": inner_env equals outer_env");
  }
}

std::string_view to_string(DoorActionKind kind) {
  return kind == DoorActionKind::kOpenAndCross ? "open-and-cross" : "approach-and-turn-back";
}

DoorActionKind parse_door_action(std::string_view name) {
  if (name == "open-and-cross") return DoorActionKind::kOpenAndCross;
  if (name == "approach-and-turn-back") return DoorActionKind::kApproachAndTurnBack;
  fail(ErrorCategory::kParse, "unknown door action '" + std::string(name) + "'");
}

const Door* FloorPlan::find_door(std::string_view id) const {
  auto it = std::find_if(doors.begin(), doors.end(),
                         [&](const Door& d) { return d.id == id; });
  return it == doors.end() ? nullptr : &*it;
}

void FloorPlan::validate() const {
  for (std::size_t i = 0; i < walls.size(); ++i) {
    if (!walls[i].a.finite() || !walls[i].b.finite() || walls[i].a == walls[i].b) {
      fail(ErrorCategory::kInvariantViolation,
           "wall " + std::to_string(i) + ": segment-positive-length violated");
    }
  }
  for (std::size_t i = 0; i < doors.size(); ++i) {
    doors[i].validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (doors[j].id == doors[i].id) {
        fail(ErrorCategory::kInvariantViolation, "door id '" + doors[i].id + "' is not unique");
      }
    }
  }
  if (!initial_pose.position.finite() || !std::isfinite(initial_pose.heading)) {
    fail(ErrorCategory::kInvariantViolation, "initial pose is not finite");
  }
  for (const auto& [name, route] : routes) {
    if (route.waypoints.size() < 2) {
      fail(ErrorCategory::kInvariantViolation, "route " + name + ": needs >= 2 waypoints");
    }
    for (const DoorAction& action : route.door_actions) {
      if (action.waypoint >= route.waypoints.size()) {
        fail(ErrorCategory::kInvariantViolation, "route " + name + ": door action waypoint out of range");
      }
      if (find_door(action.door_id) == nullptr) {
        fail(ErrorCategory::kInvariantViolation,
             "route " + name + ": unknown door '" + action.door_id + "'");
      }
    }
  }
}

namespace {

// True when p (already on the supporting line) lies within the segment,
// measured as signed distance beyond either endpoint.
bool within_segment(Point2 p, const Segment2& s) {
  const Point2 d = s.direction();
  const double len = d.norm();
  const double along = dot(p - s.a, d) / len;
  return along >= -kGeomTol && along <= len + kGeomTol;
}

}  // namespace

std::optional<Point2> segment_intersection(const Segment2& l1, const Segment2& l2) {
  // Evaluate in a frame centred on the four endpoints: the result is then
  // equivariant under translation and symmetric in (l1, l2).
  const Point2 origin = 0.25 * (l1.a + l1.b + l2.a + l2.b);
  const double x1 = l1.a.x - origin.x, y1 = l1.a.y - origin.y;
  const double x2 = l1.b.x - origin.x, y2 = l1.b.y - origin.y;
  const double x3 = l2.a.x - origin.x, y3 = l2.a.y - origin.y;
  const double x4 = l2.b.x - origin.x, y4 = l2.b.y - origin.y;

  const double denom = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4);
  // Relative test: |denom| = |d1||d2| sin(angle).
  const double scale = l1.length() * l2.length();
  if (std::abs(denom) <= 1e-12 * scale) return std::nullopt;

  const double c12 = x1 * y2 - y1 * x2;
  const double c34 = x3 * y4 - y3 * x4;
  const Point2 local{(c12 * (x3 - x4) - (x1 - x2) * c34) / denom,
                     (c12 * (y3 - y4) - (y1 - y2) * c34) / denom};
  const Point2 p = local + origin;
  if (!within_segment(p, l1) || !within_segment(p, l2)) return std::nullopt;
  return p;
}

CrossingZone zone_for_door(const Door& door, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) {
    fail(ErrorCategory::kInvalidParameter, "crossing zone width must be positive");
  }
  const Point2 half = (0.5 * width) * door.tangent;
  return {door.id, {door.center - half, door.center + half}};
}

bool in_crossing_area(Point2 p, const Door& door, double radius) {
  return distance(p, door.center) <= radius + kGeomTol;
}

bool segment_hits_walls(const Segment2& path_seg, std::span<const Segment2> walls) {
  return std::any_of(walls.begin(), walls.end(), [&](const Segment2& wall) {
    return segment_intersection(path_seg, wall).has_value();
  });
}

bool segment_hits_walls(const Segment2& path_seg, const FloorPlan& plan) {
  return segment_hits_walls(path_seg, std::span<const Segment2>(plan.walls));
}

}  // namespace seamloc
