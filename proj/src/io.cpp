#include "seamloc/io.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace seamloc::io {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::kIo, "cannot write " + path.string());
  out << content;
}

// ---------------------------------------------------------------------------
// CSV helpers
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  return fields;
}

double parse_number(const std::string& text, const std::string& where) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) {
    fail(ErrorCategory::kParse, where + ": '" + text + "' is not a number");
  }
  return value;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

Trace read_trace(std::istream& in, const std::string& source) {
  static const char* kColumns[] = {"t", "ax", "ay", "az", "gx", "gy", "gz", "mx", "my", "mz"};
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCategory::kParse, source + ":1: missing header");
  strip_cr(line);
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (line != kTraceHeader) {
    fail(ErrorCategory::kParse, source + ":1: header must be '" + std::string(kTraceHeader) + "'");
  }
  Trace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    const std::string where = source + ":" + std::to_string(line_no);
    if (fields.size() != 10) {
      fail(ErrorCategory::kParse, where + ": expected 10 fields, got " + std::to_string(fields.size()));
    }
    double v[10];
    for (int i = 0; i < 10; ++i) v[i] = parse_number(fields[i], where + " field " + kColumns[i]);
    trace.samples.push_back({v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]}, {v[7], v[8], v[9]}});
  }
  try {
    trace.validate();
  } catch (const Error& e) {
    fail(ErrorCategory::kInvariantViolation, source + ": " + e.what());
  }
  return trace;
}

void write_trace(std::ostream& out, const Trace& trace) {
  out << kTraceHeader << '\n';
  for (const ImuSample& s : trace.samples) {
    out << format_double(s.t);
    for (const Vec3* v : {&s.accel, &s.gyro, &s.mag}) {
      for (double x : *v) out << ',' << format_double(x);
    }
    out << '\n';
  }
}

Trace load_trace(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::kIo, "cannot open " + path.string());
  return read_trace(in, path.string());
}

void save_trace(const fs::path& path, const Trace& trace) {
  std::ostringstream out;
  write_trace(out, trace);
  write_file(path, out.str());
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

namespace {

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i) {
      if (text[i] == '\n') ++line;
    }
    fail(ErrorCategory::kParse, source + ":" + std::to_string(line) + ": " + e.what());
  }
}

// Typed field access with path diagnostics.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {}

  const json& node() const { return node_; }
  const std::string& path() const { return path_; }

  bool has(const char* key) const { return node_.is_object() && node_.contains(key); }

  Reader at(const char* key) const {
    if (!node_.is_object() || !node_.contains(key)) error(std::string("missing field '") + key + "'");
    return {node_.at(key), path_ + "." + key};
  }

  Reader at(std::size_t i) const { return {node_.at(i), path_ + "[" + std::to_string(i) + "]"}; }

  double number() const {
    if (!node_.is_number()) error("expected a number");
    return node_.get<double>();
  }
  std::string string() const {
    if (!node_.is_string()) error("expected a string");
    return node_.get<std::string>();
  }
  bool boolean() const {
    if (!node_.is_boolean()) error("expected true/false");
    return node_.get<bool>();
  }
  std::size_t index() const {
    if (!node_.is_number_unsigned() && !(node_.is_number_integer() && node_.get<long long>() >= 0)) {
      error("expected a non-negative integer");
    }
    return node_.get<std::size_t>();
  }
  std::size_t array_size() const {
    if (!node_.is_array()) error("expected an array");
    return node_.size();
  }
  Point2 point() const {
    if (!node_.is_array() || node_.size() != 2) error("expected [x, y]");
    return {at(std::size_t{0}).number(), at(std::size_t{1}).number()};
  }
  Environment environment() const {
    try {
      return parse_environment(string());
    } catch (const Error& e) {
      error(e.what());
    }
  }

  /// Rejects keys outside `allowed`.
  void only(std::initializer_list<const char*> allowed) const {
    if (!node_.is_object()) error("expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : node_.items()) {
      if (!ok.contains(key)) error("unknown field '" + key + "'");
    }
  }

  void version() const {
    const double v = at("version").number();
    if (v != kFormatVersion) error("unsupported version " + format_double(v));
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCategory::kParse, path_ + ": " + what);
  }

 private:
  const json& node_;
  std::string path_;
};

json point_json(Point2 p) { return json::array({p.x, p.y}); }

json pose_json(const Pose& pose) {
  return {{"position", point_json(pose.position)}, {"heading", pose.heading}};
}

Pose read_pose(const Reader& r) {
  r.only({"position", "heading"});
  return {r.at("position").point(), r.at("heading").number()};
}

json route_json(const Route& route) {
  json waypoints = json::array();
  for (Point2 p : route.waypoints) waypoints.push_back(point_json(p));
  json actions = json::array();
  for (const DoorAction& a : route.door_actions) {
    actions.push_back({{"waypoint", a.waypoint},
                       {"door", a.door_id},
                       {"action", std::string(to_string(a.action))},
                       {"touches_door", a.touches_door}});
  }
  json pauses = json::array();
  for (const Pause& p : route.pauses) pauses.push_back({{"waypoint", p.waypoint}, {"seconds", p.seconds}});
  return {{"waypoints", waypoints}, {"door_actions", actions}, {"pauses", pauses}};
}

void read_route_parts(const Reader& r, Route& route) {
  const Reader wps = r.at("waypoints");
  for (std::size_t i = 0; i < wps.array_size(); ++i) route.waypoints.push_back(wps.at(i).point());
  if (r.has("door_actions")) {
    const Reader actions = r.at("door_actions");
    for (std::size_t i = 0; i < actions.array_size(); ++i) {
      const Reader a = actions.at(i);
      a.only({"waypoint", "door", "action", "touches_door"});
      DoorAction action;
      action.waypoint = a.at("waypoint").index();
      action.door_id = a.at("door").string();
      try {
        action.action = parse_door_action(a.at("action").string());
      } catch (const Error& e) {
        a.error(e.what());
      }
      if (a.has("touches_door")) action.touches_door = a.at("touches_door").boolean();
      route.door_actions.push_back(action);
    }
  }
  if (r.has("pauses")) {
    const Reader pauses = r.at("pauses");
    for (std::size_t i = 0; i < pauses.array_size(); ++i) {
      const Reader p = pauses.at(i);
      p.only({"waypoint", "seconds"});
      route.pauses.push_back({p.at("waypoint").index(), p.at("seconds").number()});
    }
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Re-labels a library error with the file it came from.
template <typename Fn>
auto with_source(const std::string& source, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.category(), source + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Floor plan
// ---------------------------------------------------------------------------

FloorPlan parse_floorplan(const std::string& text, std::vector<std::string>& warnings,
                          const std::string& source) {
  const json root = parse_json(text, source);
  return with_source(source, [&] {
    const Reader r(root, "plan");
    r.only({"version", "walls", "doors", "initial_pose", "initial_environment", "routes"});
    r.version();
    FloorPlan plan;
    const Reader walls = r.at("walls");
    for (std::size_t i = 0; i < walls.array_size(); ++i) {
      const Reader w = walls.at(i);
      if (w.array_size() != 2) w.error("expected [[x1, y1], [x2, y2]]");
      plan.walls.push_back({w.at(std::size_t{0}).point(), w.at(std::size_t{1}).point()});
    }
    const Reader doors = r.at("doors");
    for (std::size_t i = 0; i < doors.array_size(); ++i) {
      const Reader d = doors.at(i);
      d.only({"id", "center", "tangent", "inner_env", "outer_env"});
      Door door;
      door.id = d.at("id").string();
      door.center = d.at("center").point();
      door.tangent = d.at("tangent").point();
      door.inner_env = d.at("inner_env").environment();
      door.outer_env = d.at("outer_env").environment();
      const double len = door.tangent.norm();
      if (std::abs(len - 1.0) > 1e-9) {
        if (std::abs(len - 1.0) > 1e-6) {
          fail(ErrorCategory::kInvariantViolation,
               "door " + door.id + ": tangent-unit-length violated (|t| = " + format_double(len) + ")");
        }
        door.tangent = (1.0 / len) * door.tangent;
        warnings.push_back(source + ": door " + door.id + ": tangent normalised from length " +
                           format_double(len));
      }
      plan.doors.push_back(door);
    }
    plan.initial_pose = read_pose(r.at("initial_pose"));
    plan.initial_environment = r.at("initial_environment").environment();
    if (r.has("routes")) {
      const Reader routes = r.at("routes");
      if (!routes.node().is_object()) routes.error("expected an object");
      for (const auto& [name, _] : routes.node().items()) {
        const Reader route = routes.at(name.c_str());
        route.only({"waypoints", "door_actions", "pauses"});
        read_route_parts(route, plan.routes[name]);
      }
    }
    plan.validate();
    return plan;
  });
}

std::string dump_floorplan(const FloorPlan& plan) {
  json walls = json::array();
  for (const Segment2& w : plan.walls) walls.push_back({point_json(w.a), point_json(w.b)});
  json doors = json::array();
  for (const Door& d : plan.doors) {
    doors.push_back({{"id", d.id},
                     {"center", point_json(d.center)},
                     {"tangent", point_json(d.tangent)},
                     {"inner_env", std::string(to_string(d.inner_env))},
                     {"outer_env", std::string(to_string(d.outer_env))}});
  }
  json routes = json::object();
  for (const auto& [name, route] : plan.routes) routes[name] = route_json(route);
  const json root = {{"version", kFormatVersion},
                     {"walls", walls},
                     {"doors", doors},
                     {"initial_pose", pose_json(plan.initial_pose)},
                     {"initial_environment", std::string(to_string(plan.initial_environment))},
                     {"routes", routes}};
  return dump(root);
}

FloorPlan load_floorplan(const fs::path& path, std::vector<std::string>& warnings) {
  return parse_floorplan(read_file(path), warnings, path.string());
}

FloorPlan load_floorplan(const fs::path& path) {
  std::vector<std::string> warnings;
  FloorPlan plan = load_floorplan(path, warnings);
  for (const std::string& w : warnings) std::clog << "warning: " << w << '\n';
  return plan;
}

void save_floorplan(const fs::path& path, const FloorPlan& plan) {
  write_file(path, dump_floorplan(plan));
}

// ---------------------------------------------------------------------------
// Radio map
// ---------------------------------------------------------------------------

namespace {

RssMap read_rss(const Reader& r) {
  if (!r.node().is_object()) r.error("expected an object of transmitter -> dBm");
  RssMap rss;
  for (const auto& [id, _] : r.node().items()) rss[id] = r.at(id.c_str()).number();
  return rss;
}

}  // namespace

RadioMap parse_radiomap(const std::string& text, const std::string& source) {
  const json root = parse_json(text, source);
  return with_source(source, [&] {
    const Reader r(root, "radiomap");
    r.only({"version", "transmitters", "fingerprints"});
    r.version();
    RadioMap map;
    const Reader tx = r.at("transmitters");
    for (std::size_t i = 0; i < tx.array_size(); ++i) map.transmitters.push_back(tx.at(i).string());
    const Reader fps = r.at("fingerprints");
    for (std::size_t i = 0; i < fps.array_size(); ++i) {
      const Reader f = fps.at(i);
      f.only({"position", "rss"});
      map.entries.push_back({f.at("position").point(), read_rss(f.at("rss"))});
    }
    map.validate();
    return map;
  });
}

std::string dump_radiomap(const RadioMap& map) {
  json fps = json::array();
  for (const Fingerprint& f : map.entries) {
    json rss = json::object();
    for (const auto& [id, dbm] : f.rss) rss[id] = dbm;
    fps.push_back({{"position", point_json(f.position)}, {"rss", rss}});
  }
  return dump({{"version", kFormatVersion}, {"transmitters", map.transmitters}, {"fingerprints", fps}});
}

RadioMap load_radiomap(const fs::path& path) { return parse_radiomap(read_file(path), path.string()); }

void save_radiomap(const fs::path& path, const RadioMap& map) { write_file(path, dump_radiomap(map)); }

RssMap load_observation(const fs::path& path) {
  const std::string source = path.string();
  const json root = parse_json(read_file(path), source);
  return with_source(source, [&] {
    const Reader r(root, "observation");
    RssMap rss = r.has("rss") ? read_rss(r.at("rss")) : read_rss(r);
    if (rss.empty()) r.error("observation has no transmitters");
    return rss;
  });
}

// ---------------------------------------------------------------------------
// Ground truth
// ---------------------------------------------------------------------------

std::string dump_truth(const GroundTruth& truth) {
  json steps = json::array();
  for (std::size_t i = 0; i < truth.poses.size(); ++i) {
    steps.push_back({{"t", truth.step_times[i]},
                     {"position", point_json(truth.poses[i].position)},
                     {"heading", truth.poses[i].heading},
                     {"env", std::string(to_string(truth.environments[i]))}});
  }
  json doors = json::array();
  for (const DoorInterval& d : truth.door_open_intervals) {
    doors.push_back({{"t_start", d.t_start}, {"t_end", d.t_end}, {"door", d.door_id}});
  }
  json crossings = json::array();
  for (const TrueCrossing& c : truth.crossings) {
    crossings.push_back({{"step", c.step_index},
                         {"door", c.door_id},
                         {"from", std::string(to_string(c.from_env))},
                         {"to", std::string(to_string(c.to_env))}});
  }
  json turnbacks = json::array();
  for (const TrueTurnBack& t : truth.turnbacks) turnbacks.push_back({{"step", t.step_index}, {"door", t.door_id}});
  return dump({{"version", kFormatVersion},
               {"group", truth.group},
               {"initial_pose", pose_json(truth.initial_pose)},
               {"initial_environment", std::string(to_string(truth.initial_environment))},
               {"steps", steps},
               {"door_open_intervals", doors},
               {"crossings", crossings},
               {"turnbacks", turnbacks}});
}

GroundTruth parse_truth(const std::string& text, const std::string& source) {
  const json root = parse_json(text, source);
  return with_source(source, [&] {
    const Reader r(root, "truth");
    r.only({"version", "group", "initial_pose", "initial_environment", "steps",
            "door_open_intervals", "crossings", "turnbacks"});
    r.version();
    GroundTruth truth;
    truth.group = r.at("group").string();
    truth.initial_pose = read_pose(r.at("initial_pose"));
    truth.initial_environment = r.at("initial_environment").environment();
    const Reader steps = r.at("steps");
    for (std::size_t i = 0; i < steps.array_size(); ++i) {
      const Reader s = steps.at(i);
      s.only({"t", "position", "heading", "env"});
      truth.step_times.push_back(s.at("t").number());
      truth.poses.push_back({s.at("position").point(), s.at("heading").number()});
      truth.environments.push_back(s.at("env").environment());
    }
    const Reader doors = r.at("door_open_intervals");
    for (std::size_t i = 0; i < doors.array_size(); ++i) {
      const Reader d = doors.at(i);
      truth.door_open_intervals.push_back(
          {d.at("t_start").number(), d.at("t_end").number(), d.at("door").string()});
    }
    const Reader crossings = r.at("crossings");
    for (std::size_t i = 0; i < crossings.array_size(); ++i) {
      const Reader c = crossings.at(i);
      truth.crossings.push_back({c.at("step").index(), c.at("door").string(),
                                 c.at("from").environment(), c.at("to").environment()});
    }
    const Reader turnbacks = r.at("turnbacks");
    for (std::size_t i = 0; i < turnbacks.array_size(); ++i) {
      const Reader t = turnbacks.at(i);
      truth.turnbacks.push_back({t.at("step").index(), t.at("door").string()});
    }
    return truth;
  });
}

void save_truth(const fs::path& path, const GroundTruth& truth) { write_file(path, dump_truth(truth)); }

GroundTruth load_truth(const fs::path& path) { return parse_truth(read_file(path), path.string()); }

// ---------------------------------------------------------------------------
// Walk scripts, noise, configuration
// ---------------------------------------------------------------------------

WalkScript parse_walk_script(const std::string& text, const FloorPlan& plan,
                             const std::string& source) {
  const json root = parse_json(text, source);
  return with_source(source, [&] {
    const Reader r(root, "script");
    r.only({"version", "waypoints", "door_actions", "pauses", "cadence", "step_length_true",
            "initial_environment", "group"});
    r.version();
    Route route;
    read_route_parts(r, route);
    WalkScript script;
    script.waypoints = route.waypoints;
    script.door_actions = route.door_actions;
    script.pauses = route.pauses;
    script.doors = plan.doors;
    script.initial_environment = r.has("initial_environment") ? r.at("initial_environment").environment()
                                                              : plan.initial_environment;
    if (r.has("cadence")) script.cadence = r.at("cadence").number();
    if (r.has("step_length_true")) script.step_length_true = r.at("step_length_true").number();
    if (r.has("group")) script.group = r.at("group").string();
    script.validate();
    return script;
  });
}

WalkScript load_walk_script(const fs::path& path, const FloorPlan& plan) {
  return parse_walk_script(read_file(path), plan, path.string());
}

NoiseModel load_noise(const std::string& name, std::uint64_t seed) {
  if (name == "none") return NoiseModel::none(seed);
  if (name == "calibrated") return NoiseModel::calibrated(seed);
  const json root = parse_json(read_file(name), name);
  return with_source(name, [&] {
    const Reader r(root, "noise");
    r.only({"accel_sigma", "gyro_sigma", "gyro_bias", "mag_sigma"});
    NoiseModel noise = NoiseModel::none(seed);
    if (r.has("accel_sigma")) noise.accel_sigma = r.at("accel_sigma").number();
    if (r.has("gyro_sigma")) noise.gyro_sigma = r.at("gyro_sigma").number();
    if (r.has("gyro_bias")) noise.gyro_bias = r.at("gyro_bias").number();
    if (r.has("mag_sigma")) noise.mag_sigma = r.at("mag_sigma").number();
    noise.validate();
    return noise;
  });
}

namespace {

void set_if(const Reader& r, const char* key, double& value) {
  if (r.has(key)) value = r.at(key).number();
}

void set_if(const Reader& r, const char* key, int& value) {
  if (r.has(key)) {
    const double v = r.at(key).number();
    if (v != static_cast<double>(static_cast<int>(v))) r.at(key).error("expected an integer");
    value = static_cast<int>(v);
  }
}

}  // namespace

AppConfig parse_config(const std::string& text, const std::string& source) {
  const json root = parse_json(text, source);
  return with_source(source, [&] {
    const Reader r(root, "config");
    r.only({"signal", "pdr", "pf", "kf", "crossing", "wknn", "eval", "sim", "track"});
    AppConfig cfg;
    if (r.has("signal")) {
      const Reader s = r.at("signal");
      s.only({"gravity", "step_hi", "step_lo", "door_hi", "door_lo", "step_refractory", "door_window",
              "door_min_zero_crossings", "smoothing_window"});
      SignalConfig& c = cfg.track.signal;
      set_if(s, "gravity", c.gravity);
      set_if(s, "step_hi", c.step_hi);
      set_if(s, "step_lo", c.step_lo);
      set_if(s, "door_hi", c.door_hi);
      set_if(s, "door_lo", c.door_lo);
      set_if(s, "step_refractory", c.step_refractory);
      set_if(s, "door_window", c.door_window);
      set_if(s, "door_min_zero_crossings", c.door_min_zero_crossings);
      set_if(s, "smoothing_window", c.smoothing_window);
    }
    if (r.has("pdr")) {
      const Reader p = r.at("pdr");
      p.only({"step_length", "yaw_axis"});
      set_if(p, "step_length", cfg.track.pdr.step_length);
      if (p.has("yaw_axis")) {
        const std::string axis = p.at("yaw_axis").string();
        if (axis == "x") cfg.track.pdr.yaw_axis = Axis::kX;
        else if (axis == "y") cfg.track.pdr.yaw_axis = Axis::kY;
        else if (axis == "z") cfg.track.pdr.yaw_axis = Axis::kZ;
        else p.at("yaw_axis").error("expected x, y or z");
      }
    }
    if (r.has("pf")) {
      const Reader p = r.at("pf");
      p.only({"particle_count", "step_sigma", "heading_sigma", "init_sigma", "resample_threshold"});
      set_if(p, "particle_count", cfg.track.pf.particle_count);
      set_if(p, "step_sigma", cfg.track.pf.step_sigma);
      set_if(p, "heading_sigma", cfg.track.pf.heading_sigma);
      set_if(p, "init_sigma", cfg.track.pf.init_sigma);
      set_if(p, "resample_threshold", cfg.track.pf.resample_threshold);
    }
    if (r.has("kf")) {
      const Reader k = r.at("kf");
      k.only({"q_heading", "q_bias", "r_mag", "declination", "init_heading_var", "init_bias_var"});
      set_if(k, "q_heading", cfg.track.kf.q_heading);
      set_if(k, "q_bias", cfg.track.kf.q_bias);
      set_if(k, "r_mag", cfg.track.kf.r_mag);
      set_if(k, "declination", cfg.track.kf.declination);
      set_if(k, "init_heading_var", cfg.track.kf.init_heading_var);
      set_if(k, "init_bias_var", cfg.track.kf.init_bias_var);
    }
    if (r.has("crossing")) {
      const Reader c = r.at("crossing");
      c.only({"zone_width", "area_radius", "exit_radius", "coincidence_steps"});
      set_if(c, "zone_width", cfg.track.crossing.zone_width);
      set_if(c, "area_radius", cfg.track.crossing.area_radius);
      if (c.has("exit_radius")) cfg.track.crossing.exit_radius = c.at("exit_radius").number();
      set_if(c, "coincidence_steps", cfg.track.crossing.coincidence_steps);
      cfg.eval.match_window = cfg.track.crossing.coincidence_steps;
    }
    if (r.has("wknn")) {
      const Reader w = r.at("wknn");
      w.only({"k", "mode", "missing_rss_floor"});
      set_if(w, "k", cfg.wknn.k);
      set_if(w, "missing_rss_floor", cfg.wknn.missing_rss_floor);
      if (w.has("mode")) {
        try {
          cfg.wknn.mode = parse_estimator_mode(w.at("mode").string());
        } catch (const Error& e) {
          w.at("mode").error(e.what());
        }
      }
    }
    if (r.has("eval")) {
      const Reader e = r.at("eval");
      e.only({"match_window"});
      set_if(e, "match_window", cfg.eval.match_window);
    }
    if (r.has("sim")) {
      const Reader s = r.at("sim");
      s.only({"sample_rate", "cadence", "step_length_true", "turnback_fraction"});
      set_if(s, "sample_rate", cfg.suite.sample_rate);
      set_if(s, "cadence", cfg.suite.cadence);
      set_if(s, "step_length_true", cfg.suite.step_length_true);
      set_if(s, "turnback_fraction", cfg.suite.turnback_fraction);
    }
    if (r.has("track")) {
      const Reader t = r.at("track");
      t.only({"divergence"});
      if (t.has("divergence")) {
        const std::string policy = t.at("divergence").string();
        if (policy == "recover") cfg.track.divergence = DivergencePolicy::kRecover;
        else if (policy == "fail") cfg.track.divergence = DivergencePolicy::kFail;
        else t.at("divergence").error("expected recover or fail");
      }
    }
    cfg.track.validate();
    return cfg;
  });
}

AppConfig load_config(const fs::path& path) { return parse_config(read_file(path), path.string()); }

// ---------------------------------------------------------------------------
// Tracker output
// ---------------------------------------------------------------------------

void write_path_csv(std::ostream& out, const TrackResult& result) {
  out << "step,x,y,heading,env\n";
  for (std::size_t i = 0; i < result.path.size(); ++i) {
    const Pose& p = result.path[i];
    out << i << ',' << format_double(p.position.x) << ',' << format_double(p.position.y) << ','
        << format_double(p.heading) << ',' << to_string(result.environments[i]) << '\n';
  }
}

void write_events_csv(std::ostream& out, const EventLog& log) {
  out << "kind,t,step,t_end,value,door,x,y,from,to\n";
  for (const LogEntry& e : log.entries) {
    const std::string t = format_double(e.t);
    if (const auto* s = std::get_if<StepEvent>(&e.payload)) {
      out << "step," << t << ',' << s->index << ",," << format_double(s->peak) << ",,,,,\n";
    } else if (const auto* d = std::get_if<DoorOpenRecord>(&e.payload)) {
      out << "door_open," << t << ',' << d->step_index << ',' << format_double(d->event.t_end) << ','
          << d->event.zero_crossings << ",,,,,\n";
    } else if (const auto* w = std::get_if<SwitchEvent>(&e.payload)) {
      out << "switch," << t << ',' << w->step_index << ",,," << w->door_id << ','
          << format_double(w->crossing_point.x) << ',' << format_double(w->crossing_point.y) << ','
          << to_string(w->from_env) << ',' << to_string(w->to_env) << '\n';
    } else if (const auto* f = std::get_if<FilterReset>(&e.payload)) {
      out << "filter_reset," << t << ',' << f->step_index << ",,,," << format_double(f->position.x)
          << ',' << format_double(f->position.y) << ",,\n";
    }
  }
}

void save_track_result(const fs::path& dir, const TrackResult& result) {
  std::ostringstream path_csv;
  write_path_csv(path_csv, result);
  write_file(dir / "path.csv", path_csv.str());
  std::ostringstream events_csv;
  write_events_csv(events_csv, result.events);
  write_file(dir / "events.csv", events_csv.str());
}

std::vector<SwitchEvent> load_switches(const fs::path& events_csv) {
  std::istringstream in(read_file(events_csv));
  std::string line;
  std::getline(in, line);
  std::vector<SwitchEvent> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.rfind("switch,", 0) != 0) continue;
    const auto f = split_csv(line);
    const std::string where = events_csv.string() + ":" + std::to_string(line_no);
    if (f.size() != 10) fail(ErrorCategory::kParse, where + ": expected 10 fields");
    SwitchEvent ev;
    ev.step_index = static_cast<std::size_t>(parse_number(f[2], where + " field step"));
    ev.door_id = f[5];
    ev.crossing_point = {parse_number(f[6], where + " field x"), parse_number(f[7], where + " field y")};
    ev.from_env = parse_environment(f[8]);
    ev.to_env = parse_environment(f[9]);
    out.push_back(ev);
  }
  return out;
}

std::optional<Point2> load_final_position(const fs::path& path_csv) {
  std::istringstream in(read_file(path_csv));
  std::string line;
  std::string last;
  std::getline(in, line);
  while (std::getline(in, line)) {
    strip_cr(line);
    if (!line.empty()) last = line;
  }
  if (last.empty()) return std::nullopt;
  const auto f = split_csv(last);
  if (f.size() != 5) fail(ErrorCategory::kParse, path_csv.string() + ": expected 5 fields");
  return Point2{parse_number(f[1], "x"), parse_number(f[2], "y")};
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

namespace {

std::string percent(const std::optional<double>& rate) {
  if (!rate) return "n/a";
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(1);
  ss << 100.0 * *rate << " %";
  return ss.str();
}

std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

}  // namespace

std::string format_report(const EvalReport& report) {
  const ConfusionMatrix& c = report.confusion;
  std::ostringstream out;
  out << "Confusion matrix for door crossing detection\n";
  auto cell = [](const std::optional<double>& rate, std::size_t count, std::size_t width = 0) {
    std::string text = percent(rate) + " (" + std::to_string(count) + ")";
    text.resize(std::max(text.size(), width), ' ');
    return text;
  };
  out << "                    Actual positive   Actual negative\n";
  out << "Estimated positive  " << cell(c.true_positive_rate(), c.true_positive, 18)
      << cell(c.false_positive_rate(), c.false_positive) << '\n';
  out << "Estimated negative  " << cell(c.false_negative_rate(), c.false_negative, 18)
      << cell(c.true_negative_rate(), c.true_negative) << '\n';
  out << "\nEffectivity of switching\n";
  for (const auto& [name, g] : report.groups) {
    const auto eff = g.effectivity();
    out << "  " << name << ": trials=" << g.trials << " true_crossings=" << g.true_crossings
        << " detected=" << g.detected << " turnbacks=" << g.turnbacks
        << " false_switches=" << g.false_switches
        << " effectivity=" << (eff ? fixed(*eff, 1) + " %" : std::string("n/a")) << '\n';
  }
  out << "  spurious switches (unmatched): " << report.spurious_switches << '\n';
  out << "\nLocalization error at final position [m]\n";
  if (report.final_errors.empty()) {
    out << "  no trials with tracked steps\n";
  } else {
    const auto [lo, hi] = std::minmax_element(report.final_errors.begin(), report.final_errors.end());
    double sum = 0.0;
    for (double e : report.final_errors) sum += e;
    out << "  trials=" << report.final_errors.size() << " min=" << fixed(*lo, 2)
        << " max=" << fixed(*hi, 2)
        << " average=" << fixed(sum / static_cast<double>(report.final_errors.size()), 2) << '\n';
  }
  return out.str();
}

std::string format_cdf_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "error,fraction\n";
  for (const CdfPoint& p : report.cdf) {
    out << format_double(p.error) << ',' << format_double(p.fraction) << '\n';
  }
  return out.str();
}

std::string format_confusion_csv(const EvalReport& report) {
  const ConfusionMatrix& c = report.confusion;
  auto rate = [](const std::optional<double>& r) { return r ? format_double(*r) : std::string(); };
  std::ostringstream out;
  out << "estimated,actual,count,rate\n";
  out << "positive,positive," << c.true_positive << ',' << rate(c.true_positive_rate()) << '\n';
  out << "positive,negative," << c.false_positive << ',' << rate(c.false_positive_rate()) << '\n';
  out << "negative,positive," << c.false_negative << ',' << rate(c.false_negative_rate()) << '\n';
  out << "negative,negative," << c.true_negative << ',' << rate(c.true_negative_rate()) << '\n';
  return out.str();
}

void save_report(const fs::path& dir, const EvalReport& report) {
  write_file(dir / "report.txt", format_report(report));
  write_file(dir / "cdf.csv", format_cdf_csv(report));
  write_file(dir / "confusion.csv", format_confusion_csv(report));
}

}  // namespace seamloc::io
