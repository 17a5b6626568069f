#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "seamloc/evaluation.hpp"
#include "seamloc/fingerprint.hpp"
#include "seamloc/geometry.hpp"
#include "seamloc/sim.hpp"
#include "seamloc/signal.hpp"
#include "seamloc/tracker.hpp"

namespace seamloc::io {

namespace fs = std::filesystem;

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kTraceHeader = "t,ax,ay,az,gx,gy,gz,mx,my,mz";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Trace: UTF-8 CSV, one sample per row, SI units.
Trace read_trace(std::istream& in, const std::string& source = "<stream>");
void write_trace(std::ostream& out, const Trace& trace);
Trace load_trace(const fs::path& path);
void save_trace(const fs::path& path, const Trace& trace);

// Floor plan: JSON with "version": 1. Door tangents within 1e-6 of unit
// length are normalised and reported in `warnings`; larger deviations fail.
FloorPlan parse_floorplan(const std::string& text, std::vector<std::string>& warnings,
                          const std::string& source = "<string>");
std::string dump_floorplan(const FloorPlan& plan);
FloorPlan load_floorplan(const fs::path& path, std::vector<std::string>& warnings);
/// Same as above; warnings go to std::clog.
FloorPlan load_floorplan(const fs::path& path);
void save_floorplan(const fs::path& path, const FloorPlan& plan);

RadioMap parse_radiomap(const std::string& text, const std::string& source = "<string>");
std::string dump_radiomap(const RadioMap& map);
RadioMap load_radiomap(const fs::path& path);
void save_radiomap(const fs::path& path, const RadioMap& map);

/// {"rss": {"ap": dBm, ...}} or a bare {"ap": dBm} object.
RssMap load_observation(const fs::path& path);

std::string dump_truth(const GroundTruth& truth);
GroundTruth parse_truth(const std::string& text, const std::string& source = "<string>");
void save_truth(const fs::path& path, const GroundTruth& truth);
GroundTruth load_truth(const fs::path& path);

WalkScript parse_walk_script(const std::string& text, const FloorPlan& plan,
                             const std::string& source = "<string>");
WalkScript load_walk_script(const fs::path& path, const FloorPlan& plan);

/// Noise model: "none", "calibrated", or a path to a JSON object with any of
/// accel_sigma, gyro_sigma, gyro_bias, mag_sigma.
NoiseModel load_noise(const std::string& name, std::uint64_t seed);

/// Every module's settings. Missing keys keep their defaults; unknown keys
/// are rejected.
struct AppConfig {
  TrackConfig track;
  WknnConfig wknn;
  EvalConfig eval;
  SuiteOptions suite;
};
AppConfig parse_config(const std::string& text, const std::string& source = "<string>");
AppConfig load_config(const fs::path& path);

// Tracker output.
void write_path_csv(std::ostream& out, const TrackResult& result);
void write_events_csv(std::ostream& out, const EventLog& log);
void save_track_result(const fs::path& dir, const TrackResult& result);
/// Switch events recorded in an events.csv.
std::vector<SwitchEvent> load_switches(const fs::path& events_csv);
/// Last position in a path.csv, empty when the path has no rows.
std::optional<Point2> load_final_position(const fs::path& path_csv);

// Evaluation report: report.txt, cdf.csv, confusion.csv.
std::string format_report(const EvalReport& report);
std::string format_cdf_csv(const EvalReport& report);
std::string format_confusion_csv(const EvalReport& report);
void save_report(const fs::path& dir, const EvalReport& report);

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& content);

}  // namespace seamloc::io
