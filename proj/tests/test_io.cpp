#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "seamloc/error.hpp"
#include "seamloc/io.hpp"

using namespace seamloc;
namespace fs = std::filesystem;

namespace {

ErrorCategory category_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("expected an error");
  return ErrorCategory::kIo;
}

std::string message_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

Trace read(const std::string& text) {
  std::istringstream in(text);
  return io::read_trace(in, "mem.csv");
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "seamloc_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

const std::string kHeader = "t,ax,ay,az,gx,gy,gz,mx,my,mz\n";

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, -0.0, 1.0, 0.1, -9.81, 1e-300, 123456789.125, 2.0 / 3.0}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("read_trace: minimal valid trace") {
  const Trace tr = read(kHeader + "0,0,0,9.81,0,0,0,30,0,40\n0.01,0,0,9.81,0,0,0.1,30,0,40\n");
  REQUIRE(tr.size() == 2);
  CHECK(tr.samples[1].gyro[2] == 0.1);
  CHECK(tr.samples[0].mag[2] == 40.0);
}

TEST_CASE("read_trace: diagnostics") {
  CHECK(category_of([] { read("t,ax\n"); }) == ErrorCategory::kParse);
  CHECK(category_of([] { read(""); }) == ErrorCategory::kParse);
  const std::string bad_field = message_of([] { read(kHeader + "0,0,0,9.81,0,0,0,30,0,40\n0.01,0,zz,9.81,0,0,0,30,0,40\n"); });
  CHECK(bad_field.find("mem.csv:3") != std::string::npos);
  CHECK(bad_field.find("ay") != std::string::npos);
  CHECK(category_of([] { read(kHeader + "0,0,0\n"); }) == ErrorCategory::kParse);

  const auto order = [] { read(kHeader + "0.02,0,0,9.81,0,0,0,30,0,40\n0.01,0,0,9.81,0,0,0,30,0,40\n"); };
  CHECK(category_of(order) == ErrorCategory::kInvariantViolation);
  CHECK(message_of(order).find("timestamps-strictly-increasing") != std::string::npos);

  CHECK(category_of([] { io::load_trace("/nonexistent/trace.csv"); }) == ErrorCategory::kIo);
}

TEST_CASE("trace round-trip is byte-identical") {
  const std::string text = kHeader + "0,0.1,-0.2,9.81,0.001,0,0.3333333333333333,30,-1.5,40\n" +
                           "0.01,0,0,10.5,0,0,0,29.9,0,40\n";
  std::ostringstream out;
  io::write_trace(out, read(text));
  CHECK(out.str() == text);
}

TEST_CASE("canonical fixtures round-trip byte-identically") {
  for (const char* name : {"campus_plan.json", "corridor_plan.json"}) {
    const std::string text = io::read_file(testutil::fixture(name));
    std::vector<std::string> warnings;
    CHECK(io::dump_floorplan(io::parse_floorplan(text, warnings)) == text);
    CHECK(warnings.empty());
  }
  const std::string radio = io::read_file(testutil::fixture("radiomap.json"));
  CHECK(io::dump_radiomap(io::parse_radiomap(radio)) == radio);
}

TEST_CASE("floor plan tangent tolerance") {
  const FloorPlan plan = testutil::campus();
  std::string text = io::dump_floorplan(plan);
  const auto pos = text.find("\"tangent\"");
  REQUIRE(pos != std::string::npos);

  auto with_tangent = [&](const std::string& tangent) {
    std::string t = text;
    const auto start = t.find('[', pos);
    const auto end = t.find(']', start);
    t.replace(start, end - start + 1, tangent);
    return t;
  };

  std::vector<std::string> warnings;
  const FloorPlan ok = io::parse_floorplan(with_tangent("[0.0, 1.0000005]"), warnings);
  CHECK(warnings.size() == 1);
  CHECK(ok.doors[0].tangent.norm() == doctest::Approx(1.0).epsilon(1e-15));

  warnings.clear();
  io::parse_floorplan(with_tangent("[0.0, 1.0000000001]"), warnings);
  CHECK(warnings.empty());

  CHECK(category_of([&] { io::parse_floorplan(with_tangent("[0.0, 1.01]"), warnings); }) ==
        ErrorCategory::kInvariantViolation);
}

TEST_CASE("floor plan parse errors") {
  std::vector<std::string> w;
  CHECK(category_of([&] { io::parse_floorplan("{", w); }) == ErrorCategory::kParse);
  CHECK(category_of([&] { io::parse_floorplan(R"({"version": 2, "walls": []})", w); }) == ErrorCategory::kParse);
  const std::string unknown = message_of([&] {
    io::parse_floorplan(R"({"version": 1, "walls": [], "doors": [], "bogus": 1,
      "initial_pose": {"position": [0, 0], "heading": 0}, "initial_environment": "indoor"})", w);
  });
  CHECK(unknown.find("bogus") != std::string::npos);
}

TEST_CASE("radio map and observation files") {
  CHECK(category_of([] { io::parse_radiomap(R"({"version": 1, "transmitters": [], "fingerprints": []})"); }) ==
        ErrorCategory::kInvariantViolation);
  const RssMap obs = io::load_observation(testutil::fixture("observation.json"));
  CHECK(obs.size() == 3);
  CHECK(obs.at("ap2") == -65.5);
  const fs::path bare = scratch("bare_obs.json");
  io::write_file(bare, R"({"x": -70})");
  CHECK(io::load_observation(bare).at("x") == -70.0);
}

TEST_CASE("ground truth round-trip") {
  const FloorPlan plan = testutil::campus();
  const SimResult sim = generate_walk(script_from_route(plan, "crossing"), NoiseModel::none());
  const std::string text = io::dump_truth(sim.truth);
  const GroundTruth back = io::parse_truth(text);
  CHECK(io::dump_truth(back) == text);
  CHECK(back.crossings.size() == 2);
  CHECK(back.step_count() == sim.truth.step_count());
}

TEST_CASE("walk script and noise files") {
  const FloorPlan plan = testutil::campus();
  const WalkScript s = io::parse_walk_script(
      R"({"version": 1, "waypoints": [[5.375, 5], [19.625, 5], [25.625, 5]],
          "door_actions": [{"waypoint": 1, "door": "A", "action": "open-and-cross"}],
          "cadence": 1.8})",
      plan);
  CHECK(s.cadence == 1.8);
  REQUIRE(s.door_actions.size() == 1);
  CHECK(s.door_actions[0].action == DoorActionKind::kOpenAndCross);
  CHECK(category_of([&] { io::parse_walk_script(R"({"version": 1, "waypoints": [[0, 0]]})", plan); }) ==
        ErrorCategory::kInvalidScript);

  CHECK(io::load_noise("none", 3).accel_sigma == 0.0);
  CHECK(io::load_noise("calibrated", 3).mag_sigma == NoiseModel::calibrated().mag_sigma);
  const fs::path noise = scratch("noise.json");
  io::write_file(noise, R"({"gyro_bias": 0.02})");
  const NoiseModel n = io::load_noise(noise.string(), 9);
  CHECK(n.gyro_bias == 0.02);
  CHECK(n.seed == 9);
}

TEST_CASE("config parsing") {
  const io::AppConfig cfg = io::parse_config(R"({
    "signal": {"door_window": 2.0},
    "pf": {"particle_count": 300},
    "crossing": {"coincidence_steps": 4},
    "wknn": {"k": 4, "mode": "KNN"},
    "sim": {"turnback_fraction": 0.5},
    "track": {"divergence": "fail"}
  })");
  CHECK(cfg.track.signal.door_window == 2.0);
  CHECK(cfg.track.pf.particle_count == 300);
  CHECK(cfg.track.crossing.coincidence_steps == 4);
  CHECK(cfg.eval.match_window == 4);
  CHECK(cfg.wknn.mode == EstimatorMode::kKNN);
  CHECK(cfg.suite.turnback_fraction == 0.5);
  CHECK(cfg.track.divergence == DivergencePolicy::kFail);
  CHECK(cfg.track.signal.step_hi == 1.5);  // default kept

  CHECK(category_of([] { io::parse_config(R"({"pf": {"particles": 3}})"); }) == ErrorCategory::kParse);
  CHECK(category_of([] { io::parse_config(R"({"pf": {"particle_count": 2.5}})"); }) == ErrorCategory::kParse);
  CHECK(category_of([] { io::parse_config(R"({"pf": {"particle_count": 0}})"); }) ==
        ErrorCategory::kInvalidParameter);
}

TEST_CASE("track output and report files") {
  const FloorPlan plan = testutil::campus();
  const SimResult sim = generate_walk(script_from_route(plan, "crossing"), NoiseModel::none());
  TrackConfig cfg;
  cfg.pf.particle_count = 100;
  const TrackResult r = track(sim.trace, plan, cfg);
  const fs::path dir = scratch("track_out");
  fs::create_directories(dir);
  io::save_track_result(dir, r);

  const auto switches = io::load_switches(dir / "events.csv");
  REQUIRE(switches.size() == r.events.switches().size());
  for (std::size_t i = 0; i < switches.size(); ++i) {
    CHECK(switches[i].step_index == r.events.switches()[i].step_index);
    CHECK(switches[i].door_id == r.events.switches()[i].door_id);
    CHECK(switches[i].to_env == r.events.switches()[i].to_env);
  }
  const auto last = io::load_final_position(dir / "path.csv");
  REQUIRE(last);
  CHECK(*last == r.path.back().position);

  TrialResult trial{switches, last, sim.truth};
  const EvalReport report = evaluate(std::vector{trial});
  io::save_report(dir, report);
  const std::string txt = io::read_file(dir / "report.txt");
  CHECK(txt.find("Confusion matrix for door crossing detection") != std::string::npos);
  CHECK(txt.find("Estimated positive") != std::string::npos);
  CHECK(txt.find("Actual negative") != std::string::npos);
  const std::string conf = io::read_file(dir / "confusion.csv");
  CHECK(conf.rfind("estimated,actual,count,rate\n", 0) == 0);
  CHECK(std::count(conf.begin(), conf.end(), '\n') == 5);
  CHECK(io::read_file(dir / "cdf.csv").rfind("error,fraction\n", 0) == 0);
}

TEST_CASE("shipped default config matches built-in defaults") {
  const io::AppConfig cfg = io::load_config(testutil::fixture("../../configs/default.json"));
  const io::AppConfig def;
  CHECK(cfg.track.signal.door_window == def.track.signal.door_window);
  CHECK(cfg.track.pf.particle_count == def.track.pf.particle_count);
  CHECK(cfg.track.pf.heading_sigma == def.track.pf.heading_sigma);
  CHECK(cfg.track.kf.q_bias == def.track.kf.q_bias);
  CHECK(cfg.track.crossing.zone_width == def.track.crossing.zone_width);
  CHECK(cfg.wknn.k == def.wknn.k);
  CHECK(cfg.wknn.mode == def.wknn.mode);
  CHECK(cfg.eval.match_window == def.eval.match_window);
  CHECK(cfg.suite.sample_rate == def.suite.sample_rate);
  CHECK(cfg.track.divergence == def.track.divergence);
}
