#include <cmath>
#include <random>

#include "doctest.h"
#include "seamloc/error.hpp"
#include "seamloc/pdr.hpp"
#include "seamloc/sim.hpp"

using namespace seamloc;

namespace {

// Constant yaw rate at 100 Hz with one step event every 0.5 s.
struct Straight {
  Trace trace;
  std::vector<StepEvent> steps;
};

Straight straight_trace(double duration, double yaw_rate) {
  Straight s;
  const auto n = static_cast<std::size_t>(std::llround(duration * 100.0)) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    ImuSample x;
    x.t = static_cast<double>(i) / 100.0;
    x.accel = {0, 0, 9.81};
    x.gyro = {0, 0, yaw_rate};
    s.trace.samples.push_back(x);
  }
  for (std::size_t k = 0; 0.5 * static_cast<double>(k + 1) <= duration; ++k) {
    s.steps.push_back({k, 0.5 * static_cast<double>(k + 1), 2.0});
  }
  return s;
}

double path_length(const Pose& start, const std::vector<Pose>& path) {
  double len = 0.0;
  Point2 prev = start.position;
  for (const Pose& p : path) {
    len += distance(prev, p.position);
    prev = p.position;
  }
  return len;
}

}  // namespace

TEST_CASE("integrate_heading examples") {
  CHECK(integrate_heading(0.0, kPi / 2, 1.0) == doctest::Approx(kPi / 2));
  CHECK(integrate_heading(kPi - 0.1, 0.2, 1.0) == doctest::Approx(-kPi + 0.1));
  CHECK(integrate_heading(1.234, 0.0, 0.01) == 1.234);
  CHECK_THROWS_AS(integrate_heading(0.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(integrate_heading(0.0, 1.0, -0.1), Error);
}

TEST_CASE("propagate_step examples") {
  const PdrConfig cfg;
  Pose p = propagate_step({{0, 0}, 0.0}, cfg);
  CHECK(p.position.x == doctest::Approx(0.75));
  CHECK(p.position.y == doctest::Approx(0.0));
  p = propagate_step({{0, 0}, kPi / 2}, cfg);
  CHECK(std::abs(p.position.x) <= 1e-15);
  CHECK(p.position.y == doctest::Approx(0.75));

  Pose q{{0, 0}, 0.0};
  for (double h : {0.0, kPi / 2, kPi, -kPi / 2}) {
    q.heading = h;
    q = propagate_step(q, cfg);
  }
  CHECK(q.position.norm() <= 1e-12);
}

TEST_CASE("run_pdr: zero gyro walks a straight line") {
  const Straight s = straight_trace(10.0, 0.0);
  const auto path = run_pdr(s.trace, s.steps, PdrConfig{});
  REQUIRE(path.size() == 20);
  CHECK(path.back().position.x == doctest::Approx(0.75 * 20));
  CHECK(path.back().position.y == 0.0);
}

TEST_CASE("run_pdr: constant gyro bias gives heading error b*T") {
  const double b = 0.02, T = 120.0;
  const Straight s = straight_trace(T, b);
  const auto headings = integrate_headings(s.trace, 0.0, Axis::kZ);
  CHECK(std::abs(headings.back() - wrap_angle(b * T)) <= 1e-9);
}

TEST_CASE("run_pdr: noiseless rectangle from the simulator closes on the truth") {
  WalkScript script;
  script.waypoints = {{0, 0}, {6, 0}, {6, 4.5}, {0, 4.5}, {0, 0}};
  const SimResult sim = generate_walk(script, NoiseModel::none());
  const SignalConfig sig;
  const auto steps = detect_steps(normalized_series(sim.trace, sig), sig);
  REQUIRE(steps.size() == sim.truth.step_count());
  PdrConfig cfg;
  cfg.initial_pose = sim.truth.initial_pose;
  const auto path = run_pdr(sim.trace, steps, cfg);
  for (std::size_t i = 0; i < path.size(); ++i) {
    CHECK(distance(path[i].position, sim.truth.poses[i].position) < 1e-6);
  }
  CHECK(path.back().position.norm() < 1e-6);
}

TEST_CASE("run_pdr properties: path length, rotation equivariance, heading range") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 0.4);
  Straight s = straight_trace(20.0, 0.0);
  for (auto& x : s.trace.samples) x.gyro[2] = n(rng);

  PdrConfig cfg;
  cfg.initial_pose = {{1.0, -2.0}, 0.3};
  const auto path = run_pdr(s.trace, s.steps, cfg);
  CHECK(path_length(cfg.initial_pose, path) == doctest::Approx(0.75 * path.size()).epsilon(1e-12));
  for (const Pose& p : path) {
    CHECK(p.heading > -kPi);
    CHECK(p.heading <= kPi);
  }

  for (double phi : {0.7, -2.1, 3.0}) {
    PdrConfig rot = cfg;
    rot.initial_pose.heading = cfg.initial_pose.heading + phi;
    const auto rpath = run_pdr(s.trace, s.steps, rot);
    REQUIRE(rpath.size() == path.size());
    const double c = std::cos(phi), sn = std::sin(phi);
    for (std::size_t i = 0; i < path.size(); ++i) {
      const Point2 d = path[i].position - cfg.initial_pose.position;
      const Point2 expect = cfg.initial_pose.position + Point2{c * d.x - sn * d.y, sn * d.x + c * d.y};
      CHECK(distance(rpath[i].position, expect) <= 1e-9);
    }
  }
}

TEST_CASE("run_pdr: yaw axis selection and config validation") {
  Straight s = straight_trace(2.0, 0.0);
  for (auto& x : s.trace.samples) x.gyro = {0.5, 0.0, 0.0};
  PdrConfig cfg;
  cfg.yaw_axis = Axis::kX;
  CHECK(run_pdr(s.trace, s.steps, cfg).back().heading == doctest::Approx(1.0));
  cfg.yaw_axis = Axis::kZ;
  CHECK(run_pdr(s.trace, s.steps, cfg).back().heading == 0.0);
  cfg.step_length = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
