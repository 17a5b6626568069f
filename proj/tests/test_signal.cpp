#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "seamloc/error.hpp"
#include "seamloc/signal.hpp"

using namespace seamloc;
using testutil::kTwoPi;
using testutil::sample;

namespace {

ImuSample with_accel(double x, double y, double z) {
  ImuSample s;
  s.accel = {x, y, z};
  return s;
}

std::vector<double> values(const std::vector<SignalPoint>& s) {
  std::vector<double> v;
  for (const auto& p : s) v.push_back(p.value);
  return v;
}

// Walking, a jiggle dwell, then walking again.
std::vector<SignalPoint> walk_jiggle_walk(double jiggle_start, double jiggle_len) {
  return sample(
      [=](double t) {
        if (t >= jiggle_start && t < jiggle_start + jiggle_len) {
          return 0.8 * std::sin(kTwoPi * (t - jiggle_start) / 0.4);
        }
        return 2.0 * std::sin(kTwoPi * t / 0.5);
      },
      jiggle_start + jiggle_len + 3.0);
}

}  // namespace

TEST_CASE("normalize_accel examples") {
  const SignalConfig cfg;
  CHECK(std::abs(normalize_accel(with_accel(0, 0, 9.81), cfg) - 0.0) <= 1e-12);
  CHECK(std::abs(normalize_accel(with_accel(0, 0, 0), cfg) + 9.81) <= 1e-12);
  CHECK(std::abs(normalize_accel(with_accel(3, 4, 0), cfg) + 4.81) <= 1e-12);
}

TEST_CASE("detect_steps: sinusoid at walking amplitude gives one step per cycle") {
  const auto series = sample([](double t) { return 2.0 * std::sin(kTwoPi * t / 0.5); }, 5.0);
  const SignalConfig cfg;
  const auto steps = detect_steps(series, cfg);
  CHECK(oracle::count_excursion_cycles(values(series), cfg.step_hi, cfg.step_lo) == 10);
  CHECK(steps.size() == 10);
  for (const StepEvent& s : steps) CHECK(s.peak >= cfg.step_hi);
}

TEST_CASE("detect_steps: sub-threshold and empty inputs") {
  const SignalConfig cfg;
  CHECK(detect_steps(sample([](double t) { return 0.7 * std::sin(kTwoPi * t / 0.5); }, 5.0), cfg).empty());
  CHECK(detect_steps(sample([](double) { return 0.0; }, 5.0), cfg).empty());
  CHECK(detect_steps(std::vector<SignalPoint>{}, cfg).empty());
}

TEST_CASE("detect_steps: amplitude scaling and time shift leave the count unchanged") {
  const SignalConfig cfg;
  for (double k = 2.0; k <= 4.0; k += 0.25) {
    const auto s = sample([k](double t) { return k * std::sin(kTwoPi * t / 0.5); }, 5.0);
    CHECK(detect_steps(s, cfg).size() == 10);
  }
  auto base = sample([](double t) { return 2.0 * std::sin(kTwoPi * t / 0.5); }, 5.0);
  for (double shift : {-3.0, 0.013, 17.5, 1000.0}) {
    auto moved = base;
    for (auto& p : moved) p.t += shift;
    CHECK(detect_steps(moved, cfg).size() == 10);
  }
}

TEST_CASE("detect_steps: refractory spacing") {
  // 3 Hz cadence with a 0.3 s refractory: every event still at least 0.3 s apart.
  const SignalConfig cfg;
  for (double period : {0.25, 0.31, 0.5, 0.9}) {
    const auto s = sample([period](double t) { return 2.5 * std::sin(kTwoPi * t / period); }, 6.0);
    const auto steps = detect_steps(s, cfg);
    REQUIRE_FALSE(steps.empty());
    for (std::size_t i = 1; i < steps.size(); ++i) {
      CHECK(steps[i].t - steps[i - 1].t >= cfg.step_refractory - 1e-12);
    }
  }
}

TEST_CASE("detect_door_openings: one jiggle between walking bouts") {
  const SignalConfig cfg;
  const double j0 = 4.0, jl = 1.5;
  const auto series = walk_jiggle_walk(j0, jl);
  const auto steps = detect_steps(series, cfg);
  const auto doors = detect_door_openings(series, cfg, steps);
  REQUIRE(doors.size() == 1);
  CHECK(doors[0].t_start <= j0 + 1e-9);
  CHECK(doors[0].t_end >= j0 + jl - 0.01 - 1e-9);
  CHECK(doors[0].zero_crossings >= cfg.door_min_zero_crossings);

  // Manual window check: the event holds no step and stays under step_hi.
  for (const StepEvent& s : steps) CHECK_FALSE((s.t >= doors[0].t_start && s.t <= doors[0].t_end));
  for (const SignalPoint& p : series) {
    if (p.t >= doors[0].t_start && p.t <= doors[0].t_end) CHECK(std::abs(p.value) < cfg.step_hi);
  }
}

TEST_CASE("detect_door_openings: walking and rest give nothing") {
  const SignalConfig cfg;
  const auto walking = sample([](double t) { return 2.0 * std::sin(kTwoPi * t / 0.5); }, 10.0);
  CHECK(detect_door_openings(walking, cfg, detect_steps(walking, cfg)).empty());
  const auto rest = sample([](double) { return 0.0; }, 10.0);
  CHECK(detect_door_openings(rest, cfg, detect_steps(rest, cfg)).empty());
  CHECK(detect_door_openings(std::vector<SignalPoint>{}, cfg, {}).empty());
}

TEST_CASE("detect_door_openings: a jiggle without enough zero crossings is ignored") {
  SignalConfig cfg;
  cfg.door_min_zero_crossings = 100;
  const auto series = walk_jiggle_walk(4.0, 1.5);
  CHECK(detect_door_openings(series, cfg, detect_steps(series, cfg)).empty());
}

TEST_CASE("count_zero_crossings") {
  const auto s = sample([](double t) { return std::sin(kTwoPi * (t + 0.05)); }, 3.0);
  CHECK(count_zero_crossings(s, 0.0, 3.0) == 6);
  CHECK(count_zero_crossings(s, 0.0, 0.5) == 1);
  CHECK(count_zero_crossings(s, 5.0, 6.0) == 0);
}

TEST_CASE("moving_average") {
  const auto s = sample([](double t) { return t < 0.5 ? 0.0 : 1.0; }, 1.0, 10.0);
  const auto same = moving_average(s, 1);
  REQUIRE(same.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(same[i].value == s[i].value);
  const auto avg = moving_average(s, 3);
  REQUIRE(avg.size() == s.size());
  CHECK(avg[4].value == doctest::Approx(1.0 / 3.0));
  CHECK(avg[5].value == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(moving_average(s, 0), Error);
}

TEST_CASE("normalized_series and trace validation") {
  Trace tr;
  tr.samples = {with_accel(0, 0, 9.81), with_accel(0, 0, 11.81)};
  tr.samples[1].t = 0.01;
  const auto s = normalized_series(tr, SignalConfig{});
  REQUIRE(s.size() == 2);
  CHECK(s[1].value == doctest::Approx(2.0));
  CHECK_NOTHROW(tr.validate());

  tr.samples[1].t = 0.0;
  try {
    tr.validate();
    FAIL("expected invariant violation");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::kInvariantViolation);
    CHECK(std::string(e.what()).find("timestamps-strictly-increasing") != std::string::npos);
  }
  tr.samples[1].t = 0.01;
  tr.samples[1].gyro[2] = std::nan("");
  CHECK_THROWS_AS(tr.validate(), Error);
}

TEST_CASE("signal config validation") {
  SignalConfig cfg;
  cfg.door_hi = 2.0;  // above step_hi
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = SignalConfig{};
  cfg.door_window = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}
