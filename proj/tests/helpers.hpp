#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "seamloc/io.hpp"
#include "seamloc/signal.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) { return std::string(SEAMLOC_FIXTURES) + "/" + name; }

inline seamloc::FloorPlan campus() { return seamloc::io::load_floorplan(fixture("campus_plan.json")); }
inline seamloc::FloorPlan corridor() { return seamloc::io::load_floorplan(fixture("corridor_plan.json")); }

/// Samples f(t) on [0, duration) at `rate` Hz.
template <typename F>
std::vector<seamloc::SignalPoint> sample(F f, double duration, double rate = 100.0) {
  std::vector<seamloc::SignalPoint> out;
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    out.push_back({t, f(t)});
  }
  return out;
}

inline constexpr double kTwoPi = 6.283185307179586;

}  // namespace testutil
