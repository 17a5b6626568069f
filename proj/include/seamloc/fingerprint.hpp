#pragma once

#include <map>
#include <string>
#include <vector>

#include "seamloc/geometry.hpp"

namespace seamloc {

/// Transmitter id -> received signal strength in dBm.
using RssMap = std::map<std::string, double>;

struct Fingerprint {
  Point2 position;
  RssMap rss;
};

struct RadioMap {
  std::vector<Fingerprint> entries;
  std::vector<std::string> transmitters;

  /// Checks M >= 1, non-empty vectors, dBm range, and that every transmitter
  /// used by an entry is registered.
  void validate() const;
};

enum class EstimatorMode { kNN, kKNN, kWKNN };

struct WknnConfig {
  int k = 3;
  EstimatorMode mode = EstimatorMode::kWKNN;
  double missing_rss_floor = -100.0;
};

/// Euclidean distance over the union of transmitters; a transmitter missing
/// on one side contributes with the floor value.
double rss_distance(const RssMap& observed, const RssMap& reference, double floor);

// Weighted mean of the K nearest reference positions: weights 1/d (WKNN),
// 1 (KNN); NN uses K = 1. Distance ties rank by insertion order. An exact
// RSS match returns its reference position directly.
Point2 estimate_position(const RssMap& observed, const RadioMap& map, const WknnConfig& cfg);

std::string_view to_string(EstimatorMode mode);
EstimatorMode parse_estimator_mode(std::string_view name);

}  // namespace seamloc
