#include "seamloc/fingerprint.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace seamloc {

void RadioMap::validate() const {
  if (entries.empty()) fail(ErrorCategory::kInvariantViolation, "radio map has no entries");
  const std::set<std::string> registry(transmitters.begin(), transmitters.end());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Fingerprint& fp = entries[i];
    const std::string where = "fingerprint " + std::to_string(i);
    if (!fp.position.finite()) fail(ErrorCategory::kInvariantViolation, where + ": position not finite");
    if (fp.rss.empty()) fail(ErrorCategory::kInvariantViolation, where + ": rss-non-empty");
    for (const auto& [id, dbm] : fp.rss) {
      if (!(dbm >= -120.0 && dbm <= 0.0)) {
        fail(ErrorCategory::kInvariantViolation, where + ": rss-range [-120, 0] violated by " + id);
      }
      if (!registry.contains(id)) {
        fail(ErrorCategory::kInvariantViolation, where + ": transmitter " + id + " not registered");
      }
    }
  }
}

double rss_distance(const RssMap& observed, const RssMap& reference, double floor) {
  if (observed.empty() && reference.empty()) {
    fail(ErrorCategory::kInvalidInput, "rss_distance needs at least one transmitter");
  }
  // Both maps are ordered, so walk them as a sorted merge.
  double sum = 0.0;
  auto a = observed.begin();
  auto b = reference.begin();
  while (a != observed.end() || b != reference.end()) {
    double va = floor;
    double vb = floor;
    if (b == reference.end() || (a != observed.end() && a->first < b->first)) {
      va = (a++)->second;
    } else if (a == observed.end() || b->first < a->first) {
      vb = (b++)->second;
    } else {
      va = (a++)->second;
      vb = (b++)->second;
    }
    sum += (va - vb) * (va - vb);
  }
  return std::sqrt(sum);
}

Point2 estimate_position(const RssMap& observed, const RadioMap& map, const WknnConfig& cfg) {
  const std::size_t m = map.entries.size();
  const int k_requested = cfg.mode == EstimatorMode::kNN ? 1 : cfg.k;
  if (k_requested < 1 || static_cast<std::size_t>(k_requested) > m) {
    fail(ErrorCategory::kInvalidParameter,
         "K must lie in [1, M]; K=" + std::to_string(k_requested) + ", M=" + std::to_string(m));
  }
  const auto k = static_cast<std::size_t>(k_requested);

  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    ranked.emplace_back(rss_distance(observed, map.entries[i].rss, cfg.missing_rss_floor), i);
  }
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());

  if (k == 1) return map.entries[ranked.front().second].position;
  for (std::size_t j = 0; j < k; ++j) {
    if (ranked[j].first == 0.0) return map.entries[ranked[j].second].position;
  }

  Point2 acc;
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double w = cfg.mode == EstimatorMode::kKNN ? 1.0 : 1.0 / ranked[j].first;
    acc = acc + w * map.entries[ranked[j].second].position;
    weight_sum += w;
  }
  return (1.0 / weight_sum) * acc;
}

std::string_view to_string(EstimatorMode mode) {
  switch (mode) {
    case EstimatorMode::kNN: return "NN";
    case EstimatorMode::kKNN: return "KNN";
    case EstimatorMode::kWKNN: return "WKNN";
  }
  return "WKNN";
}

EstimatorMode parse_estimator_mode(std::string_view name) {
  if (name == "NN") return EstimatorMode::kNN;
  if (name == "KNN") return EstimatorMode::kKNN;
  if (name == "WKNN") return EstimatorMode::kWKNN;
  fail(ErrorCategory::kParse, "unknown estimator mode '" + std::string(name) + "'");
}

}  // namespace seamloc
