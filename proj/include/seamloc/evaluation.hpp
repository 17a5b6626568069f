#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seamloc/crossing.hpp"
#include "seamloc/geometry.hpp"
#include "seamloc/sim.hpp"

namespace seamloc {

/// One trial's tracker output paired with its ground truth.
struct TrialResult {
  std::vector<SwitchEvent> switches;
  std::optional<Point2> final_estimate;  // empty when no step was tracked
  GroundTruth truth;
};

struct EvalConfig {
  int match_window = 5;  // steps
};

// Rates are empty when their denominator is zero (e.g. no true crossings).
struct ConfusionMatrix {
  std::size_t true_positive = 0;
  std::size_t false_negative = 0;
  std::size_t true_negative = 0;
  std::size_t false_positive = 0;

  std::optional<double> true_positive_rate() const;
  std::optional<double> false_negative_rate() const;
  std::optional<double> true_negative_rate() const;
  std::optional<double> false_positive_rate() const;
};

struct GroupStats {
  std::size_t trials = 0;
  std::size_t true_crossings = 0;
  std::size_t detected = 0;
  std::size_t turnbacks = 0;
  std::size_t false_switches = 0;

  /// detected / true_crossings in percent.
  std::optional<double> effectivity() const;
};

struct CdfPoint {
  double error = 0.0;
  double fraction = 0.0;
};

struct EvalReport {
  ConfusionMatrix confusion;
  std::map<std::string, GroupStats> groups;
  std::vector<double> final_errors;  // trial order; trials without steps skipped
  std::vector<CdfPoint> cdf;
  std::size_t spurious_switches = 0;  // switches not matched to a true crossing
};

EvalReport evaluate(std::span<const TrialResult> results, const EvalConfig& cfg = {});

/// Empirical CDF: sorted errors paired with i/n.
std::vector<CdfPoint> empirical_cdf(std::vector<double> errors);

/// Fraction of errors <= x under the empirical step-function CDF.
double cdf_at(std::span<const CdfPoint> cdf, double x);

}  // namespace seamloc
