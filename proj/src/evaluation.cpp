#include "seamloc/evaluation.hpp"

#include <algorithm>
#include <cstdlib>

namespace seamloc {

namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<double> ConfusionMatrix::true_positive_rate() const {
  return ratio(true_positive, true_positive + false_negative);
}
std::optional<double> ConfusionMatrix::false_negative_rate() const {
  return ratio(false_negative, true_positive + false_negative);
}
std::optional<double> ConfusionMatrix::true_negative_rate() const {
  return ratio(true_negative, true_negative + false_positive);
}
std::optional<double> ConfusionMatrix::false_positive_rate() const {
  return ratio(false_positive, true_negative + false_positive);
}

std::optional<double> GroupStats::effectivity() const {
  const auto r = ratio(detected, true_crossings);
  if (!r) return std::nullopt;
  return 100.0 * *r;
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> errors) {
  std::sort(errors.begin(), errors.end());
  std::vector<CdfPoint> cdf;
  cdf.reserve(errors.size());
  const auto n = static_cast<double>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    cdf.push_back({errors[i], static_cast<double>(i + 1) / n});
  }
  return cdf;
}

double cdf_at(std::span<const CdfPoint> cdf, double x) {
  double fraction = 0.0;
  for (const CdfPoint& p : cdf) {
    if (p.error > x) break;
    fraction = p.fraction;
  }
  return fraction;
}

EvalReport evaluate(std::span<const TrialResult> results, const EvalConfig& cfg) {
  if (results.empty()) fail(ErrorCategory::kInvalidInput, "evaluate needs at least one trial");
  const auto window = static_cast<long>(cfg.match_window);

  EvalReport report;
  for (const TrialResult& trial : results) {
    GroupStats& group = report.groups[trial.truth.group];
    ++group.trials;

    std::vector<bool> used(trial.switches.size(), false);
    for (const TrueCrossing& truth : trial.truth.crossings) {
      ++group.true_crossings;
      bool detected = false;
      for (std::size_t i = 0; i < trial.switches.size() && !detected; ++i) {
        const SwitchEvent& sw = trial.switches[i];
        const long gap = static_cast<long>(sw.step_index) - static_cast<long>(truth.step_index);
        if (!used[i] && sw.door_id == truth.door_id && std::labs(gap) <= window) {
          used[i] = true;
          detected = true;
        }
      }
      if (detected) {
        ++group.detected;
        ++report.confusion.true_positive;
      } else {
        ++report.confusion.false_negative;
      }
    }

    for (std::size_t i = 0; i < used.size(); ++i) {
      if (!used[i]) ++report.spurious_switches;
    }

    for (const TrueTurnBack& tb : trial.truth.turnbacks) {
      ++group.turnbacks;
      bool spurious = false;
      for (std::size_t i = 0; i < trial.switches.size(); ++i) {
        spurious = spurious || (!used[i] && trial.switches[i].door_id == tb.door_id);
      }
      if (spurious) {
        ++group.false_switches;
        ++report.confusion.false_positive;
      } else {
        ++report.confusion.true_negative;
      }
    }

    if (trial.final_estimate) {
      report.final_errors.push_back(distance(*trial.final_estimate, trial.truth.final_position()));
    }
  }
  report.cdf = empirical_cdf(report.final_errors);
  return report;
}

}  // namespace seamloc
