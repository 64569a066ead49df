#include "semloop/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace semloop {

std::vector<PrPoint> pr_sweep(const std::vector<LabeledDecision>& decisions) {
  std::size_t positives = 0;
  for (const auto& d : decisions) {
    if (!std::isfinite(d.score)) throw std::invalid_argument("pr_sweep: non-finite score");
    if (d.is_true_loop) ++positives;
  }
  if (positives == 0 || positives == decisions.size()) {
    throw std::invalid_argument("pr_sweep: needs at least one positive and one negative");
  }

  std::set<double, std::greater<double>> thresholds;
  for (const auto& d : decisions) thresholds.insert(d.score);

  std::vector<PrPoint> sweep;
  sweep.reserve(thresholds.size());
  for (const double t : thresholds) {
    std::size_t tp = 0, fp = 0;
    for (const auto& d : decisions) {
      if (d.score < t) continue;
      if (d.is_true_loop) {
        ++tp;
      } else {
        ++fp;
      }
    }
    PrPoint point;
    point.threshold = t;
    point.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    point.recall = static_cast<double>(tp) / positives;
    sweep.push_back(point);
  }
  return sweep;
}

double f1_max(const std::vector<PrPoint>& sweep) {
  if (sweep.empty()) throw std::invalid_argument("f1_max: empty sweep");
  double best = 0.0;
  for (const auto& p : sweep) {
    const double denom = p.precision + p.recall;
    const double f1 = denom > 0.0 ? 2.0 * p.precision * p.recall / denom : 0.0;
    best = std::max(best, f1);
  }
  return best;
}

double extended_precision(const std::vector<PrPoint>& sweep) {
  if (sweep.empty()) throw std::invalid_argument("extended_precision: empty sweep");
  // Thresholds are sorted descending, so the first entry is the strictest
  // one (minimum recall with at least one prediction).
  const double p_r0 = sweep.front().precision;
  double r_p100 = 0.0;
  for (const auto& p : sweep) {
    if (p.precision == 1.0) r_p100 = std::max(r_p100, p.recall);
  }
  return 0.5 * (p_r0 + r_p100);
}

std::pair<double, double> pose_errors(const PoseSE3& estimated, const PoseSE3& ground_truth) {
  const double rte = (estimated.translation - ground_truth.translation).norm();
  double dyaw = std::abs(yaw_of(estimated.rotation) - yaw_of(ground_truth.rotation));
  dyaw = std::fmod(dyaw, 2.0 * M_PI);
  if (dyaw > M_PI) dyaw = 2.0 * M_PI - dyaw;
  return {rte, rad2deg(dyaw)};
}

double registration_recall(const std::vector<std::pair<double, double>>& errors) {
  if (errors.empty()) throw std::invalid_argument("registration_recall: empty error list");
  std::size_t ok = 0;
  for (const auto& [rte, rye] : errors) {
    if (rte < 2.0 && rye < 5.0) ++ok;
  }
  return 100.0 * static_cast<double>(ok) / static_cast<double>(errors.size());
}

}  // namespace semloop
