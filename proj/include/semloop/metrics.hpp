#pragma once

#include "semloop/geometry.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace semloop {

// One thresholdable loop decision with its ground-truth label. Pairs whose
// ground-truth distance falls in the gray zone between the positive and
// negative radii never become decisions; callers filter them out.
struct LabeledDecision {
  std::int64_t query_id = -1;
  std::int64_t candidate_id = -1;
  double score = 0.0;  // higher = more loop-like
  bool is_true_loop = false;
  std::optional<PoseSE3> estimated;
  std::optional<PoseSE3> ground_truth;
};

struct PrPoint {
  double threshold = 0.0;  // predicted positive iff score >= threshold
  double precision = 0.0;
  double recall = 0.0;
};

// One PR point per distinct score, thresholds descending (strictest first).
// Requires at least one positive and one negative label.
std::vector<PrPoint> pr_sweep(const std::vector<LabeledDecision>& decisions);

// max over the sweep of 2PR / (P + R); empty-denominator points count as 0.
double f1_max(const std::vector<PrPoint>& sweep);

// (P_R0 + R_P100) / 2: precision at the strictest threshold plus the best
// recall among thresholds with precision exactly 1 (0 when none reaches it).
double extended_precision(const std::vector<PrPoint>& sweep);

// (RTE in meters, RYE in degrees). RTE is the translation distance; RYE the
// absolute yaw difference wrapped into [0, 180].
std::pair<double, double> pose_errors(const PoseSE3& estimated, const PoseSE3& ground_truth);

// Percentage of error pairs with RTE < 2 m and RYE < 5 degrees.
double registration_recall(const std::vector<std::pair<double, double>>& errors);

}  // namespace semloop
