#pragma once

// Independent reference implementations the test suites check the library
// against. Everything here is deliberately brute force and kept free of
// library calls beyond basic types, so a bug in the production code cannot
// hide in its own oracle.

#include "semloop/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

// Minimum total cost of a full one-to-one assignment (every row matched when
// rows <= cols, else every column), by enumerating permutations. Usable up
// to 9 on the larger side.
inline double min_assignment_cost(const Eigen::MatrixXd& cost) {
  if (cost.rows() > cost.cols()) {
    return min_assignment_cost(Eigen::MatrixXd(cost.transpose()));
  }
  const int rows = static_cast<int>(cost.rows());
  const int cols = static_cast<int>(cost.cols());
  std::vector<int> perm(cols);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int r = 0; r < rows; ++r) total += cost(r, perm[r]);
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Connected components of the "distance <= radius" graph over all point
// pairs, as sorted index sets, components ordered by smallest member.
inline std::vector<std::vector<int>> connected_components(
    const std::vector<Eigen::Vector3d>& points, double radius) {
  const int n = static_cast<int>(points.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((points[i] - points[j]).norm() <= radius) parent[find(i)] = find(j);
    }
  }
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& g : groups) {
    if (!g.empty()) out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

// Exhaustive nearest-neighbor retrieval over (id, descriptor) entries.
struct RetrievalHit {
  std::int64_t id = -1;
  double distance = 0.0;
};

inline std::vector<RetrievalHit> linear_retrieval(
    const std::vector<std::pair<std::int64_t, Eigen::VectorXd>>& entries,
    const Eigen::VectorXd& query, std::int64_t query_id, int top_n, int exclusion_window) {
  std::vector<RetrievalHit> hits;
  for (const auto& [id, descriptor] : entries) {
    if (query_id >= 0 && id > query_id - exclusion_window) continue;
    hits.push_back({id, (descriptor - query).norm()});
  }
  std::sort(hits.begin(), hits.end(), [](const RetrievalHit& a, const RetrievalHit& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.id < b.id;
  });
  if (static_cast<int>(hits.size()) > top_n) hits.resize(top_n);
  return hits;
}

// Precision/recall by direct confusion-matrix counting at one threshold
// (predicted positive iff score >= threshold).
struct PrRef {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

inline std::vector<PrRef> pr_curve(const std::vector<double>& scores,
                                   const std::vector<bool>& labels) {
  std::vector<double> thresholds = scores;
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::vector<PrRef> curve;
  for (const double t : thresholds) {
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const bool predicted = scores[i] >= t;
      if (predicted && labels[i]) ++tp;
      if (predicted && !labels[i]) ++fp;
      if (!predicted && labels[i]) ++fn;
    }
    PrRef p;
    p.threshold = t;
    p.precision = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    p.recall = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    curve.push_back(p);
  }
  return curve;
}

inline double f1_max(const std::vector<PrRef>& curve) {
  double best = 0.0;
  for (const auto& p : curve) {
    if (p.precision + p.recall > 0.0) {
      best = std::max(best, 2.0 * p.precision * p.recall / (p.precision + p.recall));
    }
  }
  return best;
}

inline double extended_precision(const std::vector<PrRef>& curve) {
  const double p_r0 = curve.front().precision;  // strictest threshold
  double r_p100 = 0.0;
  for (const auto& p : curve) {
    if (p.precision == 1.0) r_p100 = std::max(r_p100, p.recall);
  }
  return 0.5 * (p_r0 + r_p100);
}

// Graph alignment score recomputed from a plain residual list.
inline double graph_similarity(const std::vector<double>& residuals) {
  const double sum = std::accumulate(residuals.begin(), residuals.end(), 0.0);
  return std::exp(-sum / static_cast<double>(residuals.size()));
}

// Half the sum of squared point-to-plane residuals n^T (T p_t - p_q) over a
// fixed correspondence list; the objective the plane stage linearizes.
struct PlaneCorrespondence {
  Eigen::Vector3d target = Eigen::Vector3d::Zero();
  Eigen::Vector3d query = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
};

inline double plane_objective(const semloop::PoseSE3& pose,
                              const std::vector<PlaneCorrespondence>& correspondences) {
  double total = 0.0;
  for (const auto& c : correspondences) {
    const double r = c.normal.dot(pose.apply(c.target) - c.query);
    total += 0.5 * r * r;
  }
  return total;
}

// Gradient of plane_objective with respect to a left-multiplied se(3)
// increment (omega, delta), by central finite differences.
inline Eigen::Matrix<double, 6, 1> plane_gradient_fd(
    const semloop::PoseSE3& pose, const std::vector<PlaneCorrespondence>& correspondences,
    double step = 1e-6) {
  Eigen::Matrix<double, 6, 1> grad;
  for (int k = 0; k < 6; ++k) {
    Eigen::Matrix<double, 6, 1> eps = Eigen::Matrix<double, 6, 1>::Zero();
    auto perturbed = [&](double sign) {
      eps(k) = sign * step;
      semloop::PoseSE3 p;
      const Eigen::Matrix3d dr = semloop::so3_exp(eps.head<3>());
      p.rotation = dr * pose.rotation;
      p.translation = dr * pose.translation + eps.tail<3>();
      return plane_objective(p, correspondences);
    };
    grad(k) = (perturbed(1.0) - perturbed(-1.0)) / (2.0 * step);
  }
  return grad;
}

// Sum of squared point-to-point residuals ||T s_i - d_i||^2; the objective
// each rigid-fit update minimizes over a fixed correspondence set.
inline double point_objective(const semloop::PoseSE3& pose,
                              const std::vector<Eigen::Vector3d>& source,
                              const std::vector<Eigen::Vector3d>& dest) {
  double total = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    total += (pose.apply(source[i]) - dest[i]).squaredNorm();
  }
  return total;
}

}  // namespace oracle
