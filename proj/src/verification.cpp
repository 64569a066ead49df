#include "semloop/verification.hpp"

#include "semloop/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace semloop {

namespace {

// Relative per-axis extent difference, measured against the larger extent.
bool boxes_compatible(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double tolerance) {
  for (int axis = 0; axis < 3; ++axis) {
    const double larger = std::max({a(axis), b(axis), 1e-9});
    if (std::abs(a(axis) - b(axis)) / larger > tolerance) return false;
  }
  return true;
}

}  // namespace

Eigen::MatrixXd affinity_matrix(const SemanticGraph& query, const SemanticGraph& target,
                                double box_tolerance, double sentinel) {
  const Eigen::Index n = static_cast<Eigen::Index>(query.nodes.size());
  const Eigen::Index m = static_cast<Eigen::Index>(target.nodes.size());
  Eigen::MatrixXd cost(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& q = query.nodes[i];
    for (Eigen::Index j = 0; j < m; ++j) {
      const auto& t = target.nodes[j];
      if (q.label != t.label || !boxes_compatible(q.box, t.box, box_tolerance)) {
        cost(i, j) = sentinel;
        continue;
      }
      cost(i, j) = 1.0 - cosine_similarity(q.descriptor, t.descriptor);
    }
  }
  return cost;
}

MatchSet match_nodes(const Eigen::MatrixXd& affinity, double sentinel) {
  MatchSet matches;
  const std::vector<int> row_to_col = min_cost_assignment(affinity);
  for (std::size_t r = 0; r < row_to_col.size(); ++r) {
    const int c = row_to_col[r];
    if (c < 0) continue;
    if (affinity(static_cast<Eigen::Index>(r), c) >= sentinel) continue;
    matches.pairs.emplace_back(static_cast<int>(r), c);
  }
  return matches;
}

MatchSet prune_matches(const SemanticGraph& query, const SemanticGraph& target,
                       const MatchSet& matches, double radius, double side_tolerance,
                       int min_triangles) {
  const std::size_t n = matches.count();
  MatchSet kept;
  for (std::size_t k = 0; k < n; ++k) {
    const auto [qk, tk] = matches.pairs[k];
    const Eigen::Vector3d& cq = query.nodes[qk].center;
    const Eigen::Vector3d& ct = target.nodes[tk].center;

    std::vector<std::size_t> neighbors;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == k) continue;
      if ((query.nodes[matches.pairs[m].first].center - cq).norm() <= radius) {
        neighbors.push_back(m);
      }
    }
    if (neighbors.size() < 2) {
      kept.pairs.push_back(matches.pairs[k]);  // too little evidence to reject
      continue;
    }

    int consistent = 0;
    for (std::size_t a = 0; a < neighbors.size() && consistent < min_triangles; ++a) {
      for (std::size_t b = a + 1; b < neighbors.size() && consistent < min_triangles; ++b) {
        const auto [qa, ta] = matches.pairs[neighbors[a]];
        const auto [qb, tb] = matches.pairs[neighbors[b]];
        const Eigen::Vector3d& cqa = query.nodes[qa].center;
        const Eigen::Vector3d& cqb = query.nodes[qb].center;
        const Eigen::Vector3d& cta = target.nodes[ta].center;
        const Eigen::Vector3d& ctb = target.nodes[tb].center;
        const bool sides_match =
            std::abs((cq - cqa).norm() - (ct - cta).norm()) <= side_tolerance &&
            std::abs((cq - cqb).norm() - (ct - ctb).norm()) <= side_tolerance &&
            std::abs((cqa - cqb).norm() - (cta - ctb).norm()) <= side_tolerance;
        if (sides_match) ++consistent;
      }
    }
    if (consistent >= min_triangles) kept.pairs.push_back(matches.pairs[k]);
  }
  return kept;
}

namespace {

// Uniform integer in [0, n) from a 64-bit generator; rejection sampling keeps
// the draw unbiased and the sequence identical for a given seed everywhere.
std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % n;
}

int count_inliers(const MatchSet& matches, const SemanticGraph& query,
                  const SemanticGraph& target, const PoseSE3& t, double threshold,
                  std::vector<std::size_t>* inlier_indices) {
  inlier_indices->clear();
  for (std::size_t k = 0; k < matches.count(); ++k) {
    const auto [qi, ti] = matches.pairs[k];
    const double residual =
        (t.apply(target.nodes[ti].center) - query.nodes[qi].center).norm();
    if (residual <= threshold) inlier_indices->push_back(k);
  }
  return static_cast<int>(inlier_indices->size());
}

PoseSE3 fit_pairs(const MatchSet& matches, const std::vector<std::size_t>& subset,
                  const SemanticGraph& query, const SemanticGraph& target) {
  std::vector<Eigen::Vector3d> source, dest;
  source.reserve(subset.size());
  dest.reserve(subset.size());
  for (const std::size_t k : subset) {
    const auto [qi, ti] = matches.pairs[k];
    source.push_back(target.nodes[ti].center);  // candidate frame
    dest.push_back(query.nodes[qi].center);     // query frame
  }
  return solve_rigid_procrustes(source, dest);
}

}  // namespace

RansacResult ransac_svd(const MatchSet& matches, const SemanticGraph& query,
                        const SemanticGraph& target, int iterations, double inlier_threshold,
                        std::uint64_t seed) {
  const std::size_t n = matches.count();
  if (n < 3) {
    throw NumericalError("ransac_svd: insufficient matches (" + std::to_string(n) +
                         " < 3)");
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> sample(3), inliers, best_inliers;
  for (int iter = 0; iter < iterations; ++iter) {
    sample[0] = bounded_draw(rng, n);
    do {
      sample[1] = bounded_draw(rng, n);
    } while (sample[1] == sample[0]);
    do {
      sample[2] = bounded_draw(rng, n);
    } while (sample[2] == sample[0] || sample[2] == sample[1]);

    const auto& q0 = query.nodes[matches.pairs[sample[0]].first].center;
    const auto& q1 = query.nodes[matches.pairs[sample[1]].first].center;
    const auto& q2 = query.nodes[matches.pairs[sample[2]].first].center;
    const auto& t0 = target.nodes[matches.pairs[sample[0]].second].center;
    const auto& t1 = target.nodes[matches.pairs[sample[1]].second].center;
    const auto& t2 = target.nodes[matches.pairs[sample[2]].second].center;
    if (!spans_triangle(q0, q1, q2) || !spans_triangle(t0, t1, t2)) continue;

    const PoseSE3 model = fit_pairs(matches, sample, query, target);
    count_inliers(matches, query, target, model, inlier_threshold, &inliers);
    if (inliers.size() > best_inliers.size()) best_inliers = inliers;
  }

  if (best_inliers.size() < 3) {
    throw NumericalError("ransac_svd: no model with >= 3 inliers");
  }

  RansacResult result;
  result.transform = fit_pairs(matches, best_inliers, query, target);
  for (const std::size_t k : best_inliers) result.inliers.pairs.push_back(matches.pairs[k]);
  return result;
}

double graph_similarity(const MatchSet& inliers, const SemanticGraph& query,
                        const SemanticGraph& target, const PoseSE3& transform) {
  const std::size_t u = inliers.count();
  if (u == 0) throw std::invalid_argument("graph_similarity: no inliers");
  double sum = 0.0;
  for (const auto& [qi, ti] : inliers.pairs) {
    sum += (transform.apply(target.nodes[ti].center) - query.nodes[qi].center).norm();
  }
  return std::exp(-sum / static_cast<double>(u));
}

VerificationResult verify(const BackgroundBEV& query_bev, const SemanticGraph& query_graph,
                          const SemanticScan& candidate_scan,
                          const SemanticGraph& candidate_graph, const ClassMap& map,
                          const BevParams& bev_params, const VerificationConfig& config) {
  VerificationResult result;

  const Eigen::MatrixXd affinity = affinity_matrix(query_graph, candidate_graph,
                                                   config.box_tolerance,
                                                   config.affinity_sentinel);
  const MatchSet matches = match_nodes(affinity, config.affinity_sentinel);
  const MatchSet pruned =
      prune_matches(query_graph, candidate_graph, matches, config.prune_radius,
                    config.prune_side_tolerance, config.prune_min_triangles);
  if (pruned.count() < 3) {
    result.reason = "insufficient matches after pruning (" + std::to_string(pruned.count()) +
                    " < 3)";
    return result;
  }

  RansacResult coarse;
  try {
    coarse = ransac_svd(pruned, query_graph, candidate_graph, config.ransac_iterations,
                        config.ransac_inlier_threshold, config.ransac_seed);
  } catch (const NumericalError& e) {
    result.reason = e.what();
    return result;
  }

  result.t_coarse = coarse.transform;
  result.inliers = coarse.inliers;
  result.s_graph = graph_similarity(coarse.inliers, query_graph, candidate_graph,
                                    coarse.transform);

  const BackgroundBEV realigned =
      realign_background(candidate_scan, coarse.transform, map, bev_params);
  result.s_background =
      cosine_similarity(query_bev.flattened_grid(), realigned.flattened_grid());

  const bool enough_inliers = result.inlier_count() >= 3;
  result.accepted = result.s_graph >= config.theta_graph &&
                    result.s_background >= config.theta_background && enough_inliers;
  if (result.accepted) {
    result.reason = "ok";
  } else if (result.s_graph < config.theta_graph) {
    result.reason = "graph similarity below threshold";
  } else if (result.s_background < config.theta_background) {
    result.reason = "background similarity below threshold";
  } else {
    result.reason = "too few inliers";
  }
  return result;
}

VerificationResult verify(const SemanticScan& query_scan, const SemanticGraph& query_graph,
                          const SemanticScan& candidate_scan,
                          const SemanticGraph& candidate_graph, const ClassMap& map,
                          const BevParams& bev_params, const VerificationConfig& config) {
  const BackgroundBEV query_bev = background_descriptor(query_scan, map, bev_params);
  return verify(query_bev, query_graph, candidate_scan, candidate_graph, map, bev_params,
                config);
}

}  // namespace semloop
