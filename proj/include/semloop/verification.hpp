#pragma once

#include "semloop/descriptor.hpp"
#include "semloop/geometry.hpp"
#include "semloop/graph.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace semloop {

// One-to-one node correspondences between a query and a target graph.
struct MatchSet {
  std::vector<std::pair<int, int>> pairs;  // (query node, target node)
  std::size_t count() const { return pairs.size(); }
};

struct VerificationConfig {
  double box_tolerance = 0.3;          // max relative per-axis extent difference
  double affinity_sentinel = 1e8;      // cost for incompatible node pairs
  double prune_radius = 20.0;          // neighbor radius for triangle pruning, m
  double prune_side_tolerance = 0.5;   // max side-length difference, m
  int prune_min_triangles = 1;         // consistent triangles needed to survive
  int ransac_iterations = 1000;
  double ransac_inlier_threshold = 0.5;  // m
  std::uint64_t ransac_seed = 0;
  double theta_graph = 0.58;       // acceptance threshold on S_graph
  double theta_background = 0.7;   // acceptance threshold on S_background
};

struct VerificationResult {
  bool accepted = false;
  PoseSE3 t_coarse;         // maps candidate-frame points into the query frame
  double s_graph = 0.0;     // in (0, 1]
  double s_background = 0.0;  // cosine, in [-1, 1]
  MatchSet inliers;
  std::string reason;  // "ok" or why the pair was rejected

  std::size_t inlier_count() const { return inliers.count(); }
};

// Node assignment cost: 1 - cos(f_q, f_t) when labels match and box extents
// are compatible (relative difference per axis <= tolerance), else the sentinel.
Eigen::MatrixXd affinity_matrix(const SemanticGraph& query, const SemanticGraph& target,
                                double box_tolerance, double sentinel = 1e8);

// Minimum-cost one-to-one assignment over the affinity matrix; sentinel-cost
// pairs are dropped from the result.
MatchSet match_nodes(const Eigen::MatrixXd& affinity, double sentinel = 1e8);

// Triangle-consistency filter. A pair survives when, among triangles it forms
// with two of its matched neighbors (query-side centers within `radius`), at
// least `min_triangles` have all three side lengths preserved within
// `side_tolerance` on the target side. Pairs with fewer than two matched
// neighbors survive by default. Single simultaneous pass over the input set.
MatchSet prune_matches(const SemanticGraph& query, const SemanticGraph& target,
                       const MatchSet& matches, double radius, double side_tolerance,
                       int min_triangles);

struct RansacResult {
  PoseSE3 transform;  // candidate frame -> query frame
  MatchSet inliers;
};

// RANSAC over node-center correspondences: 3-pair samples (degenerate,
// collinear triangles skipped), closed-form rigid fit, inliers by center
// residual, best model refit on its inlier set. Deterministic per seed.
// Throws NumericalError when matches.count() < 3 or no valid model is found.
RansacResult ransac_svd(const MatchSet& matches, const SemanticGraph& query,
                        const SemanticGraph& target, int iterations, double inlier_threshold,
                        std::uint64_t seed);

// S_graph = exp(-(sum of inlier center residuals under T) / u).
double graph_similarity(const MatchSet& inliers, const SemanticGraph& query,
                        const SemanticGraph& target, const PoseSE3& transform);

// Full pipeline step: match -> prune -> RANSAC -> similarity thresholds.
// The query's own background grid is passed in so one query can be checked
// against many candidates without recomputing it.
VerificationResult verify(const BackgroundBEV& query_bev, const SemanticGraph& query_graph,
                          const SemanticScan& candidate_scan,
                          const SemanticGraph& candidate_graph, const ClassMap& map,
                          const BevParams& bev_params, const VerificationConfig& config);

// Convenience overload computing the query grid in place.
VerificationResult verify(const SemanticScan& query_scan, const SemanticGraph& query_graph,
                          const SemanticScan& candidate_scan,
                          const SemanticGraph& candidate_graph, const ClassMap& map,
                          const BevParams& bev_params, const VerificationConfig& config);

}  // namespace semloop
