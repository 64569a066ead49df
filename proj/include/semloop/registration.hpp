#pragma once

#include "semloop/geometry.hpp"
#include "semloop/types.hpp"
#include "semloop/verification.hpp"

#include <utility>
#include <vector>

namespace semloop {

struct RefineConfig {
  // Instance ICP stage
  double icp_max_correspondence = 1.0;  // m
  double icp_pose_tolerance = 1e-4;     // m and rad, applied to the pose delta
  int icp_max_iterations = 30;
  // Normal estimation
  int normal_neighbors = 10;
  double planarity_min = 0.4;
  // Point-to-plane stage
  double plane_max_correspondence = 0.5;   // m
  double plane_normal_agreement_deg = 10.0;
  double plane_update_tolerance = 1e-5;    // on the 6-vector increment norm
  int plane_max_iterations = 20;
  double rank_ratio = 1e-6;  // singular-value cutoff on the 6x6 normal equations
  // Background preprocessing
  double voxel_size = 0.2;  // m
};

struct StageReport {
  int iterations = 0;
  double mean_residual = 0.0;  // m, over the final correspondence set
  bool converged = false;      // stopped on tolerance, not the iteration cap
  bool degraded = false;       // stage fell back to its initialization
  bool rank_deficient = false; // plane stage: some direction was unobservable
};

struct RegistrationReport {
  PoseSE3 t_coarse;
  PoseSE3 t_icp;
  PoseSE3 t_refine;
  StageReport icp;
  StageReport plane;
};

// Points of one matched instance pair, each in its own sensor frame.
struct MatchedInstancePoints {
  std::vector<Eigen::Vector3d> query;
  std::vector<Eigen::Vector3d> target;
};

// Point cloud with per-point normals; `usable` marks points whose
// neighborhood was planar enough for the plane stage.
struct NormalCloud {
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> normals;
  std::vector<double> planarity;
  std::vector<char> usable;
};

// One representative (cell centroid) per occupied voxel, deterministic order.
std::vector<Eigen::Vector3d> voxel_downsample(const std::vector<Eigen::Vector3d>& points,
                                              double voxel_size);

// Covariance-based normals: eigenvector of the smallest eigenvalue of the
// k-neighborhood covariance; planarity = (l2 - l3) / l1 for eigenvalues
// l1 >= l2 >= l3; sign flipped to face the sensor origin.
NormalCloud estimate_normals(const std::vector<Eigen::Vector3d>& points, int neighbors,
                             double planarity_min);

// Dense ICP restricted to matched instance pairs: nearest neighbor inside the
// paired query instance, correspondence cap, closed-form rigid fit per
// iteration. Falls back to t_init (degraded) when correspondences run out.
std::pair<PoseSE3, StageReport> icp_instances(const std::vector<MatchedInstancePoints>& groups,
                                              const PoseSE3& t_init, const RefineConfig& config);

// Gauss-Newton on point-to-plane residuals n^T (T p_t - p_q) with a
// normal-agreement gate; rotation increments composed via the exponential
// map. Directions below the rank cutoff stay at t_init (rank_deficient set).
std::pair<PoseSE3, StageReport> point_to_plane_refine(const NormalCloud& query,
                                                      const NormalCloud& target,
                                                      const PoseSE3& t_init,
                                                      const RefineConfig& config);

// Full coarse-fine-refine chain for one accepted loop pair.
RegistrationReport refine(const SemanticScan& query_scan,
                          const std::vector<Instance>& query_instances,
                          const SemanticScan& target_scan,
                          const std::vector<Instance>& target_instances,
                          const MatchSet& matches, const PoseSE3& t_coarse, const ClassMap& map,
                          const RefineConfig& config);

}  // namespace semloop
