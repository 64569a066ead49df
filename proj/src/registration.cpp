#include "semloop/registration.hpp"

#include "semloop/kdtree.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace semloop {

std::vector<Eigen::Vector3d> voxel_downsample(const std::vector<Eigen::Vector3d>& points,
                                              double voxel_size) {
  if (voxel_size <= 0.0) throw std::invalid_argument("voxel_downsample: voxel_size must be > 0");
  // Ordered map keyed by voxel coordinates keeps the output deterministic.
  struct Cell {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    int count = 0;
  };
  std::map<std::tuple<long long, long long, long long>, Cell> cells;
  for (const auto& p : points) {
    const auto key = std::make_tuple(static_cast<long long>(std::floor(p.x() / voxel_size)),
                                     static_cast<long long>(std::floor(p.y() / voxel_size)),
                                     static_cast<long long>(std::floor(p.z() / voxel_size)));
    auto& cell = cells[key];
    cell.sum += p;
    cell.count += 1;
  }
  std::vector<Eigen::Vector3d> out;
  out.reserve(cells.size());
  for (const auto& [key, cell] : cells) {
    out.push_back(cell.sum / cell.count);
  }
  return out;
}

NormalCloud estimate_normals(const std::vector<Eigen::Vector3d>& points, int neighbors,
                             double planarity_min) {
  if (neighbors < 3) throw std::invalid_argument("estimate_normals: neighbors must be >= 3");
  NormalCloud cloud;
  cloud.points = points;
  cloud.normals.assign(points.size(), Eigen::Vector3d::UnitZ());
  cloud.planarity.assign(points.size(), 0.0);
  cloud.usable.assign(points.size(), 0);

  const KdTree3 tree(points);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::vector<int> nn = tree.knn(points[i], neighbors);
    if (nn.size() < 3) continue;

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (const int j : nn) mean += points[j];
    mean /= static_cast<double>(nn.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const int j : nn) {
      const Eigen::Vector3d d = points[j] - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(nn.size());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    if (eig.info() != Eigen::Success) continue;
    // Ascending eigenvalues: l3 = ev(0) <= l2 = ev(1) <= l1 = ev(2).
    const Eigen::Vector3d ev = eig.eigenvalues();
    Eigen::Vector3d normal = eig.eigenvectors().col(0);
    if (normal.dot(points[i]) > 0.0) normal = -normal;  // face the sensor origin
    cloud.normals[i] = normal;
    cloud.planarity[i] = ev(2) > 1e-12 ? (ev(1) - ev(0)) / ev(2) : 0.0;
    cloud.usable[i] = cloud.planarity[i] >= planarity_min ? 1 : 0;
  }
  return cloud;
}

namespace {

double pose_delta_translation(const PoseSE3& a, const PoseSE3& b) {
  return (a.translation - b.translation).norm();
}

double pose_delta_rotation(const PoseSE3& a, const PoseSE3& b) {
  return rotation_angle(a.rotation.transpose() * b.rotation);
}

}  // namespace

std::pair<PoseSE3, StageReport> icp_instances(const std::vector<MatchedInstancePoints>& groups,
                                              const PoseSE3& t_init, const RefineConfig& config) {
  StageReport report;
  std::size_t populated = 0;
  for (const auto& g : groups) {
    if (!g.query.empty() && !g.target.empty()) ++populated;
  }
  if (populated < 3) {
    report.degraded = true;
    return {t_init, report};
  }

  // Query-side search structures are fixed; the target points move.
  std::vector<KdTree3> trees;
  trees.reserve(groups.size());
  for (const auto& g : groups) trees.emplace_back(g.query);

  PoseSE3 current = t_init;
  const double cap_sq = config.icp_max_correspondence * config.icp_max_correspondence;
  std::vector<Eigen::Vector3d> source, dest;
  for (int iter = 0; iter < config.icp_max_iterations; ++iter) {
    source.clear();
    dest.clear();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      for (const auto& pt : groups[g].target) {
        double sq = 0.0;
        const int j = trees[g].nearest(current.apply(pt), &sq);
        if (j < 0 || sq > cap_sq) continue;
        source.push_back(pt);
        dest.push_back(groups[g].query[j]);
      }
    }
    if (source.size() < 3) {
      report.degraded = true;
      return {t_init, report};
    }

    const PoseSE3 next = solve_rigid_procrustes(source, dest);
    ++report.iterations;

    double residual_sum = 0.0;
    for (std::size_t k = 0; k < source.size(); ++k) {
      residual_sum += (next.apply(source[k]) - dest[k]).norm();
    }
    report.mean_residual = residual_sum / static_cast<double>(source.size());

    const bool small_step =
        pose_delta_translation(current, next) < config.icp_pose_tolerance &&
        pose_delta_rotation(current, next) < config.icp_pose_tolerance;
    current = next;
    if (small_step) {
      report.converged = true;
      break;
    }
  }
  return {current, report};
}

std::pair<PoseSE3, StageReport> point_to_plane_refine(const NormalCloud& query,
                                                      const NormalCloud& target,
                                                      const PoseSE3& t_init,
                                                      const RefineConfig& config) {
  StageReport report;

  std::vector<Eigen::Vector3d> usable_points, usable_normals;
  for (std::size_t i = 0; i < query.points.size(); ++i) {
    if (!query.usable[i]) continue;
    usable_points.push_back(query.points[i]);
    usable_normals.push_back(query.normals[i]);
  }
  if (usable_points.size() < 6) {
    report.degraded = true;
    return {t_init, report};
  }
  const KdTree3 tree(usable_points);

  const double cap_sq = config.plane_max_correspondence * config.plane_max_correspondence;
  const double min_dot = std::cos(deg2rad(config.plane_normal_agreement_deg));

  PoseSE3 current = t_init;
  for (int iter = 0; iter < config.plane_max_iterations; ++iter) {
    Eigen::Matrix<double, 6, 6> h = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
    std::size_t count = 0;
    double residual_sum = 0.0;
    for (std::size_t i = 0; i < target.points.size(); ++i) {
      if (!target.usable[i]) continue;
      const Eigen::Vector3d moved = current.apply(target.points[i]);
      double sq = 0.0;
      const int j = tree.nearest(moved, &sq);
      if (j < 0 || sq > cap_sq) continue;
      const Eigen::Vector3d& n = usable_normals[j];
      // Sign conventions differ between the two sensor origins, so the
      // agreement gate ignores normal orientation.
      if (std::abs(n.dot(current.rotation * target.normals[i])) < min_dot) continue;

      const double r = n.dot(moved - usable_points[j]);
      Eigen::Matrix<double, 6, 1> jac;
      jac.head<3>() = moved.cross(n);
      jac.tail<3>() = n;
      h += jac * jac.transpose();
      g += jac * r;
      residual_sum += std::abs(r);
      ++count;
    }
    if (count < 6) {
      report.degraded = true;
      return {t_init, report};
    }
    report.mean_residual = residual_sum / static_cast<double>(count);

    // Truncated-SVD solve: directions with tiny singular values are
    // unobservable (e.g. sliding along a single plane) and stay untouched.
    Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(
        h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sing = svd.singularValues();
    const double cutoff = config.rank_ratio * sing(0);
    Eigen::Matrix<double, 6, 1> inv_sing = Eigen::Matrix<double, 6, 1>::Zero();
    for (int k = 0; k < 6; ++k) {
      if (sing(k) > cutoff) {
        inv_sing(k) = 1.0 / sing(k);
      } else {
        report.rank_deficient = true;
      }
    }
    const Eigen::Matrix<double, 6, 1> delta =
        -(svd.matrixV() * inv_sing.asDiagonal() * svd.matrixU().transpose() * g);

    const Eigen::Matrix3d dr = so3_exp(delta.head<3>());
    current.rotation = orthonormalized(dr * current.rotation);
    current.translation = dr * current.translation + delta.tail<3>();
    ++report.iterations;
    if (delta.norm() < config.plane_update_tolerance) {
      report.converged = true;
      break;
    }
  }
  return {current, report};
}

namespace {

std::vector<Eigen::Vector3d> instance_points(const SemanticScan& scan, const Instance& inst) {
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(inst.point_indices.size());
  for (const auto idx : inst.point_indices) pts.push_back(scan.points[idx]);
  return pts;
}

std::vector<Eigen::Vector3d> background_points(const SemanticScan& scan, const ClassMap& map) {
  std::vector<Eigen::Vector3d> pts;
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    if (scan.has_labels() && map.is_background(scan.labels[i])) pts.push_back(scan.points[i]);
  }
  return pts;
}

}  // namespace

RegistrationReport refine(const SemanticScan& query_scan,
                          const std::vector<Instance>& query_instances,
                          const SemanticScan& target_scan,
                          const std::vector<Instance>& target_instances,
                          const MatchSet& matches, const PoseSE3& t_coarse, const ClassMap& map,
                          const RefineConfig& config) {
  RegistrationReport report;
  report.t_coarse = t_coarse;

  std::vector<MatchedInstancePoints> groups;
  groups.reserve(matches.count());
  for (const auto& [qi, ti] : matches.pairs) {
    MatchedInstancePoints group;
    group.query = instance_points(query_scan, query_instances[qi]);
    group.target = instance_points(target_scan, target_instances[ti]);
    groups.push_back(std::move(group));
  }
  std::tie(report.t_icp, report.icp) = icp_instances(groups, t_coarse, config);

  const NormalCloud query_cloud = estimate_normals(
      voxel_downsample(background_points(query_scan, map), config.voxel_size),
      config.normal_neighbors, config.planarity_min);
  const NormalCloud target_cloud = estimate_normals(
      voxel_downsample(background_points(target_scan, map), config.voxel_size),
      config.normal_neighbors, config.planarity_min);
  std::tie(report.t_refine, report.plane) =
      point_to_plane_refine(query_cloud, target_cloud, report.t_icp, config);
  return report;
}

}  // namespace semloop
