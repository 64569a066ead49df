#include "semloop/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace semloop {

namespace {

// Packed 3D cell coordinate; 21 bits per axis centered at 2^20.
std::uint64_t cell_key(const Eigen::Vector3d& p, double cell) {
  const auto q = [cell](double v) {
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(v / cell)) + (1 << 20));
  };
  return (q(p.x()) << 42) | (q(p.y()) << 21) | q(p.z());
}

}  // namespace

std::vector<Instance> cluster_class(const SemanticScan& scan, ClassId class_id, double radius,
                                    int min_cluster_size) {
  if (radius <= 0.0) throw std::invalid_argument("cluster_class: radius must be positive");

  // Candidate point indices of the requested class, in scan order.
  std::vector<std::uint32_t> candidates;
  for (std::uint32_t i = 0; i < scan.points.size(); ++i) {
    if (!scan.has_labels() || scan.labels[i] == class_id) candidates.push_back(i);
  }
  if (candidates.empty()) return {};

  // Voxel hash with cell size = radius, so all neighbours within the
  // linkage radius live in the 27-cell block around a point.
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> grid;
  grid.reserve(candidates.size());
  for (std::uint32_t local = 0; local < candidates.size(); ++local) {
    grid[cell_key(scan.points[candidates[local]], radius)].push_back(local);
  }

  const double r2 = radius * radius;
  std::vector<std::int32_t> cluster_of(candidates.size(), -1);
  std::vector<std::vector<std::uint32_t>> clusters;
  std::vector<std::uint32_t> stack;

  for (std::uint32_t seed = 0; seed < candidates.size(); ++seed) {
    if (cluster_of[seed] >= 0) continue;
    const std::int32_t id = static_cast<std::int32_t>(clusters.size());
    clusters.emplace_back();
    stack.assign(1, seed);
    cluster_of[seed] = id;
    while (!stack.empty()) {
      const std::uint32_t cur = stack.back();
      stack.pop_back();
      clusters[id].push_back(candidates[cur]);
      const Eigen::Vector3d& p = scan.points[candidates[cur]];
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dz = -1; dz <= 1; ++dz) {
            const Eigen::Vector3d probe = p + radius * Eigen::Vector3d(dx, dy, dz);
            auto it = grid.find(cell_key(probe, radius));
            if (it == grid.end()) continue;
            for (std::uint32_t other : it->second) {
              if (cluster_of[other] >= 0) continue;
              if ((scan.points[candidates[other]] - p).squaredNorm() <= r2) {
                cluster_of[other] = id;
                stack.push_back(other);
              }
            }
          }
        }
      }
    }
  }

  std::vector<Instance> instances;
  for (auto& members : clusters) {
    if (static_cast<int>(members.size()) < min_cluster_size) continue;
    std::sort(members.begin(), members.end());
    Instance inst;
    inst.class_id = class_id;
    inst.point_indices = std::move(members);
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(inst.point_indices.size());
    for (std::uint32_t idx : inst.point_indices) pts.push_back(scan.points[idx]);
    fit_box(pts, inst.center, inst.box);
    instances.push_back(std::move(inst));
  }
  std::sort(instances.begin(), instances.end(), [](const Instance& a, const Instance& b) {
    return a.point_indices.front() < b.point_indices.front();
  });
  return instances;
}

std::vector<Instance> cluster_foreground(const SemanticScan& scan, const ClassMap& map) {
  std::vector<Instance> all;
  for (ClassId cls : map.foreground_classes()) {
    auto instances = cluster_class(scan, cls, map.cluster_radius(cls), map.min_cluster_size);
    all.insert(all.end(), std::make_move_iterator(instances.begin()),
               std::make_move_iterator(instances.end()));
  }
  return all;
}

void fit_box(const std::vector<Eigen::Vector3d>& points, Eigen::Vector3d& center,
             Eigen::Vector3d& box) {
  if (points.empty()) throw std::invalid_argument("fit_box: empty point set");
  Eigen::Vector3d lo = points.front();
  Eigen::Vector3d hi = points.front();
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
    sum += p;
  }
  center = sum / static_cast<double>(points.size());
  box = hi - lo;
}

}  // namespace semloop
