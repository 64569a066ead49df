#pragma once

// Shared test scaffolding: temp directories, seeded random geometry, and
// small builders for scans and graphs.

#include "semloop/clustering.hpp"
#include "semloop/geometry.hpp"
#include "semloop/graph.hpp"
#include "semloop/types.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace testutil {

// Self-cleaning directory under the system temp root.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("semloop_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline semloop::PoseSE3 random_pose(std::mt19937_64& rng, double translation_scale) {
  std::uniform_real_distribution<double> uni(-translation_scale, translation_scale);
  semloop::PoseSE3 pose;
  pose.rotation = random_rotation(rng);
  pose.translation = Eigen::Vector3d(uni(rng), uni(rng), uni(rng));
  return pose;
}

inline Eigen::Vector3d random_point(std::mt19937_64& rng, double half_extent) {
  std::uniform_real_distribution<double> uni(-half_extent, half_extent);
  return {uni(rng), uni(rng), uni(rng)};
}

inline semloop::SemanticScan make_scan(std::vector<Eigen::Vector3d> points,
                                       std::vector<semloop::ClassId> labels,
                                       std::int64_t id = 0) {
  semloop::SemanticScan scan;
  scan.points = std::move(points);
  scan.labels = std::move(labels);
  scan.scan_id = id;
  return scan;
}

// Instance with an explicit center/box, no member points (enough for graph
// and matching tests that never touch the raw cloud).
inline semloop::Instance make_instance(const Eigen::Vector3d& center, semloop::ClassId label,
                                       const Eigen::Vector3d& box = {1.0, 1.0, 1.0}) {
  semloop::Instance inst;
  inst.class_id = label;
  inst.center = center;
  inst.box = box;
  return inst;
}

// Graph over explicit centers/labels with node descriptors filled in.
inline semloop::SemanticGraph make_graph(const std::vector<Eigen::Vector3d>& centers,
                                         const std::vector<semloop::ClassId>& labels,
                                         const semloop::EdgeCategoryTable& table,
                                         const semloop::GraphParams& params) {
  std::vector<semloop::Instance> instances;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    instances.push_back(make_instance(centers[i], labels[i]));
  }
  semloop::SemanticGraph graph = semloop::build_graph(instances, params.d_max);
  semloop::node_descriptors(graph, table, params);
  return graph;
}

// Random mixed-class node centers spread far enough apart to cluster apart.
inline std::vector<Eigen::Vector3d> scattered_centers(std::mt19937_64& rng, int count,
                                                      double half_extent) {
  std::vector<Eigen::Vector3d> centers;
  while (static_cast<int>(centers.size()) < count) {
    Eigen::Vector3d c = random_point(rng, half_extent);
    c.z() = std::abs(c.z()) * 0.1;
    bool clear = true;
    for (const auto& other : centers) {
      if ((other - c).norm() < 2.0) {
        clear = false;
        break;
      }
    }
    if (clear) centers.push_back(c);
  }
  return centers;
}

// Centers along a jittered chain whose consecutive gaps sit inside (d_max/2,
// d_max) while all other pairs stay beyond d_max, so the induced graph is a
// path. Path adjacency spectra are always simple, which keeps spectral
// embeddings basis-stable for invariance checks.
inline std::vector<Eigen::Vector3d> chain_centers(std::mt19937_64& rng, int count,
                                                  double d_max) {
  std::uniform_real_distribution<double> gap(0.72 * d_max, 0.88 * d_max);
  std::uniform_real_distribution<double> jitter(-0.02 * d_max, 0.02 * d_max);
  std::vector<Eigen::Vector3d> centers;
  double x = jitter(rng);
  for (int i = 0; i < count; ++i) {
    centers.emplace_back(x, jitter(rng), std::abs(jitter(rng)));
    x += gap(rng);
  }
  return centers;
}

// True when all adjacency eigenvalue gaps exceed `gap` (unique spectrum, so
// spectral embeddings are basis-stable for invariance checks).
inline bool simple_spectrum(const Eigen::MatrixXd& adjacency, double gap = 1e-6) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency);
  const auto& ev = solver.eigenvalues();
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (ev(i) - ev(i - 1) < gap) return false;
  }
  return true;
}

}  // namespace testutil
