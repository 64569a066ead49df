#pragma once

#include "semloop/geometry.hpp"
#include "semloop/types.hpp"

#include <cstdint>
#include <vector>

namespace semloop {

// Parameters of one randomized synthetic scene. Objects are placed without
// overlap inside a square of side `extent` centered on the origin; the
// ground rectangle and the walls are randomized per seed so two scenes with
// different seeds share no structure.
struct SceneSpec {
  int poles = 12;
  int trunks = 10;
  int vehicles = 6;
  int lamps = 5;
  int walls = 8;        // vertical rectangles, alternating building/fence
  int vegetation = 3;   // fuzzy blobs
  bool ground = true;   // one horizontal rectangle, randomized size/offset
  double extent = 70.0;       // m, object placement area side length
  double noise_sigma = 0.0;   // per-view per-axis Gaussian noise, m
  std::uint64_t seed = 0;

  // Surface sampling densities (approximate point spacing, m).
  double foreground_spacing = 0.18;
  double vehicle_spacing = 0.3;
  double wall_spacing = 0.35;
  double ground_spacing = 0.8;
};

// World-frame scene with per-point ground truth.
struct SyntheticScene {
  std::vector<Eigen::Vector3d> points;  // noise-free, world frame
  std::vector<ClassId> labels;
  std::vector<int> instance_ids;        // index into instance_classes, -1 = background
  std::vector<ClassId> instance_classes;
};

// Two views of one scene with the relative ground truth. `t_gt` maps
// scan_b-frame points into scan_a's frame.
struct ScenePair {
  SemanticScan scan_a;
  SemanticScan scan_b;
  std::vector<int> instance_ids_a;  // per point, -1 = background
  std::vector<int> instance_ids_b;
  PoseSE3 t_gt;
};

// Deterministic per spec.seed: same spec, same bytes.
SyntheticScene generate_scene(const SceneSpec& spec);

// Sensor pose with the given yaw at height z (world <- sensor).
PoseSE3 yaw_pose(double x, double y, double z, double yaw);

// Both views see every scene point within `max_range` of their origin (no
// occlusion); each view gets its own noise draw from `noise_seed`.
ScenePair observe_pair(const SyntheticScene& scene, const PoseSE3& pose_a,
                       const PoseSE3& pose_b, double max_range, double noise_sigma,
                       std::uint64_t noise_seed);

}  // namespace semloop
