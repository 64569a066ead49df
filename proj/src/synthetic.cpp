#include "semloop/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace semloop {

namespace {

// Class ids follow default_class_map().
constexpr ClassId kCar = 10;
constexpr ClassId kRoad = 40;
constexpr ClassId kBuilding = 50;
constexpr ClassId kFence = 51;
constexpr ClassId kVegetation = 70;
constexpr ClassId kTrunk = 71;
constexpr ClassId kPole = 80;
constexpr ClassId kLamp = 99;

void add_point(SyntheticScene* scene, const Eigen::Vector3d& p, ClassId label, int instance) {
  scene->points.push_back(p);
  scene->labels.push_back(label);
  scene->instance_ids.push_back(instance);
}

// Lateral surface of a vertical cylinder, ring by ring.
void sample_cylinder(SyntheticScene* scene, const Eigen::Vector2d& center, double radius,
                     double z0, double z1, double spacing, double angle_offset, ClassId label,
                     int instance) {
  const int rings = std::max(2, static_cast<int>(std::ceil((z1 - z0) / spacing)) + 1);
  const int per_ring = std::max(3, static_cast<int>(std::ceil(2.0 * M_PI * radius / spacing)));
  for (int r = 0; r < rings; ++r) {
    const double z = z0 + (z1 - z0) * r / (rings - 1);
    for (int a = 0; a < per_ring; ++a) {
      const double ang = angle_offset + 2.0 * M_PI * a / per_ring;
      add_point(scene,
                {center.x() + radius * std::cos(ang), center.y() + radius * std::sin(ang), z},
                label, instance);
    }
  }
}

// Evenly spaced samples over a planar patch spanned by (du, dv) from `origin`.
void sample_patch(SyntheticScene* scene, const Eigen::Vector3d& origin,
                  const Eigen::Vector3d& du, const Eigen::Vector3d& dv, double spacing,
                  ClassId label, int instance) {
  const int nu = std::max(2, static_cast<int>(std::ceil(du.norm() / spacing)) + 1);
  const int nv = std::max(2, static_cast<int>(std::ceil(dv.norm() / spacing)) + 1);
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      add_point(scene,
                origin + du * (static_cast<double>(i) / (nu - 1)) +
                    dv * (static_cast<double>(j) / (nv - 1)),
                label, instance);
    }
  }
}

// Box shell (four sides + top, no bottom), centered at (cx, cy), sitting on
// the ground, rotated by `yaw`.
void sample_box_shell(SyntheticScene* scene, const Eigen::Vector2d& center,
                      const Eigen::Vector3d& size, double yaw, double spacing, ClassId label,
                      int instance) {
  const Eigen::Vector3d ex(std::cos(yaw), std::sin(yaw), 0.0);
  const Eigen::Vector3d ey(-std::sin(yaw), std::cos(yaw), 0.0);
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d base(center.x(), center.y(), 0.0);
  const Eigen::Vector3d hx = ex * (size.x() / 2.0);
  const Eigen::Vector3d hy = ey * (size.y() / 2.0);
  const Eigen::Vector3d up = ez * size.z();

  sample_patch(scene, base - hx - hy, hx * 2.0, up, spacing, label, instance);        // -y side
  sample_patch(scene, base - hx + hy, hx * 2.0, up, spacing, label, instance);        // +y side
  sample_patch(scene, base - hx - hy, hy * 2.0, up, spacing, label, instance);        // -x side
  sample_patch(scene, base + hx - hy, hy * 2.0, up, spacing, label, instance);        // +x side
  sample_patch(scene, base - hx - hy + up, hx * 2.0, hy * 2.0, spacing, label, instance);  // top
}

struct Placement {
  Eigen::Vector2d xy;
  double footprint;  // m, for the pairwise separation check
};

}  // namespace

PoseSE3 yaw_pose(double x, double y, double z, double yaw) {
  PoseSE3 pose;
  pose.rotation = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  pose.translation = {x, y, z};
  return pose;
}

SyntheticScene generate_scene(const SceneSpec& spec) {
  if (spec.extent <= 0.0) throw std::invalid_argument("generate_scene: extent must be > 0");
  if (spec.noise_sigma < 0.0) throw std::invalid_argument("generate_scene: negative noise");
  if (spec.poles < 0 || spec.trunks < 0 || spec.vehicles < 0 || spec.lamps < 0 ||
      spec.walls < 0 || spec.vegetation < 0) {
    throw std::invalid_argument("generate_scene: negative object count");
  }

  SyntheticScene scene;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double half = spec.extent / 2.0;
  std::vector<Placement> placements;
  // Rejection-sampled placement keeping objects apart so clusters stay separable.
  const auto place = [&](double footprint) -> Placement {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      Placement p{{(unit(rng) * 2.0 - 1.0) * (half - footprint),
                   (unit(rng) * 2.0 - 1.0) * (half - footprint)},
                  footprint};
      bool ok = true;
      for (const auto& other : placements) {
        if ((other.xy - p.xy).norm() < other.footprint + p.footprint + 1.5) {
          ok = false;
          break;
        }
      }
      if (ok) {
        placements.push_back(p);
        return p;
      }
    }
    throw NumericalError("generate_scene: could not place an object without overlap");
  };

  const auto new_instance = [&scene](ClassId cls) {
    scene.instance_classes.push_back(cls);
    return static_cast<int>(scene.instance_classes.size()) - 1;
  };

  for (int i = 0; i < spec.poles; ++i) {
    const Placement p = place(0.15);
    sample_cylinder(&scene, p.xy, 0.15, 0.0, 4.0, spec.foreground_spacing,
                    unit(rng) * 2.0 * M_PI, kPole, new_instance(kPole));
  }
  for (int i = 0; i < spec.trunks; ++i) {
    const Placement p = place(0.25);
    sample_cylinder(&scene, p.xy, 0.25, 0.0, 3.0, spec.foreground_spacing,
                    unit(rng) * 2.0 * M_PI, kTrunk, new_instance(kTrunk));
  }
  for (int i = 0; i < spec.vehicles; ++i) {
    const Placement p = place(2.4);
    sample_box_shell(&scene, p.xy, {4.5, 1.8, 1.6}, unit(rng) * 2.0 * M_PI,
                     spec.vehicle_spacing, kCar, new_instance(kCar));
  }
  for (int i = 0; i < spec.lamps; ++i) {
    const Placement p = place(0.3);
    const int id = new_instance(kLamp);
    const double ang = unit(rng) * 2.0 * M_PI;
    sample_cylinder(&scene, p.xy, 0.10, 0.0, 4.5, spec.foreground_spacing, ang, kLamp, id);
    sample_cylinder(&scene, p.xy, 0.30, 4.5, 4.9, spec.foreground_spacing, ang, kLamp, id);
  }

  for (int i = 0; i < spec.walls; ++i) {
    const double cx = (unit(rng) * 2.0 - 1.0) * half;
    const double cy = (unit(rng) * 2.0 - 1.0) * half;
    const double length = 8.0 + unit(rng) * 6.0;
    const double height = 2.5 + unit(rng);
    const double ang = unit(rng) * M_PI;
    const Eigen::Vector3d dir(std::cos(ang), std::sin(ang), 0.0);
    const Eigen::Vector3d start =
        Eigen::Vector3d(cx, cy, 0.0) - dir * (length / 2.0);
    sample_patch(&scene, start, dir * length, Eigen::Vector3d(0, 0, height),
                 spec.wall_spacing, i % 2 == 0 ? kBuilding : kFence, -1);
  }

  if (spec.ground) {
    // Randomized footprint so unrelated scenes do not share ground structure.
    const double hx = 12.5 + unit(rng) * 7.5;
    const double hy = 12.5 + unit(rng) * 7.5;
    const double ox = (unit(rng) * 2.0 - 1.0) * 5.0;
    const double oy = (unit(rng) * 2.0 - 1.0) * 5.0;
    sample_patch(&scene, {ox - hx, oy - hy, 0.0}, {2.0 * hx, 0.0, 0.0}, {0.0, 2.0 * hy, 0.0},
                 spec.ground_spacing, kRoad, -1);
  }

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < spec.vegetation; ++i) {
    const double cx = (unit(rng) * 2.0 - 1.0) * half;
    const double cy = (unit(rng) * 2.0 - 1.0) * half;
    for (int j = 0; j < 150; ++j) {
      add_point(&scene,
                {cx + gauss(rng) * 0.8, cy + gauss(rng) * 0.8, 1.0 + gauss(rng) * 0.6},
                kVegetation, -1);
    }
  }

  return scene;
}

ScenePair observe_pair(const SyntheticScene& scene, const PoseSE3& pose_a,
                       const PoseSE3& pose_b, double max_range, double noise_sigma,
                       std::uint64_t noise_seed) {
  if (max_range <= 0.0) throw std::invalid_argument("observe_pair: max_range must be > 0");
  if (noise_sigma < 0.0) throw std::invalid_argument("observe_pair: negative noise");

  ScenePair pair;
  pair.t_gt = pose_a.inverse().compose(pose_b);

  std::mt19937_64 rng(noise_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto observe = [&](const PoseSE3& pose, SemanticScan* scan, std::vector<int>* ids) {
    const PoseSE3 world_to_sensor = pose.inverse();
    for (std::size_t i = 0; i < scene.points.size(); ++i) {
      if ((scene.points[i] - pose.translation).norm() > max_range) continue;
      Eigen::Vector3d p = world_to_sensor.apply(scene.points[i]);
      if (noise_sigma > 0.0) {
        p += noise_sigma * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
      }
      scan->points.push_back(p);
      scan->labels.push_back(scene.labels[i]);
      ids->push_back(scene.instance_ids[i]);
    }
  };
  observe(pose_a, &pair.scan_a, &pair.instance_ids_a);
  observe(pose_b, &pair.scan_b, &pair.instance_ids_b);
  return pair;
}

}  // namespace semloop
