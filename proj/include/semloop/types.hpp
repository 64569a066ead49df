#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace semloop {

// Raised on malformed on-disk data (scan/label/pose/config files).
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a numerical routine cannot produce a valid result.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ClassId = std::uint16_t;

// One LiDAR scan in the sensor frame. `labels` is either empty (geometry
// only) or has exactly one class id per point.
struct SemanticScan {
  std::vector<Eigen::Vector3d> points;
  std::vector<ClassId> labels;
  std::int64_t scan_id = -1;

  std::size_t size() const { return points.size(); }
  bool has_labels() const { return !labels.empty(); }
};

enum class ClassRole { kForeground, kBackground, kMoving };

// Maps class ids onto pipeline roles. Foreground classes become graph
// nodes, background classes feed the BEV descriptor and the plane stage,
// moving classes are dropped on ingest. Roles are pairwise disjoint.
struct ClassMap {
  struct Entry {
    ClassRole role = ClassRole::kBackground;
    double cluster_radius = 0.0;  // used by foreground classes only
  };

  std::map<ClassId, Entry> entries;
  int min_cluster_size = 10;

  void add(ClassId id, ClassRole role, double cluster_radius = 0.0) {
    if (entries.count(id)) {
      throw DataError("class map: duplicate class id " + std::to_string(id));
    }
    entries[id] = Entry{role, cluster_radius};
  }

  bool is_role(ClassId id, ClassRole role) const {
    auto it = entries.find(id);
    return it != entries.end() && it->second.role == role;
  }
  bool is_foreground(ClassId id) const { return is_role(id, ClassRole::kForeground); }
  bool is_background(ClassId id) const { return is_role(id, ClassRole::kBackground); }
  bool is_moving(ClassId id) const { return is_role(id, ClassRole::kMoving); }

  // Sorted ascending; fixes descriptor slot ordering across scans.
  std::vector<ClassId> foreground_classes() const { return classes_with(ClassRole::kForeground); }
  std::vector<ClassId> background_classes() const { return classes_with(ClassRole::kBackground); }
  std::vector<ClassId> moving_classes() const { return classes_with(ClassRole::kMoving); }

  double cluster_radius(ClassId id) const {
    auto it = entries.find(id);
    if (it == entries.end() || it->second.role != ClassRole::kForeground) {
      throw std::invalid_argument("cluster_radius: class " + std::to_string(id) +
                                  " is not a foreground class");
    }
    return it->second.cluster_radius;
  }

 private:
  std::vector<ClassId> classes_with(ClassRole role) const {
    std::vector<ClassId> out;
    for (const auto& [id, entry] : entries) {
      if (entry.role == role) out.push_back(id);
    }
    return out;  // std::map iterates in ascending key order
  }
};

// Class map used by the synthetic benchmark and the stock KITTI-style
// setup: vehicles/poles/trunks/lamps as nodes, four background classes.
ClassMap default_class_map();

// Clustered foreground object; the raw material for one graph node.
struct Instance {
  ClassId class_id = 0;
  std::vector<std::uint32_t> point_indices;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();   // centroid of members
  Eigen::Vector3d box = Eigen::Vector3d::Zero();      // axis-aligned extents (x, y, z)
  std::size_t point_count() const { return point_indices.size(); }
};

}  // namespace semloop
