#pragma once

#include "semloop/types.hpp"

#include <vector>

namespace semloop {

// Single-linkage Euclidean clustering of the scan's points of one class:
// two points share a cluster iff a chain of same-class points connects
// them with consecutive gaps <= radius. Clusters below min_cluster_size
// are discarded. Output is canonical (member indices ascending, clusters
// ordered by first member), independent of input point order.
std::vector<Instance> cluster_class(const SemanticScan& scan, ClassId class_id, double radius,
                                    int min_cluster_size);

// Clusters every foreground class with its per-class radius.
std::vector<Instance> cluster_foreground(const SemanticScan& scan, const ClassMap& map);

// Centroid and axis-aligned extents (max - min per axis) of a point set.
void fit_box(const std::vector<Eigen::Vector3d>& points, Eigen::Vector3d& center,
             Eigen::Vector3d& box);

}  // namespace semloop
