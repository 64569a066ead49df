#pragma once

#include "semloop/geometry.hpp"
#include "semloop/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace semloop {

enum class ScanFormat { kKittiBin, kXyzText };

struct ScanLoadResult {
  SemanticScan scan;
  std::size_t dropped_nonfinite = 0;
};

// kitti_bin: little-endian float32 quadruples (x, y, z, intensity); the
// intensity channel is discarded. xyz_text: whitespace-separated "x y z"
// per line. Non-finite points are dropped and counted.
ScanLoadResult load_scan(const std::filesystem::path& path, ScanFormat format);

// Label records are little-endian uint32; the class id is the lower 16 bits.
std::vector<ClassId> load_labels(const std::filesystem::path& path);

void save_scan_kitti_bin(const std::filesystem::path& path, const SemanticScan& scan);
void save_labels(const std::filesystem::path& path, const std::vector<ClassId>& labels);

// Attaches labels to a geometry-only scan; throws DataError on size mismatch.
SemanticScan attach_labels(SemanticScan scan, std::vector<ClassId> labels);

// Removes points whose class is in the map's moving set.
SemanticScan drop_moving_points(const SemanticScan& scan, const ClassMap& map);

// Poses: ASCII, 12 whitespace-separated floats per line, row-major 3x4 [R|t].
// Rotations with drift above 1e-6 are projected back onto SO(3).
std::vector<PoseSE3> load_poses(const std::filesystem::path& path);
void save_poses(const std::filesystem::path& path, const std::vector<PoseSE3>& poses);

// Class map config: line-oriented text,
//   class <id> foreground <cluster_radius_m>
//   class <id> background
//   class <id> moving
//   min_cluster_size <n>
// '#' starts a comment.
ClassMap load_class_map(const std::filesystem::path& path);
void save_class_map(const std::filesystem::path& path, const ClassMap& map);

}  // namespace semloop
