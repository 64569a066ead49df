#pragma once

#include "semloop/geometry.hpp"
#include "semloop/graph.hpp"
#include "semloop/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace semloop {

struct BevParams {
  int rings = 20;
  int sectors = 60;
  double max_range = 80.0;  // meters, planar
};

// Polar BEV of the background points: per background class an R x S
// matrix of point counts, plus the rotation-invariant ring key (per-ring
// fraction of occupied sectors, per class).
struct BackgroundBEV {
  std::vector<Eigen::MatrixXd> grid;  // one R x S count matrix per class, class-map order
  Eigen::MatrixXd ring_key;           // R x C, entries in [0, 1]

  // Class-major concatenation of the count grids; layout is only required
  // to be consistent between the two sides of a cosine comparison.
  Eigen::VectorXd flattened_grid() const;
  Eigen::VectorXd flattened_ring_key() const;  // ring-major, R*C
};

// Per-scan retrieval descriptor F = normalize(F_f) ++ normalize(F_b).
struct ScanDescriptor {
  Eigen::VectorXd foreground;  // raw F_f: global edge histogram ++ per-class node counts
  Eigen::VectorXd background;  // raw F_b: flattened ring key
  Eigen::VectorXd fused;       // per-segment l2-normalized concatenation
};

// Histogram of all graph edges over (label category x length bin), then
// one node-count slot per foreground class.
Eigen::VectorXd foreground_descriptor(const SemanticGraph& graph, const EdgeCategoryTable& table,
                                      const GraphParams& params);

BackgroundBEV background_descriptor(const SemanticScan& scan, const ClassMap& map,
                                    const BevParams& params);

// Background BEV of the scan after transforming its points by `transform`
// (used to compare a candidate against the query after coarse alignment).
BackgroundBEV realign_background(const SemanticScan& scan, const PoseSE3& transform,
                                 const ClassMap& map, const BevParams& params);

// Per-segment l2 normalization, then concatenation. All-zero segments stay zero.
ScanDescriptor fuse(const Eigen::VectorXd& foreground, const Eigen::VectorXd& background);

// Cosine similarity; 0 when either vector has zero norm.
double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Versioned descriptor file: small header (dims R, S, C, D') followed by
// float32 records. Shared by single descriptors and the retrieval index.
struct DescriptorFileHeader {
  std::uint32_t rings = 0;
  std::uint32_t sectors = 0;
  std::uint32_t classes = 0;
  std::uint32_t dim = 0;
};

struct DescriptorRecord {
  std::uint32_t scan_id = 0;
  Eigen::VectorXd values;
};

void save_descriptor_file(const std::filesystem::path& path, const DescriptorFileHeader& header,
                          const std::vector<DescriptorRecord>& records);
std::pair<DescriptorFileHeader, std::vector<DescriptorRecord>> load_descriptor_file(
    const std::filesystem::path& path);

}  // namespace semloop
