#pragma once

#include "semloop/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace semloop {

// Unordered pair of node class ids; the edge label. Order-normalized so
// (a,b) and (b,a) are the same category.
struct EdgeLabel {
  ClassId lo = 0;
  ClassId hi = 0;
  EdgeLabel() = default;
  EdgeLabel(ClassId a, ClassId b) : lo(std::min(a, b)), hi(std::max(a, b)) {}
  bool operator==(const EdgeLabel&) const = default;
};

// Fixed ordering of all unordered class pairs over the configured
// foreground classes, so histogram slots align across scans.
class EdgeCategoryTable {
 public:
  EdgeCategoryTable() = default;
  explicit EdgeCategoryTable(const std::vector<ClassId>& foreground_classes);

  int index_of(const EdgeLabel& label) const;     // -1 for unknown classes
  int class_slot(ClassId id) const;               // -1 for unknown classes
  int category_count() const { return static_cast<int>(categories_.size()); }
  int class_count() const { return static_cast<int>(classes_.size()); }
  const std::vector<ClassId>& classes() const { return classes_; }

 private:
  std::vector<ClassId> classes_;       // ascending
  std::vector<EdgeLabel> categories_;  // lexicographic over class pairs
};

struct GraphNode {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d box = Eigen::Vector3d::Zero();
  ClassId label = 0;
  Eigen::VectorXd descriptor;  // concat(f_l, f_g), filled by node_descriptors
};

struct GraphEdge {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  EdgeLabel label;
  double length = 0.0;
};

struct SemanticGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  Eigen::MatrixXd adjacency;  // N x N, 0/1, symmetric, zero diagonal

  std::size_t node_count() const { return nodes.size(); }
};

struct GraphParams {
  double d_max = 60.0;        // edge distance threshold, meters
  int length_bins = 12;       // histogram bins over [0, length_bins * bin_width)
  double bin_width = 5.0;     // meters per bin
  int spectral_k = 30;        // eigenvector embedding length

  int local_dim(const EdgeCategoryTable& table) const {
    return table.category_count() * length_bins;
  }
  int descriptor_dim(const EdgeCategoryTable& table) const {
    return local_dim(table) + spectral_k;
  }
};

// Nodes from instances, edges between every pair of centers closer than
// d_max, adjacency matrix to match.
SemanticGraph build_graph(const std::vector<Instance>& instances, double d_max);

// Histogram over (edge label category x length bin) of the edges incident
// to one node. Dimension: category_count * length_bins, category-major.
Eigen::VectorXd local_descriptor(const SemanticGraph& graph, std::size_t node_index,
                                 const EdgeCategoryTable& table, int length_bins,
                                 double bin_width);

// Eigendecomposition A = Q Lambda Q^T of a symmetric adjacency matrix,
// eigenvalues descending. Inside a degenerate eigenvalue block columns are
// ordered by descending l1 norm so the output is deterministic.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> adjacency_eigendecomposition(
    const Eigen::MatrixXd& adjacency);

// Spectral node embeddings from the adjacency eigendecomposition
// A = Q Lambda Q^T: row i of |Q|, restricted to the k columns of largest
// eigenvalue (descending), zero-padded when the graph has fewer nodes.
// Eigenvector signs are arbitrary, hence the absolute values. Columns of
// (numerically) zero eigenvalue contribute nothing to A and are zeroed,
// so isolated nodes embed as zero rows regardless of node order.
Eigen::MatrixXd global_embeddings(const SemanticGraph& graph, int k);

// Fills every node's descriptor with concat(f_l, f_g).
void node_descriptors(SemanticGraph& graph, const EdgeCategoryTable& table,
                      const GraphParams& params);

// Versioned binary graph record (node array + edge array).
void save_graph(const std::filesystem::path& path, const SemanticGraph& graph);
SemanticGraph load_graph(const std::filesystem::path& path);

}  // namespace semloop
