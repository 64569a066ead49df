#include "semloop/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace semloop {

EdgeCategoryTable::EdgeCategoryTable(const std::vector<ClassId>& foreground_classes)
    : classes_(foreground_classes) {
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  for (std::size_t a = 0; a < classes_.size(); ++a) {
    for (std::size_t b = a; b < classes_.size(); ++b) {
      categories_.emplace_back(classes_[a], classes_[b]);
    }
  }
}

int EdgeCategoryTable::index_of(const EdgeLabel& label) const {
  for (std::size_t i = 0; i < categories_.size(); ++i) {
    if (categories_[i] == label) return static_cast<int>(i);
  }
  return -1;
}

int EdgeCategoryTable::class_slot(ClassId id) const {
  auto it = std::lower_bound(classes_.begin(), classes_.end(), id);
  if (it == classes_.end() || *it != id) return -1;
  return static_cast<int>(it - classes_.begin());
}

SemanticGraph build_graph(const std::vector<Instance>& instances, double d_max) {
  if (d_max <= 0.0) throw std::invalid_argument("build_graph: d_max must be positive");

  SemanticGraph graph;
  const std::size_t n = instances.size();
  graph.nodes.reserve(n);
  for (const auto& inst : instances) {
    GraphNode node;
    node.center = inst.center;
    node.box = inst.box;
    node.label = inst.class_id;
    graph.nodes.push_back(std::move(node));
  }

  graph.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = (graph.nodes[i].center - graph.nodes[j].center).norm();
      if (d < d_max) {
        graph.edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                               EdgeLabel(graph.nodes[i].label, graph.nodes[j].label), d});
        graph.adjacency(i, j) = 1.0;
        graph.adjacency(j, i) = 1.0;
      }
    }
  }
  return graph;
}

namespace {

int length_bin(double length, int bins, double bin_width) {
  const int bin = static_cast<int>(length / bin_width);
  return std::min(bin, bins - 1);
}

}  // namespace

Eigen::VectorXd local_descriptor(const SemanticGraph& graph, std::size_t node_index,
                                 const EdgeCategoryTable& table, int length_bins,
                                 double bin_width) {
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(table.category_count() * length_bins);
  for (const auto& edge : graph.edges) {
    if (edge.i != node_index && edge.j != node_index) continue;
    const int cat = table.index_of(edge.label);
    if (cat < 0) continue;
    hist(cat * length_bins + length_bin(edge.length, length_bins, bin_width)) += 1.0;
  }
  return hist;
}

namespace {

// Eigenvalues within this of each other form one degenerate block, and
// eigenvalues within this of zero are treated as exact zeros.
constexpr double kSpectrumTol = 1e-9;

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::VectorXd> adjacency_eigendecomposition(
    const Eigen::MatrixXd& adjacency) {
  const Eigen::Index n = adjacency.rows();
  if (n == 0) throw std::invalid_argument("adjacency_eigendecomposition: empty matrix");
  if (adjacency.cols() != n) {
    throw std::invalid_argument("adjacency_eigendecomposition: matrix not square");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adjacency);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("adjacency eigendecomposition did not converge (N = " +
                         std::to_string(n) + ")");
  }

  // Eigen returns eigenvalues ascending; we want them descending.
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());

  // Inside a degenerate block the eigenvector basis is arbitrary; order
  // those columns by descending l1 norm to pin the output.
  const auto& evals = solver.eigenvalues();
  const auto& evecs = solver.eigenvectors();
  std::size_t block_start = 0;
  auto l1 = [&](Eigen::Index col) { return evecs.col(col).cwiseAbs().sum(); };
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i == order.size() ||
        std::abs(evals(order[i]) - evals(order[block_start])) > kSpectrumTol) {
      if (i - block_start > 1) {
        std::stable_sort(order.begin() + block_start, order.begin() + i,
                         [&](Eigen::Index a, Eigen::Index b) { return l1(a) > l1(b); });
      }
      block_start = i;
    }
  }

  Eigen::MatrixXd q(n, n);
  Eigen::VectorXd lambda(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    q.col(c) = evecs.col(order[c]);
    lambda(c) = evals(order[c]);
  }
  return {std::move(q), std::move(lambda)};
}

Eigen::MatrixXd global_embeddings(const SemanticGraph& graph, int k) {
  const Eigen::Index n = static_cast<Eigen::Index>(graph.node_count());
  if (n == 0) throw std::invalid_argument("global_embeddings: empty graph");
  if (k < 1) throw std::invalid_argument("global_embeddings: k must be >= 1");

  const auto [q, lambda] = adjacency_eigendecomposition(graph.adjacency);

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, k);
  const Eigen::Index cols = std::min<Eigen::Index>(k, n);
  for (Eigen::Index c = 0; c < cols; ++c) {
    // A zero eigenvalue's column contributes nothing to Q Lambda Q^T; keep
    // its slot (the column order is by eigenvalue) but embed it as zero.
    if (std::abs(lambda(c)) <= kSpectrumTol) continue;
    out.col(c) = q.col(c).cwiseAbs();
  }
  return out;
}

void node_descriptors(SemanticGraph& graph, const EdgeCategoryTable& table,
                      const GraphParams& params) {
  if (graph.nodes.empty()) return;
  const Eigen::MatrixXd embeddings = global_embeddings(graph, params.spectral_k);
  const int local_dim = params.local_dim(table);
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    Eigen::VectorXd f(local_dim + params.spectral_k);
    f.head(local_dim) =
        local_descriptor(graph, i, table, params.length_bins, params.bin_width);
    f.tail(params.spectral_k) = embeddings.row(static_cast<Eigen::Index>(i));
    graph.nodes[i].descriptor = std::move(f);
  }
}

namespace {

constexpr std::uint32_t kGraphMagic = 0x53474C47;  // "SGLG"
constexpr std::uint32_t kGraphVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DataError(std::string("graph record: short read in ") + what);
  return v;
}

}  // namespace

void save_graph(const std::filesystem::path& path, const SemanticGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  write_pod(out, kGraphMagic);
  write_pod(out, kGraphVersion);
  write_pod(out, static_cast<std::uint64_t>(graph.nodes.size()));
  write_pod(out, static_cast<std::uint64_t>(graph.edges.size()));
  for (const auto& node : graph.nodes) {
    for (int a = 0; a < 3; ++a) write_pod(out, node.center(a));
    for (int a = 0; a < 3; ++a) write_pod(out, node.box(a));
    write_pod(out, static_cast<std::uint32_t>(node.label));
    write_pod(out, static_cast<std::uint64_t>(node.descriptor.size()));
    for (Eigen::Index a = 0; a < node.descriptor.size(); ++a) write_pod(out, node.descriptor(a));
  }
  for (const auto& edge : graph.edges) {
    write_pod(out, edge.i);
    write_pod(out, edge.j);
    write_pod(out, static_cast<std::uint32_t>(edge.label.lo));
    write_pod(out, static_cast<std::uint32_t>(edge.label.hi));
    write_pod(out, edge.length);
  }
}

SemanticGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  if (read_pod<std::uint32_t>(in, "magic") != kGraphMagic) {
    throw DataError("not a graph record: " + path.string());
  }
  const auto version = read_pod<std::uint32_t>(in, "version");
  if (version != kGraphVersion) {
    throw DataError("unsupported graph record version " + std::to_string(version));
  }
  const auto n_nodes = read_pod<std::uint64_t>(in, "node count");
  const auto n_edges = read_pod<std::uint64_t>(in, "edge count");

  SemanticGraph graph;
  graph.nodes.resize(n_nodes);
  for (auto& node : graph.nodes) {
    for (int a = 0; a < 3; ++a) node.center(a) = read_pod<double>(in, "node center");
    for (int a = 0; a < 3; ++a) node.box(a) = read_pod<double>(in, "node box");
    node.label = static_cast<ClassId>(read_pod<std::uint32_t>(in, "node label"));
    const auto dim = read_pod<std::uint64_t>(in, "descriptor size");
    node.descriptor.resize(static_cast<Eigen::Index>(dim));
    for (Eigen::Index a = 0; a < node.descriptor.size(); ++a) {
      node.descriptor(a) = read_pod<double>(in, "descriptor entry");
    }
  }
  graph.adjacency = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_nodes),
                                          static_cast<Eigen::Index>(n_nodes));
  graph.edges.resize(n_edges);
  for (auto& edge : graph.edges) {
    edge.i = read_pod<std::uint32_t>(in, "edge i");
    edge.j = read_pod<std::uint32_t>(in, "edge j");
    if (edge.i >= n_nodes || edge.j >= n_nodes) {
      throw DataError("graph record: edge endpoint out of range");
    }
    edge.label.lo = static_cast<ClassId>(read_pod<std::uint32_t>(in, "edge label lo"));
    edge.label.hi = static_cast<ClassId>(read_pod<std::uint32_t>(in, "edge label hi"));
    edge.length = read_pod<double>(in, "edge length");
    graph.adjacency(edge.i, edge.j) = 1.0;
    graph.adjacency(edge.j, edge.i) = 1.0;
  }
  return graph;
}

}  // namespace semloop
