#include "semloop/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>

namespace semloop {

Eigen::VectorXd BackgroundBEV::flattened_grid() const {
  Eigen::Index total = 0;
  for (const auto& g : grid) total += g.size();
  Eigen::VectorXd flat(total);
  Eigen::Index at = 0;
  for (const auto& g : grid) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      for (Eigen::Index s = 0; s < g.cols(); ++s) flat(at++) = g(r, s);
    }
  }
  return flat;
}

Eigen::VectorXd BackgroundBEV::flattened_ring_key() const {
  Eigen::VectorXd flat(ring_key.size());
  Eigen::Index at = 0;
  for (Eigen::Index r = 0; r < ring_key.rows(); ++r) {
    for (Eigen::Index c = 0; c < ring_key.cols(); ++c) flat(at++) = ring_key(r, c);
  }
  return flat;
}

Eigen::VectorXd foreground_descriptor(const SemanticGraph& graph, const EdgeCategoryTable& table,
                                      const GraphParams& params) {
  const int hist_dim = params.local_dim(table);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(hist_dim + table.class_count());
  for (const auto& edge : graph.edges) {
    const int cat = table.index_of(edge.label);
    if (cat < 0) continue;
    const int bin =
        std::min(static_cast<int>(edge.length / params.bin_width), params.length_bins - 1);
    f(cat * params.length_bins + bin) += 1.0;
  }
  for (const auto& node : graph.nodes) {
    const int slot = table.class_slot(node.label);
    if (slot >= 0) f(hist_dim + slot) += 1.0;
  }
  return f;
}

namespace {

// Polar cell of a point; false when the point lies at/beyond max_range.
bool polar_cell(const Eigen::Vector3d& p, const BevParams& params, int* ring, int* sector) {
  const double rho = std::hypot(p.x(), p.y());
  if (rho >= params.max_range) return false;
  *ring = static_cast<int>(rho * params.rings / params.max_range);
  if (*ring >= params.rings) *ring = params.rings - 1;  // rho just below max_range
  const double theta = std::atan2(p.y(), p.x());        // (-pi, pi]
  int s = static_cast<int>((theta + M_PI) * params.sectors / (2.0 * M_PI));
  if (s >= params.sectors) s -= params.sectors;  // theta == pi wraps into sector 0
  if (s < 0) s = 0;
  *sector = s;
  return true;
}

BackgroundBEV bev_of_points(const SemanticScan& scan, const ClassMap& map,
                            const BevParams& params,
                            const std::function<Eigen::Vector3d(const Eigen::Vector3d&)>& warp) {
  const std::vector<ClassId> classes = map.background_classes();
  BackgroundBEV bev;
  bev.grid.assign(classes.size(), Eigen::MatrixXd::Zero(params.rings, params.sectors));
  bev.ring_key = Eigen::MatrixXd::Zero(params.rings, static_cast<Eigen::Index>(classes.size()));

  if (!scan.has_labels() && !scan.points.empty()) {
    throw std::invalid_argument("background descriptor: scan has no labels");
  }
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    auto it = std::lower_bound(classes.begin(), classes.end(), scan.labels[i]);
    if (it == classes.end() || *it != scan.labels[i]) continue;
    const auto cls = static_cast<std::size_t>(it - classes.begin());
    int ring = 0, sector = 0;
    if (!polar_cell(warp(scan.points[i]), params, &ring, &sector)) continue;
    bev.grid[cls](ring, sector) += 1.0;
  }
  for (std::size_t cls = 0; cls < classes.size(); ++cls) {
    for (int r = 0; r < params.rings; ++r) {
      int occupied = 0;
      for (int s = 0; s < params.sectors; ++s) {
        if (bev.grid[cls](r, s) > 0.0) ++occupied;
      }
      bev.ring_key(r, static_cast<Eigen::Index>(cls)) =
          static_cast<double>(occupied) / params.sectors;
    }
  }
  return bev;
}

}  // namespace

BackgroundBEV background_descriptor(const SemanticScan& scan, const ClassMap& map,
                                    const BevParams& params) {
  return bev_of_points(scan, map, params, [](const Eigen::Vector3d& p) { return p; });
}

BackgroundBEV realign_background(const SemanticScan& scan, const PoseSE3& transform,
                                 const ClassMap& map, const BevParams& params) {
  return bev_of_points(scan, map, params,
                       [&transform](const Eigen::Vector3d& p) { return transform.apply(p); });
}

namespace {

Eigen::VectorXd normalized_or_zero(const Eigen::VectorXd& v) {
  const double n = v.norm();
  return n > 0.0 ? Eigen::VectorXd(v / n) : Eigen::VectorXd::Zero(v.size());
}

}  // namespace

ScanDescriptor fuse(const Eigen::VectorXd& foreground, const Eigen::VectorXd& background) {
  ScanDescriptor d;
  d.foreground = foreground;
  d.background = background;
  d.fused.resize(foreground.size() + background.size());
  d.fused << normalized_or_zero(foreground), normalized_or_zero(background);
  return d;
}

double cosine_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("cosine_similarity: dimension mismatch");
  }
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

namespace {

constexpr std::uint32_t kDescMagic = 0x53474C44;  // "SGLD"
constexpr std::uint32_t kDescVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in, const char* what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw DataError(std::string("descriptor file: truncated reading ") + what);
  return v;
}

}  // namespace

void save_descriptor_file(const std::filesystem::path& path, const DescriptorFileHeader& header,
                          const std::vector<DescriptorRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("descriptor file: cannot open " + path.string() + " for writing");
  write_pod(out, kDescMagic);
  write_pod(out, kDescVersion);
  write_pod(out, header.rings);
  write_pod(out, header.sectors);
  write_pod(out, header.classes);
  write_pod(out, header.dim);
  write_pod(out, static_cast<std::uint64_t>(records.size()));
  for (const auto& rec : records) {
    if (rec.values.size() != static_cast<Eigen::Index>(header.dim)) {
      throw std::invalid_argument("descriptor file: record dimension mismatch");
    }
    write_pod(out, rec.scan_id);
    for (Eigen::Index i = 0; i < rec.values.size(); ++i) {
      write_pod(out, static_cast<float>(rec.values(i)));
    }
  }
  if (!out) throw DataError("descriptor file: write to " + path.string() + " failed");
}

std::pair<DescriptorFileHeader, std::vector<DescriptorRecord>> load_descriptor_file(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("descriptor file: cannot open " + path.string());
  if (read_pod<std::uint32_t>(in, "magic") != kDescMagic) {
    throw DataError("descriptor file: bad magic in " + path.string());
  }
  const auto version = read_pod<std::uint32_t>(in, "version");
  if (version != kDescVersion) {
    throw DataError("descriptor file: unsupported version " + std::to_string(version));
  }
  DescriptorFileHeader header;
  header.rings = read_pod<std::uint32_t>(in, "rings");
  header.sectors = read_pod<std::uint32_t>(in, "sectors");
  header.classes = read_pod<std::uint32_t>(in, "classes");
  header.dim = read_pod<std::uint32_t>(in, "dim");
  const auto count = read_pod<std::uint64_t>(in, "record count");
  std::vector<DescriptorRecord> records(count);
  for (auto& rec : records) {
    rec.scan_id = read_pod<std::uint32_t>(in, "scan id");
    rec.values.resize(header.dim);
    for (std::uint32_t i = 0; i < header.dim; ++i) {
      rec.values(i) = read_pod<float>(in, "descriptor value");
    }
  }
  return {header, std::move(records)};
}

}  // namespace semloop
