#include "semloop/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace semloop {

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct FieldSpec {
  const char* key;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const std::string&)> set;
};

double parse_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters in number: " + s);
  return v;
}

long long parse_int(const std::string& s) {
  std::size_t pos = 0;
  const long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters in integer: " + s);
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw std::invalid_argument("expected true/false: " + s);
}

// Field table: one entry per tunable, shared by save, load and CLI wiring.
const std::vector<FieldSpec>& field_table() {
  static const std::vector<FieldSpec> table = [] {
    std::vector<FieldSpec> t;
    const auto dbl = [&t](const char* key, auto member) {
      t.push_back({key,
                   [member](const PipelineConfig& c) { return fmt_double(std::invoke(member, c)); },
                   [member](PipelineConfig& c, const std::string& v) {
                     std::invoke(member, c) = parse_double(v);
                   }});
    };
    const auto integer = [&t](const char* key, auto member) {
      t.push_back({key,
                   [member](const PipelineConfig& c) {
                     return std::to_string(std::invoke(member, c));
                   },
                   [member](PipelineConfig& c, const std::string& v) {
                     std::invoke(member, c) = static_cast<int>(parse_int(v));
                   }});
    };
    const auto boolean = [&t](const char* key, auto member) {
      t.push_back({key,
                   [member](const PipelineConfig& c) {
                     return std::invoke(member, c) ? "true" : "false";
                   },
                   [member](PipelineConfig& c, const std::string& v) {
                     std::invoke(member, c) = parse_bool(v);
                   }});
    };

    dbl("d_max", [](auto& c) -> auto& { return c.graph.d_max; });
    integer("length_bins", [](auto& c) -> auto& { return c.graph.length_bins; });
    dbl("bin_width", [](auto& c) -> auto& { return c.graph.bin_width; });
    integer("spectral_k", [](auto& c) -> auto& { return c.graph.spectral_k; });

    integer("rings", [](auto& c) -> auto& { return c.bev.rings; });
    integer("sectors", [](auto& c) -> auto& { return c.bev.sectors; });
    dbl("max_range", [](auto& c) -> auto& { return c.bev.max_range; });

    dbl("box_tolerance", [](auto& c) -> auto& { return c.verification.box_tolerance; });
    dbl("affinity_sentinel", [](auto& c) -> auto& { return c.verification.affinity_sentinel; });
    dbl("prune_radius", [](auto& c) -> auto& { return c.verification.prune_radius; });
    dbl("prune_side_tolerance",
        [](auto& c) -> auto& { return c.verification.prune_side_tolerance; });
    integer("prune_min_triangles",
            [](auto& c) -> auto& { return c.verification.prune_min_triangles; });
    integer("ransac_iterations",
            [](auto& c) -> auto& { return c.verification.ransac_iterations; });
    dbl("ransac_inlier_threshold",
        [](auto& c) -> auto& { return c.verification.ransac_inlier_threshold; });
    dbl("theta_graph", [](auto& c) -> auto& { return c.verification.theta_graph; });
    dbl("theta_background", [](auto& c) -> auto& { return c.verification.theta_background; });

    dbl("icp_max_correspondence",
        [](auto& c) -> auto& { return c.refine.icp_max_correspondence; });
    dbl("icp_pose_tolerance", [](auto& c) -> auto& { return c.refine.icp_pose_tolerance; });
    integer("icp_max_iterations", [](auto& c) -> auto& { return c.refine.icp_max_iterations; });
    integer("normal_neighbors", [](auto& c) -> auto& { return c.refine.normal_neighbors; });
    dbl("planarity_min", [](auto& c) -> auto& { return c.refine.planarity_min; });
    dbl("plane_max_correspondence",
        [](auto& c) -> auto& { return c.refine.plane_max_correspondence; });
    dbl("plane_normal_agreement_deg",
        [](auto& c) -> auto& { return c.refine.plane_normal_agreement_deg; });
    dbl("plane_update_tolerance",
        [](auto& c) -> auto& { return c.refine.plane_update_tolerance; });
    integer("plane_max_iterations",
            [](auto& c) -> auto& { return c.refine.plane_max_iterations; });
    dbl("rank_ratio", [](auto& c) -> auto& { return c.refine.rank_ratio; });
    dbl("voxel_size", [](auto& c) -> auto& { return c.refine.voxel_size; });

    integer("top_n", [](auto& c) -> auto& { return c.top_n; });
    integer("exclusion_window", [](auto& c) -> auto& { return c.exclusion_window; });
    integer("keyframe_stride", [](auto& c) -> auto& { return c.keyframe_stride; });
    boolean("pick_best_graph", [](auto& c) -> auto& { return c.pick_best_graph; });
    t.push_back({"seed",
                 [](const PipelineConfig& c) { return std::to_string(c.seed); },
                 [](PipelineConfig& c, const std::string& v) {
                   std::size_t pos = 0;
                   c.seed = std::stoull(v, &pos);
                   if (pos != v.size()) {
                     throw std::invalid_argument("trailing characters in seed: " + v);
                   }
                 }});
    return t;
  }();
  return table;
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(std::string("config: ") + message);
}

}  // namespace

void PipelineConfig::validate() const {
  require(graph.d_max > 0, "d_max must be > 0");
  require(graph.length_bins > 0, "length_bins must be > 0");
  require(graph.bin_width > 0, "bin_width must be > 0");
  require(graph.spectral_k > 0, "spectral_k must be > 0");
  require(bev.rings > 0, "rings must be > 0");
  require(bev.sectors > 0, "sectors must be > 0");
  require(bev.max_range > 0, "max_range must be > 0");
  require(verification.box_tolerance >= 0, "box_tolerance must be >= 0");
  require(verification.affinity_sentinel > 1, "affinity_sentinel must be > 1");
  require(verification.prune_radius > 0, "prune_radius must be > 0");
  require(verification.prune_side_tolerance >= 0, "prune_side_tolerance must be >= 0");
  require(verification.prune_min_triangles >= 1, "prune_min_triangles must be >= 1");
  require(verification.ransac_iterations >= 1, "ransac_iterations must be >= 1");
  require(verification.ransac_inlier_threshold > 0, "ransac_inlier_threshold must be > 0");
  require(verification.theta_graph >= 0 && verification.theta_graph <= 1,
          "theta_graph must be in [0, 1]");
  require(verification.theta_background >= -1 && verification.theta_background <= 1,
          "theta_background must be in [-1, 1]");
  require(refine.icp_max_correspondence > 0, "icp_max_correspondence must be > 0");
  require(refine.icp_pose_tolerance > 0, "icp_pose_tolerance must be > 0");
  require(refine.icp_max_iterations >= 1, "icp_max_iterations must be >= 1");
  require(refine.normal_neighbors >= 3, "normal_neighbors must be >= 3");
  require(refine.planarity_min >= 0 && refine.planarity_min <= 1,
          "planarity_min must be in [0, 1]");
  require(refine.plane_max_correspondence > 0, "plane_max_correspondence must be > 0");
  require(refine.plane_normal_agreement_deg > 0 && refine.plane_normal_agreement_deg <= 90,
          "plane_normal_agreement_deg must be in (0, 90]");
  require(refine.plane_update_tolerance > 0, "plane_update_tolerance must be > 0");
  require(refine.plane_max_iterations >= 1, "plane_max_iterations must be >= 1");
  require(refine.rank_ratio > 0 && refine.rank_ratio < 1, "rank_ratio must be in (0, 1)");
  require(refine.voxel_size > 0, "voxel_size must be > 0");
  require(top_n >= 1, "top_n must be >= 1");
  require(exclusion_window >= 0, "exclusion_window must be >= 0");
  require(keyframe_stride >= 1, "keyframe_stride must be >= 1");
}

std::vector<ConfigField> config_to_fields(const PipelineConfig& config) {
  std::vector<ConfigField> out;
  for (const auto& spec : field_table()) {
    out.push_back({spec.key, spec.get(config)});
  }
  return out;
}

void config_set_field(PipelineConfig& config, const std::string& key, const std::string& value) {
  for (const auto& spec : field_table()) {
    if (key == spec.key) {
      spec.set(config, value);
      return;
    }
  }
  throw std::invalid_argument("config: unknown key '" + key + "'");
}

void save_config(const std::filesystem::path& path, const PipelineConfig& config) {
  std::ofstream out(path);
  if (!out) throw DataError("config: cannot open " + path.string() + " for writing");
  for (const auto& field : config_to_fields(config)) {
    out << field.key << " = " << field.value << "\n";
  }
  if (!out) throw DataError("config: write to " + path.string() + " failed");
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("config: cannot open " + path.string());
  PipelineConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ss(line);
    std::string key, eq, value;
    if (!(ss >> key)) continue;  // blank line
    if (!(ss >> eq >> value) || eq != "=") {
      throw DataError("config: " + path.string() + ":" + std::to_string(line_no) +
                      ": expected 'key = value'");
    }
    try {
      config_set_field(config, key, value);
    } catch (const std::invalid_argument& e) {
      throw DataError("config: " + path.string() + ":" + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return config;
}

}  // namespace semloop
