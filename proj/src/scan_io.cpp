#include "semloop/scan_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace semloop {

namespace {

std::ifstream open_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  return in;
}

ScanLoadResult load_kitti_bin(const std::filesystem::path& path) {
  std::ifstream in = open_binary(path);
  in.seekg(0, std::ios::end);
  const std::streamoff bytes = in.tellg();
  in.seekg(0, std::ios::beg);

  constexpr std::streamoff kRecord = 4 * sizeof(float);
  if (bytes % kRecord != 0) {
    throw DataError("malformed kitti_bin " + path.string() + ": size " +
                    std::to_string(bytes) + " is not a multiple of 16 (trailing bytes at offset " +
                    std::to_string(bytes - bytes % kRecord) + ")");
  }

  ScanLoadResult out;
  const std::size_t n = static_cast<std::size_t>(bytes / kRecord);
  out.scan.points.reserve(n);
  std::array<float, 4> rec;
  for (std::size_t i = 0; i < n; ++i) {
    in.read(reinterpret_cast<char*>(rec.data()), kRecord);
    if (!in) {
      throw DataError("malformed kitti_bin " + path.string() + ": short read at offset " +
                      std::to_string(static_cast<std::streamoff>(i) * kRecord));
    }
    if (!std::isfinite(rec[0]) || !std::isfinite(rec[1]) || !std::isfinite(rec[2])) {
      ++out.dropped_nonfinite;
      continue;
    }
    out.scan.points.emplace_back(rec[0], rec[1], rec[2]);
  }
  return out;
}

ScanLoadResult load_xyz_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());

  ScanLoadResult out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double x, y, z;
    if (!(ss >> x >> y >> z)) {
      throw DataError("malformed xyz_text " + path.string() + ": line " +
                      std::to_string(line_no));
    }
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
      ++out.dropped_nonfinite;
      continue;
    }
    out.scan.points.emplace_back(x, y, z);
  }
  return out;
}

}  // namespace

ScanLoadResult load_scan(const std::filesystem::path& path, ScanFormat format) {
  switch (format) {
    case ScanFormat::kKittiBin:
      return load_kitti_bin(path);
    case ScanFormat::kXyzText:
      return load_xyz_text(path);
  }
  throw std::invalid_argument("load_scan: unknown format");
}

std::vector<ClassId> load_labels(const std::filesystem::path& path) {
  std::ifstream in = open_binary(path);
  in.seekg(0, std::ios::end);
  const std::streamoff bytes = in.tellg();
  in.seekg(0, std::ios::beg);

  if (bytes % sizeof(std::uint32_t) != 0) {
    throw DataError("malformed label file " + path.string() + ": size " +
                    std::to_string(bytes) + " is not a multiple of 4");
  }
  const std::size_t n = static_cast<std::size_t>(bytes / sizeof(std::uint32_t));
  std::vector<std::uint32_t> raw(n);
  if (n > 0) in.read(reinterpret_cast<char*>(raw.data()), bytes);
  if (!in && n > 0) throw DataError("short read in label file " + path.string());

  std::vector<ClassId> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = static_cast<ClassId>(raw[i] & 0xFFFFu);  // upper 16 bits are instance id
  }
  return labels;
}

void save_scan_kitti_bin(const std::filesystem::path& path, const SemanticScan& scan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  for (const auto& p : scan.points) {
    const std::array<float, 4> rec = {static_cast<float>(p.x()), static_cast<float>(p.y()),
                                      static_cast<float>(p.z()), 0.0f};
    out.write(reinterpret_cast<const char*>(rec.data()), sizeof(rec));
  }
}

void save_labels(const std::filesystem::path& path, const std::vector<ClassId>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  for (ClassId label : labels) {
    const std::uint32_t rec = label;
    out.write(reinterpret_cast<const char*>(&rec), sizeof(rec));
  }
}

SemanticScan attach_labels(SemanticScan scan, std::vector<ClassId> labels) {
  if (labels.size() != scan.points.size()) {
    throw DataError("label/point count mismatch: " + std::to_string(labels.size()) +
                    " labels for " + std::to_string(scan.points.size()) + " points");
  }
  scan.labels = std::move(labels);
  return scan;
}

SemanticScan drop_moving_points(const SemanticScan& scan, const ClassMap& map) {
  SemanticScan out;
  out.scan_id = scan.scan_id;
  out.points.reserve(scan.points.size());
  out.labels.reserve(scan.labels.size());
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const ClassId label = scan.has_labels() ? scan.labels[i] : 0;
    if (scan.has_labels() && map.is_moving(label)) continue;
    out.points.push_back(scan.points[i]);
    if (scan.has_labels()) out.labels.push_back(label);
  }
  return out;
}

std::vector<PoseSE3> load_poses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());

  std::vector<PoseSE3> poses;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::array<double, 12> v;
    for (int i = 0; i < 12; ++i) {
      if (!(ss >> v[i]) || !std::isfinite(v[i])) {
        throw DataError("malformed pose file " + path.string() + ": line " +
                        std::to_string(line_no));
      }
    }
    PoseSE3 pose;
    pose.rotation << v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10];
    pose.translation << v[3], v[7], v[11];
    if (rotation_drift(pose.rotation) > 1e-6) {
      pose.rotation = orthonormalized(pose.rotation);
    }
    poses.push_back(pose);
  }
  return poses;
}

void save_poses(const std::filesystem::path& path, const std::vector<PoseSE3>& poses) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  char buf[32];
  for (const auto& pose : poses) {
    const Eigen::Matrix<double, 3, 4> m = pose.matrix34();
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
        out << buf << (r == 2 && c == 3 ? "" : " ");
      }
    }
    out << "\n";
  }
}

ClassMap load_class_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());

  ClassMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;

    const std::string where = path.string() + ": line " + std::to_string(line_no);
    if (key == "class") {
      long id = -1;
      std::string role;
      if (!(ss >> id >> role) || id < 0 || id > 0xFFFF) {
        throw DataError("malformed class entry at " + where);
      }
      if (role == "foreground") {
        double radius = 0.0;
        if (!(ss >> radius) || radius <= 0.0) {
          throw DataError("foreground class needs a positive cluster radius at " + where);
        }
        map.add(static_cast<ClassId>(id), ClassRole::kForeground, radius);
      } else if (role == "background") {
        map.add(static_cast<ClassId>(id), ClassRole::kBackground);
      } else if (role == "moving") {
        map.add(static_cast<ClassId>(id), ClassRole::kMoving);
      } else {
        throw DataError("unknown class role '" + role + "' at " + where);
      }
    } else if (key == "min_cluster_size") {
      if (!(ss >> map.min_cluster_size) || map.min_cluster_size < 1) {
        throw DataError("malformed min_cluster_size at " + where);
      }
    } else {
      throw DataError("unknown class map key '" + key + "' at " + where);
    }
  }
  return map;
}

void save_class_map(const std::filesystem::path& path, const ClassMap& map) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << "# class <id> <role> [cluster_radius_m]\n";
  for (const auto& [id, entry] : map.entries) {
    out << "class " << id << ' ';
    switch (entry.role) {
      case ClassRole::kForeground:
        out << "foreground " << entry.cluster_radius;
        break;
      case ClassRole::kBackground:
        out << "background";
        break;
      case ClassRole::kMoving:
        out << "moving";
        break;
    }
    out << '\n';
  }
  out << "min_cluster_size " << map.min_cluster_size << '\n';
}

ClassMap default_class_map() {
  // SemanticKITTI-style ids: 10 car, 71 trunk, 80 pole, 99 lamp;
  // 40 road, 50 building, 51 fence, 70 vegetation; 252/254 moving.
  ClassMap map;
  map.add(10, ClassRole::kForeground, 0.8);
  map.add(71, ClassRole::kForeground, 0.4);
  map.add(80, ClassRole::kForeground, 0.4);
  map.add(99, ClassRole::kForeground, 0.4);
  map.add(40, ClassRole::kBackground);
  map.add(50, ClassRole::kBackground);
  map.add(51, ClassRole::kBackground);
  map.add(70, ClassRole::kBackground);
  map.add(252, ClassRole::kMoving);
  map.add(254, ClassRole::kMoving);
  map.min_cluster_size = 10;
  return map;
}

}  // namespace semloop
