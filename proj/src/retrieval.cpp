#include "semloop/retrieval.hpp"

#include <algorithm>
#include <stdexcept>

namespace semloop {

void RetrievalIndex::insert(std::int64_t scan_id, const Eigen::VectorXd& descriptor) {
  if (dim_ == 0) dim_ = descriptor.size();
  if (descriptor.size() != dim_) {
    throw DataError("retrieval index: descriptor dimension " +
                    std::to_string(descriptor.size()) + " != index dimension " +
                    std::to_string(dim_));
  }
  for (const auto& e : entries_) {
    if (e.scan_id == scan_id) {
      throw DataError("retrieval index: duplicate scan id " + std::to_string(scan_id));
    }
  }
  entries_.push_back({scan_id, descriptor});
}

std::vector<RetrievalMatch> RetrievalIndex::query(const Eigen::VectorXd& descriptor,
                                                  std::int64_t query_id, int top_n,
                                                  int exclusion_window) const {
  if (descriptor.size() != dim_ && dim_ != 0) {
    throw std::invalid_argument("retrieval index: query dimension mismatch");
  }
  std::vector<RetrievalMatch> all;
  all.reserve(entries_.size());
  for (const auto& e : entries_) {
    if (query_id >= 0 && e.scan_id > query_id - exclusion_window) continue;
    all.push_back({e.scan_id, (e.descriptor - descriptor).norm()});
  }
  const auto by_distance_then_id = [](const RetrievalMatch& a, const RetrievalMatch& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.scan_id < b.scan_id;
  };
  const std::size_t keep = std::min<std::size_t>(all.size(), std::max(top_n, 0));
  std::partial_sort(all.begin(), all.begin() + keep, all.end(), by_distance_then_id);
  all.resize(keep);
  return all;
}

void RetrievalIndex::save(const std::filesystem::path& path) const {
  DescriptorFileHeader header;
  header.dim = static_cast<std::uint32_t>(dim_);
  std::vector<DescriptorRecord> records;
  records.reserve(entries_.size());
  for (const auto& e : entries_) {
    records.push_back({static_cast<std::uint32_t>(e.scan_id), e.descriptor});
  }
  save_descriptor_file(path, header, records);
}

RetrievalIndex RetrievalIndex::load(const std::filesystem::path& path) {
  auto [header, records] = load_descriptor_file(path);
  RetrievalIndex index(header.dim);
  for (const auto& rec : records) {
    index.insert(rec.scan_id, rec.values);
  }
  return index;
}

}  // namespace semloop
