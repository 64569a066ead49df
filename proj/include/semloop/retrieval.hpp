#pragma once

#include "semloop/descriptor.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace semloop {

struct KeyframeEntry {
  std::int64_t scan_id = -1;
  Eigen::VectorXd descriptor;  // fused, fixed dimension per index
};

struct RetrievalMatch {
  std::int64_t scan_id = -1;
  double distance = 0.0;  // Euclidean, in descriptor space
};

// Exact nearest-neighbor database over fused scan descriptors. Queries
// scan every stored entry; no approximation, no pruning.
class RetrievalIndex {
 public:
  RetrievalIndex() = default;
  explicit RetrievalIndex(Eigen::Index dim) : dim_(dim) {}

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<KeyframeEntry>& entries() const { return entries_; }

  // Entries may arrive in any id order; duplicates of an id are rejected.
  void insert(std::int64_t scan_id, const Eigen::VectorXd& descriptor);

  // Up to top_n nearest stored entries to `descriptor`, ascending distance,
  // ties broken by smaller scan id. Entries with
  // scan_id > query_id - exclusion_window are skipped (recent history);
  // pass a negative query_id to disable the exclusion.
  std::vector<RetrievalMatch> query(const Eigen::VectorXd& descriptor, std::int64_t query_id,
                                    int top_n, int exclusion_window) const;

  void save(const std::filesystem::path& path) const;
  static RetrievalIndex load(const std::filesystem::path& path);

 private:
  Eigen::Index dim_ = 0;
  std::vector<KeyframeEntry> entries_;
};

}  // namespace semloop
