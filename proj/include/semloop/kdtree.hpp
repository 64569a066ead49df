#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace semloop {

// Balanced 3-d tree over a fixed point set; exact nearest-neighbor,
// k-nearest and radius queries. Split dimension cycles with depth.
class KdTree3 {
 public:
  KdTree3() = default;

  explicit KdTree3(std::vector<Eigen::Vector3d> points) : points_(std::move(points)) {
    if (points_.empty()) return;
    std::vector<int> order(points_.size());
    std::iota(order.begin(), order.end(), 0);
    nodes_.reserve(points_.size());
    root_ = build(order, 0, static_cast<int>(order.size()), 0);
  }

  std::size_t size() const { return points_.size(); }
  const std::vector<Eigen::Vector3d>& points() const { return points_; }

  // Index of the closest stored point, -1 when the tree is empty. Distance
  // ties resolve to the smaller index. Optionally reports the squared distance.
  int nearest(const Eigen::Vector3d& query, double* sq_dist_out = nullptr) const {
    int best = -1;
    double best_sq = std::numeric_limits<double>::infinity();
    nearest_down(root_, 0, query, &best, &best_sq);
    if (sq_dist_out) *sq_dist_out = best_sq;
    return best;
  }

  // The k closest stored points, ascending distance, ties by index.
  std::vector<int> knn(const Eigen::Vector3d& query, int k) const {
    std::vector<std::pair<double, int>> heap;  // max-heap on (sq_dist, -index)
    knn_down(root_, 0, query, k, &heap);
    std::sort(heap.begin(), heap.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });
    std::vector<int> out;
    out.reserve(heap.size());
    for (const auto& [d, i] : heap) out.push_back(i);
    return out;
  }

  // All stored points within `radius` of the query, ascending index.
  std::vector<int> radius_search(const Eigen::Vector3d& query, double radius) const {
    std::vector<int> out;
    radius_down(root_, 0, query, radius * radius, &out);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Node {
    int point = -1;
    int left = -1;
    int right = -1;
  };

  int build(std::vector<int>& order, int lo, int hi, int depth) {
    if (lo >= hi) return -1;
    const int dim = depth % 3;
    const int mid = lo + (hi - lo) / 2;
    std::nth_element(order.begin() + lo, order.begin() + mid, order.begin() + hi,
                     [&](int a, int b) {
                       if (points_[a](dim) != points_[b](dim)) {
                         return points_[a](dim) < points_[b](dim);
                       }
                       return a < b;  // deterministic layout
                     });
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({order[mid], -1, -1});
    nodes_[id].left = build(order, lo, mid, depth + 1);
    nodes_[id].right = build(order, mid + 1, hi, depth + 1);
    return id;
  }

  void nearest_down(int node, int depth, const Eigen::Vector3d& q, int* best,
                    double* best_sq) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    const double sq = (points_[n.point] - q).squaredNorm();
    if (sq < *best_sq || (sq == *best_sq && n.point < *best)) {
      *best_sq = sq;
      *best = n.point;
    }
    const int dim = depth % 3;
    const double delta = q(dim) - points_[n.point](dim);
    const int near = delta < 0 ? n.left : n.right;
    const int far = delta < 0 ? n.right : n.left;
    nearest_down(near, depth + 1, q, best, best_sq);
    if (delta * delta <= *best_sq) nearest_down(far, depth + 1, q, best, best_sq);
  }

  void knn_down(int node, int depth, const Eigen::Vector3d& q, int k,
                std::vector<std::pair<double, int>>* heap) const {
    if (node < 0 || k <= 0) return;
    const Node& n = nodes_[node];
    const double sq = (points_[n.point] - q).squaredNorm();
    const auto cmp = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second > b.second;  // larger index counts as "worse"
    };
    if (static_cast<int>(heap->size()) < k) {
      heap->push_back({sq, n.point});
      std::push_heap(heap->begin(), heap->end(), cmp);
    } else if (cmp({sq, n.point}, heap->front())) {
      std::pop_heap(heap->begin(), heap->end(), cmp);
      heap->back() = {sq, n.point};
      std::push_heap(heap->begin(), heap->end(), cmp);
    }
    const int dim = depth % 3;
    const double delta = q(dim) - points_[n.point](dim);
    const int near = delta < 0 ? n.left : n.right;
    const int far = delta < 0 ? n.right : n.left;
    knn_down(near, depth + 1, q, k, heap);
    const double worst =
        static_cast<int>(heap->size()) < k ? std::numeric_limits<double>::infinity()
                                           : heap->front().first;
    if (delta * delta <= worst) knn_down(far, depth + 1, q, k, heap);
  }

  void radius_down(int node, int depth, const Eigen::Vector3d& q, double sq_radius,
                   std::vector<int>* out) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    if ((points_[n.point] - q).squaredNorm() <= sq_radius) out->push_back(n.point);
    const int dim = depth % 3;
    const double delta = q(dim) - points_[n.point](dim);
    const int near = delta < 0 ? n.left : n.right;
    const int far = delta < 0 ? n.right : n.left;
    radius_down(near, depth + 1, q, sq_radius, out);
    if (delta * delta <= sq_radius) radius_down(far, depth + 1, q, sq_radius, out);
  }

  std::vector<Eigen::Vector3d> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace semloop
