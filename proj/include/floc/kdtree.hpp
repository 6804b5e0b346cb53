#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace floc {

/// Exact k-nearest-neighbor k-d tree over fixed-dimension points.
/// Splits on the axis of largest spread at the median; ties between
/// equidistant points break toward the lower index so results match a
/// deterministic linear scan exactly. Immutable after construction;
/// concurrent queries are safe.
template <int Dim>
class KdTree {
 public:
  using Point = Eigen::Matrix<double, Dim, 1>;

  struct Neighbor {
    double distance = 0.0;
    size_t index = 0;
  };

  explicit KdTree(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.empty()) {
      throw std::invalid_argument("KdTree: empty point set");
    }
    order_.resize(points_.size());
    for (size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, points_.size());
  }

  size_t size() const { return points_.size(); }
  const Point& point(size_t i) const { return points_[i]; }

  /// k nearest neighbors sorted by (distance, index) ascending. Returns
  /// fewer than k when the tree is smaller.
  std::vector<Neighbor> nearest(const Point& query, size_t k) const {
    if (k == 0) {
      throw std::invalid_argument("KdTree::nearest: k must be >= 1");
    }
    k = std::min(k, points_.size());
    BestSet best(k);
    search(root_, query, best);
    std::vector<Neighbor> out;
    out.reserve(best.heap.size());
    while (!best.heap.empty()) {
      out.push_back({std::sqrt(best.heap.top().first), best.heap.top().second});
      best.heap.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  static constexpr size_t kLeafSize = 16;

  struct Node {
    int axis = -1;          // -1 marks a leaf
    double split = 0.0;
    int left = -1;
    int right = -1;
    size_t begin = 0;       // leaf range into order_
    size_t end = 0;
  };

  // max-heap by (d2, index): the lexicographically largest pair is on
  // top and gets evicted first, so equidistant ties keep lower indices
  struct HeapEntry {
    double first;
    size_t second;
    bool operator<(const HeapEntry& o) const {
      if (first != o.first) return first < o.first;
      return second < o.second;
    }
  };

  struct BestSet {
    explicit BestSet(size_t capacity_) : capacity(capacity_) {}
    size_t capacity;
    std::priority_queue<HeapEntry> heap;

    bool full() const { return heap.size() == capacity; }
    double worst_d2() const {
      return full() ? heap.top().first : std::numeric_limits<double>::infinity();
    }
    void offer(double d2, size_t index) {
      if (!full()) {
        heap.push({d2, index});
        return;
      }
      const HeapEntry candidate{d2, index};
      if (candidate < heap.top()) {
        heap.pop();
        heap.push(candidate);
      }
    }
  };

  int build(size_t begin, size_t end) {
    Node node;
    if (end - begin <= kLeafSize) {
      node.begin = begin;
      node.end = end;
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size() - 1);
    }
    // axis of largest spread over the node's points
    Point lo = points_[order_[begin]];
    Point hi = lo;
    for (size_t i = begin + 1; i < end; ++i) {
      lo = lo.cwiseMin(points_[order_[i]]);
      hi = hi.cwiseMax(points_[order_[i]]);
    }
    int axis = 0;
    (hi - lo).maxCoeff(&axis);
    const size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](size_t a, size_t b) { return points_[a][axis] < points_[b][axis]; });
    node.axis = axis;
    node.split = points_[order_[mid]][axis];
    nodes_.push_back(node);
    const int self = static_cast<int>(nodes_.size() - 1);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  void search(int node_id, const Point& query, BestSet& best) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (size_t i = node.begin; i < node.end; ++i) {
        const size_t idx = order_[i];
        best.offer((points_[idx] - query).squaredNorm(), idx);
      }
      return;
    }
    const double diff = query[node.axis] - node.split;
    const int near = diff < 0.0 ? node.left : node.right;
    const int far = diff < 0.0 ? node.right : node.left;
    search(near, query, best);
    if (diff * diff <= best.worst_d2()) {
      search(far, query, best);
    }
  }

  std::vector<Point> points_;
  std::vector<size_t> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace floc
