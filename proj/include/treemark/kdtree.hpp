#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <vector>

namespace treemark {

/// Exact nearest-neighbor kd-tree over fixed-dimension points. Pruning uses
/// the bounding-box lower bound, which never exceeds the true distance of any
/// contained point (all operations are monotone under rounding), so results
/// including the lowest-index tie-break match a linear scan exactly.
template <int Dim>
class KdTree {
 public:
  using Point = std::array<double, Dim>;

  KdTree() = default;

  explicit KdTree(const std::vector<Point>& points) : points_(points) {
    index_.resize(points_.size());
    for (std::size_t i = 0; i < index_.size(); ++i) index_[i] = static_cast<int>(i);
    if (!points_.empty()) {
      nodes_.reserve(2 * points_.size());
      root_ = build(0, static_cast<int>(points_.size()));
    }
  }

  bool empty() const { return points_.empty(); }

  /// Index of the nearest point; ties resolve to the lowest index.
  int nearest(const Point& query) const {
    int best_index = -1;
    double best_dist2 = std::numeric_limits<double>::infinity();
    if (root_ >= 0) search(root_, query, best_index, best_dist2);
    return best_index;
  }

 private:
  struct Node {
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into index_
    int split_dim = -1;
    double split_value = 0.0;
    Point box_min{}, box_max{};
  };

  static constexpr int kLeafSize = 8;

  int build(int begin, int end) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.box_min.fill(std::numeric_limits<double>::infinity());
    node.box_max.fill(-std::numeric_limits<double>::infinity());
    for (int i = begin; i < end; ++i)
      for (int d = 0; d < Dim; ++d) {
        const double v = points_[static_cast<std::size_t>(index_[static_cast<std::size_t>(i)])][static_cast<std::size_t>(d)];
        node.box_min[static_cast<std::size_t>(d)] = std::min(node.box_min[static_cast<std::size_t>(d)], v);
        node.box_max[static_cast<std::size_t>(d)] = std::max(node.box_max[static_cast<std::size_t>(d)], v);
      }
    const int id = static_cast<int>(nodes_.size());
    if (end - begin <= kLeafSize) {
      nodes_.push_back(node);
      return id;
    }
    int split = 0;
    double spread = -1.0;
    for (int d = 0; d < Dim; ++d) {
      const double s = node.box_max[static_cast<std::size_t>(d)] - node.box_min[static_cast<std::size_t>(d)];
      if (s > spread) {
        spread = s;
        split = d;
      }
    }
    if (!(spread > 0.0)) {  // all points identical: make a leaf
      nodes_.push_back(node);
      return id;
    }
    const int mid = (begin + end) / 2;
    std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                     [&](int a, int b) {
                       const double va = points_[static_cast<std::size_t>(a)][static_cast<std::size_t>(split)];
                       const double vb = points_[static_cast<std::size_t>(b)][static_cast<std::size_t>(split)];
                       return va != vb ? va < vb : a < b;
                     });
    node.split_dim = split;
    node.split_value = points_[static_cast<std::size_t>(index_[static_cast<std::size_t>(mid)])][static_cast<std::size_t>(split)];
    nodes_.push_back(node);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<std::size_t>(id)].left = left;
    nodes_[static_cast<std::size_t>(id)].right = right;
    return id;
  }

  double box_dist2(const Node& node, const Point& q) const {
    double acc = 0.0;
    for (int d = 0; d < Dim; ++d) {
      const double v = q[static_cast<std::size_t>(d)];
      double delta = 0.0;
      if (v < node.box_min[static_cast<std::size_t>(d)])
        delta = node.box_min[static_cast<std::size_t>(d)] - v;
      else if (v > node.box_max[static_cast<std::size_t>(d)])
        delta = v - node.box_max[static_cast<std::size_t>(d)];
      acc += delta * delta;
    }
    return acc;
  }

  void search(int id, const Point& q, int& best_index, double& best_dist2) const {
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (box_dist2(node, q) > best_dist2) return;  // equal bounds may hide lower-index ties
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int pi = index_[static_cast<std::size_t>(i)];
        const Point& p = points_[static_cast<std::size_t>(pi)];
        double d2 = 0.0;
        for (int d = 0; d < Dim; ++d) {
          const double diff = q[static_cast<std::size_t>(d)] - p[static_cast<std::size_t>(d)];
          d2 += diff * diff;
        }
        if (d2 < best_dist2 || (d2 == best_dist2 && pi < best_index)) {
          best_dist2 = d2;
          best_index = pi;
        }
      }
      return;
    }
    const double dl = box_dist2(nodes_[static_cast<std::size_t>(node.left)], q);
    const double dr = box_dist2(nodes_[static_cast<std::size_t>(node.right)], q);
    if (dl <= dr) {
      search(node.left, q, best_index, best_dist2);
      search(node.right, q, best_index, best_dist2);
    } else {
      search(node.right, q, best_index, best_dist2);
      search(node.left, q, best_index, best_dist2);
    }
  }

  std::vector<Point> points_;
  std::vector<int> index_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace treemark
