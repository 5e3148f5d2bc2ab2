#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "geoconn/geometry.hpp"

namespace geoconn {

namespace detail {

/// Binary hierarchy over items, split at the median of box centers along the
/// wider axis. Leaves hold at most kLeafSize items. Nodes are stored in
/// preorder with node 0 the root.
class MedianHierarchy {
 public:
  static constexpr std::size_t kLeafSize = 4;

  struct Node {
    std::uint32_t begin = 0;  // range into order()
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;

    bool leaf() const { return left < 0; }
  };

  explicit MedianHierarchy(std::span<const Box> boxes) : boxes_(boxes) {
    order_.resize(boxes.size());
    std::iota(order_.begin(), order_.end(), 0u);
    if (!boxes.empty()) build(0, static_cast<std::uint32_t>(boxes.size()));
    boxes_ = {};
  }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& order() const { return order_; }

 private:
  std::int32_t build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({begin, end, -1, -1});
    if (end - begin <= kLeafSize) return id;
    Box span = boxes_[order_[begin]];
    for (auto i = begin + 1; i < end; ++i) span = span.merged(boxes_[order_[i]]);
    const bool by_x = span.max_x - span.min_x >= span.max_y - span.min_y;
    auto center = [&](std::uint32_t item) {
      const Box& b = boxes_[item];
      return by_x ? b.min_x + b.max_x : b.min_y + b.max_y;
    };
    const std::uint32_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t a, std::uint32_t b) { return center(a) < center(b); });
    const std::int32_t left = build(begin, mid);
    const std::int32_t right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  std::span<const Box> boxes_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> order_;
};

/// Smallest integer r with r * r >= v (v >= 0).
inline Coord ceil_sqrt(Coord v) {
  auto r = static_cast<Coord>(std::sqrt(static_cast<double>(v)));
  while (r * r < v) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= v) --r;
  return r;
}

}  // namespace detail

/// Additively weighted distance index over the disks of one component:
/// sites are disk centers, weights are radii. Node bounds are integer
/// circles enclosing every disk below them, so pruning is exact.
class DiskDistanceIndex {
 public:
  explicit DiskDistanceIndex(std::span<const GeomObject> objs) {
    disks_.reserve(objs.size());
    std::vector<Box> boxes;
    boxes.reserve(objs.size());
    for (const auto& o : objs) {
      const Disk& d = std::get<Disk>(o.shape);
      disks_.push_back(d);
      boxes.push_back(bounding_box(d));
    }
    detail::MedianHierarchy h(boxes);
    nodes_ = h.nodes();
    order_ = h.order();
    bounds_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& node = nodes_[i];
      Box span = boxes[order_[node.begin]];
      for (auto k = node.begin + 1; k < node.end; ++k) span = span.merged(boxes[order_[k]]);
      Disk bound{{(span.min_x + span.max_x) / 2, (span.min_y + span.max_y) / 2}, 0};
      for (auto k = node.begin; k < node.end; ++k) {
        const Disk& d = disks_[order_[k]];
        const Coord dx = d.center.x - bound.center.x;
        const Coord dy = d.center.y - bound.center.y;
        bound.radius = std::max(bound.radius, detail::ceil_sqrt(dx * dx + dy * dy) + d.radius);
      }
      bounds_[i] = bound;
    }
  }

  /// Exact test of min over sites u of (|p - center_u| - radius_u) <= r,
  /// i.e. whether the disk (p, r) meets some disk of the component.
  bool reaches(const Point& p, Coord r, std::uint64_t& work) const {
    if (nodes_.empty()) return false;
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
      const auto& node = nodes_[stack.back()];
      const Disk& bound = bounds_[stack.back()];
      stack.pop_back();
      ++work;
      if (!intersects(bound, Disk{p, r})) continue;
      if (node.leaf()) {
        for (auto k = node.begin; k < node.end; ++k) {
          ++work;
          if (intersects(disks_[order_[k]], Disk{p, r})) return true;
        }
      } else {
        stack.push_back(node.right);
        stack.push_back(node.left);
      }
    }
    return false;
  }

  /// min over sites of (|p - center| - radius), by branch and bound.
  double nearest_weighted(const Point& p) const {
    double best = std::numeric_limits<double>::infinity();
    if (nodes_.empty()) return best;
    auto weighted = [&p](const Disk& d) {
      const double dx = static_cast<double>(p.x - d.center.x);
      const double dy = static_cast<double>(p.y - d.center.y);
      return std::sqrt(dx * dx + dy * dy) - static_cast<double>(d.radius);
    };
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
      const auto& node = nodes_[stack.back()];
      const double lower = weighted(bounds_[stack.back()]);
      stack.pop_back();
      if (lower > best) continue;
      if (node.leaf()) {
        for (auto k = node.begin; k < node.end; ++k) best = std::min(best, weighted(disks_[order_[k]]));
      } else {
        stack.push_back(node.right);
        stack.push_back(node.left);
      }
    }
    return best;
  }

  bool hits(const GeomObject& s, std::uint64_t& work) const {
    const Disk& d = std::get<Disk>(s.shape);
    return reaches(d.center, d.radius, work);
  }

 private:
  std::vector<Disk> disks_;
  std::vector<detail::MedianHierarchy::Node> nodes_;
  std::vector<std::uint32_t> order_;
  std::vector<Disk> bounds_;
};

/// Bounding-box hierarchy over the segments (line or axis-aligned) of one
/// component; membership is an exact intersection search with box pruning.
class SegmentBoxIndex {
 public:
  explicit SegmentBoxIndex(std::span<const GeomObject> objs) {
    objects_.assign(objs.begin(), objs.end());
    std::vector<Box> boxes;
    boxes.reserve(objs.size());
    for (const auto& o : objs) boxes.push_back(bounding_box(o.shape));
    detail::MedianHierarchy h(boxes);
    nodes_ = h.nodes();
    order_ = h.order();
    bounds_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      Box span = boxes[order_[nodes_[i].begin]];
      for (auto k = nodes_[i].begin + 1; k < nodes_[i].end; ++k) span = span.merged(boxes[order_[k]]);
      bounds_[i] = span;
    }
  }

  bool hits(const GeomObject& s, std::uint64_t& work) const {
    if (nodes_.empty()) return false;
    const Box qb = bounding_box(s.shape);
    std::vector<std::int32_t> stack{0};
    while (!stack.empty()) {
      const auto idx = stack.back();
      stack.pop_back();
      ++work;
      if (!bounds_[idx].overlaps(qb)) continue;
      const auto& node = nodes_[idx];
      if (node.leaf()) {
        for (auto k = node.begin; k < node.end; ++k) {
          ++work;
          if (intersects(objects_[order_[k]], s)) return true;
        }
      } else {
        stack.push_back(node.right);
        stack.push_back(node.left);
      }
    }
    return false;
  }

 private:
  std::vector<GeomObject> objects_;
  std::vector<detail::MedianHierarchy::Node> nodes_;
  std::vector<std::uint32_t> order_;
  std::vector<Box> bounds_;
};

}  // namespace geoconn
