#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "geoconn/core.hpp"

namespace geoconn {

/// Model coordinates are integers with |v| <= kCoordLimit. Every predicate
/// below works on exact integer arithmetic; products of two coordinate
/// differences stay below 2^44.
using Coord = std::int64_t;
inline constexpr Coord kCoordLimit = Coord{1} << 20;

struct Point {
  Coord x = 0;
  Coord y = 0;

  friend constexpr bool operator==(const Point&, const Point&) = default;
};

enum class Orientation : std::uint8_t { horizontal, vertical };

/// Horizontal: y = fixed, x in [low, high]. Vertical: x = fixed, y in [low, high].
struct AxisSegment {
  Orientation orientation = Orientation::horizontal;
  Coord fixed = 0;
  Coord low = 0;
  Coord high = 0;

  friend constexpr bool operator==(const AxisSegment&, const AxisSegment&) = default;
};

struct LineSegment {
  Point p1;
  Point p2;

  friend constexpr bool operator==(const LineSegment&, const LineSegment&) = default;
};

struct Disk {
  Point center;
  Coord radius = 1;

  friend constexpr bool operator==(const Disk&, const Disk&) = default;
};

using Shape = std::variant<AxisSegment, LineSegment, Disk>;

enum class Family : std::uint8_t { axis, segment, disk };

struct GeomObject {
  ObjectId id;
  Shape shape;

  Family family() const { return static_cast<Family>(shape.index()); }

  friend bool operator==(const GeomObject&, const GeomObject&) = default;
};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::axis:
      return "axis";
    case Family::segment:
      return "segment";
    case Family::disk:
      return "disk";
  }
  return "?";
}

inline Family parse_family(const std::string& name) {
  if (name == "axis") return Family::axis;
  if (name == "segment") return Family::segment;
  if (name == "disk") return Family::disk;
  throw Error("unknown family '" + name + "' (expected axis, segment or disk)");
}

/// Closed, axis-parallel bounding box.
struct Box {
  Coord min_x = 0;
  Coord min_y = 0;
  Coord max_x = 0;
  Coord max_y = 0;

  bool overlaps(const Box& o) const {
    return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
  }

  Box merged(const Box& o) const {
    return {std::min(min_x, o.min_x), std::min(min_y, o.min_y), std::max(max_x, o.max_x),
            std::max(max_y, o.max_y)};
  }
};

inline Box bounding_box(const AxisSegment& s) {
  if (s.orientation == Orientation::horizontal) return {s.low, s.fixed, s.high, s.fixed};
  return {s.fixed, s.low, s.fixed, s.high};
}

inline Box bounding_box(const LineSegment& s) {
  return {std::min(s.p1.x, s.p2.x), std::min(s.p1.y, s.p2.y), std::max(s.p1.x, s.p2.x),
          std::max(s.p1.y, s.p2.y)};
}

inline Box bounding_box(const Disk& d) {
  return {d.center.x - d.radius, d.center.y - d.radius, d.center.x + d.radius,
          d.center.y + d.radius};
}

inline Box bounding_box(const Shape& s) {
  return std::visit([](const auto& v) { return bounding_box(v); }, s);
}

namespace detail {

inline int sign(Coord v) { return (v > 0) - (v < 0); }

/// Sign of the cross product (b - a) x (c - a).
inline int orientation(const Point& a, const Point& b, const Point& c) {
  return sign((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

/// For c collinear with a-b: is c inside the closed segment?
inline bool on_collinear_segment(const Point& a, const Point& b, const Point& c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

inline Coord squared(Coord v) { return v * v; }

}  // namespace detail

inline bool intersects(const AxisSegment& a, const AxisSegment& b) {
  if (a.orientation == b.orientation) {
    return a.fixed == b.fixed && std::max(a.low, b.low) <= std::min(a.high, b.high);
  }
  const AxisSegment& h = a.orientation == Orientation::horizontal ? a : b;
  const AxisSegment& v = a.orientation == Orientation::horizontal ? b : a;
  return h.low <= v.fixed && v.fixed <= h.high && v.low <= h.fixed && h.fixed <= v.high;
}

inline bool intersects(const LineSegment& a, const LineSegment& b) {
  using detail::on_collinear_segment;
  using detail::orientation;
  const int o1 = orientation(a.p1, a.p2, b.p1);
  const int o2 = orientation(a.p1, a.p2, b.p2);
  const int o3 = orientation(b.p1, b.p2, a.p1);
  const int o4 = orientation(b.p1, b.p2, a.p2);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_collinear_segment(a.p1, a.p2, b.p1)) return true;
  if (o2 == 0 && on_collinear_segment(a.p1, a.p2, b.p2)) return true;
  if (o3 == 0 && on_collinear_segment(b.p1, b.p2, a.p1)) return true;
  if (o4 == 0 && on_collinear_segment(b.p1, b.p2, a.p2)) return true;
  return false;
}

inline bool intersects(const Disk& a, const Disk& b) {
  using detail::squared;
  return squared(a.center.x - b.center.x) + squared(a.center.y - b.center.y) <=
         squared(a.radius + b.radius);
}

/// Closed-set intersection: touching counts. Throws FamilyMismatch for
/// objects of different families.
inline bool intersects(const Shape& a, const Shape& b) {
  if (a.index() != b.index()) throw FamilyMismatch();
  switch (a.index()) {
    case 0:
      return intersects(std::get<AxisSegment>(a), std::get<AxisSegment>(b));
    case 1:
      return intersects(std::get<LineSegment>(a), std::get<LineSegment>(b));
    default:
      return intersects(std::get<Disk>(a), std::get<Disk>(b));
  }
}

inline bool intersects(const GeomObject& a, const GeomObject& b) {
  return intersects(a.shape, b.shape);
}

/// Throws InvalidObject unless the shape is well formed and its defining
/// coordinates lie within [-bound, bound].
inline void validate(const GeomObject& obj, Coord bound = kCoordLimit) {
  if (bound < 1 || bound > kCoordLimit) throw InvalidObject("coordinate bound out of range");
  auto in_range = [bound](Coord v) { return -bound <= v && v <= bound; };
  auto fail = [&obj](const std::string& why) {
    throw InvalidObject("object " + std::to_string(obj.id.value) + ": " + why);
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AxisSegment>) {
          if (!(s.low < s.high)) fail("axis segment needs low < high");
          if (!in_range(s.fixed) || !in_range(s.low) || !in_range(s.high))
            fail("coordinate out of bounds");
        } else if constexpr (std::is_same_v<T, LineSegment>) {
          if (s.p1 == s.p2) fail("degenerate line segment");
          if (!in_range(s.p1.x) || !in_range(s.p1.y) || !in_range(s.p2.x) || !in_range(s.p2.y))
            fail("coordinate out of bounds");
        } else {
          if (s.radius < 1 || s.radius > kCoordLimit) fail("disk radius out of range");
          if (!in_range(s.center.x) || !in_range(s.center.y)) fail("coordinate out of bounds");
        }
      },
      obj.shape);
}

/// True for parallel axis segments on the same line whose closed ranges meet.
inline bool collinear_overlap(const AxisSegment& a, const AxisSegment& b) {
  return a.orientation == b.orientation && a.fixed == b.fixed &&
         std::max(a.low, b.low) <= std::min(a.high, b.high);
}

/// Live set of axis segments indexed by supporting line, used to reject
/// inputs that would put two collinear segments on top of each other.
class AxisLineIndex {
 public:
  bool conflicts(const AxisSegment& s) const {
    auto line = lines_.find({s.orientation, s.fixed});
    if (line == lines_.end()) return false;
    const auto& ranges = line->second;
    // First range starting after s.high cannot meet s; the one before it may.
    auto it = ranges.upper_bound(s.high);
    if (it == ranges.begin()) return false;
    --it;
    return it->second.first >= s.low;
  }

  void insert(const AxisSegment& s, ObjectId id) {
    lines_[{s.orientation, s.fixed}].emplace(s.low, std::pair{s.high, id});
  }

  void erase(const AxisSegment& s) {
    auto line = lines_.find({s.orientation, s.fixed});
    if (line == lines_.end()) return;
    line->second.erase(s.low);
    if (line->second.empty()) lines_.erase(line);
  }

  void clear() { lines_.clear(); }

 private:
  // (orientation, fixed) -> low -> (high, id); ranges on one line are disjoint.
  std::map<std::pair<Orientation, Coord>, std::map<Coord, std::pair<Coord, ObjectId>>> lines_;
};

/// Throws InvalidObject if two segments of the set overlap collinearly.
inline void validate_general_position(std::span<const GeomObject> objs) {
  AxisLineIndex index;
  for (const auto& o : objs) {
    const auto* s = std::get_if<AxisSegment>(&o.shape);
    if (s == nullptr) continue;
    if (index.conflicts(*s)) {
      throw InvalidObject("object " + std::to_string(o.id.value) +
                          ": collinear overlap with another axis segment");
    }
    index.insert(*s, o.id);
  }
}

using IndexPair = std::pair<std::uint32_t, std::uint32_t>;
using IdPair = std::pair<ObjectId, ObjectId>;

/// Reference all-pairs enumeration.
inline std::vector<IndexPair> brute_force_pairs(std::span<const GeomObject> objs) {
  std::vector<IndexPair> out;
  for (std::uint32_t i = 0; i < objs.size(); ++i) {
    for (std::uint32_t j = i + 1; j < objs.size(); ++j) {
      if (intersects(objs[i], objs[j])) out.emplace_back(i, j);
    }
  }
  return out;
}

/// Sort-and-sweep along x over bounding boxes. Output sorted by (i, j), i < j.
inline std::vector<IndexPair> sweep_pairs(std::span<const GeomObject> objs) {
  std::vector<Box> boxes(objs.size());
  std::vector<std::uint32_t> order(objs.size());
  for (std::uint32_t i = 0; i < objs.size(); ++i) boxes[i] = bounding_box(objs[i].shape);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return boxes[a].min_x < boxes[b].min_x; });
  std::vector<IndexPair> out;
  for (std::size_t a = 0; a < order.size(); ++a) {
    const Box& ba = boxes[order[a]];
    for (std::size_t b = a + 1; b < order.size() && boxes[order[b]].min_x <= ba.max_x; ++b) {
      if (!ba.overlaps(boxes[order[b]])) continue;
      if (intersects(objs[order[a]], objs[order[b]])) {
        out.emplace_back(std::min(order[a], order[b]), std::max(order[a], order[b]));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Uniform-grid accelerated enumeration; output identical to
/// brute_force_pairs (sorted by (i, j), i < j).
inline std::vector<IndexPair> grid_pairs(std::span<const GeomObject> objs) {
  const std::size_t n = objs.size();
  std::vector<IndexPair> out;
  if (n < 2) return out;
  std::vector<Box> boxes(n);
  double extent_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    boxes[i] = bounding_box(objs[i].shape);
    extent_sum += static_cast<double>(
        std::max(boxes[i].max_x - boxes[i].min_x, boxes[i].max_y - boxes[i].min_y));
  }
  Coord cell = std::max<Coord>(1, static_cast<Coord>(extent_sum / static_cast<double>(n)) + 1);
  auto cell_of = [&](Coord v) {
    // floor division for negative coordinates
    return v >= 0 ? v / cell : -((-v + cell - 1) / cell);
  };
  auto references = [&] {
    std::uint64_t total = 0;
    for (const auto& b : boxes) {
      total += static_cast<std::uint64_t>(cell_of(b.max_x) - cell_of(b.min_x) + 1) *
               static_cast<std::uint64_t>(cell_of(b.max_y) - cell_of(b.min_y) + 1);
    }
    return total;
  };
  while (references() > 16 * n + 64) cell *= 2;

  struct Ref {
    std::uint64_t key;
    std::uint32_t index;
  };
  auto key_of = [](Coord cx, Coord cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint32_t>(cy);
  };
  std::vector<Ref> refs;
  refs.reserve(references());
  for (std::uint32_t i = 0; i < n; ++i) {
    const Box& b = boxes[i];
    for (Coord cx = cell_of(b.min_x); cx <= cell_of(b.max_x); ++cx) {
      for (Coord cy = cell_of(b.min_y); cy <= cell_of(b.max_y); ++cy) {
        refs.push_back({key_of(cx, cy), i});
      }
    }
  }
  std::sort(refs.begin(), refs.end(), [](const Ref& a, const Ref& b) {
    return a.key != b.key ? a.key < b.key : a.index < b.index;
  });
  for (std::size_t lo = 0; lo < refs.size();) {
    std::size_t hi = lo;
    while (hi < refs.size() && refs[hi].key == refs[lo].key) ++hi;
    for (std::size_t a = lo; a < hi; ++a) {
      for (std::size_t b = a + 1; b < hi; ++b) {
        const std::uint32_t i = refs[a].index;
        const std::uint32_t j = refs[b].index;
        if (!boxes[i].overlaps(boxes[j])) continue;
        // Test each pair only in the cell holding the corner of the box overlap.
        const Coord rx = std::max(boxes[i].min_x, boxes[j].min_x);
        const Coord ry = std::max(boxes[i].min_y, boxes[j].min_y);
        if (key_of(cell_of(rx), cell_of(ry)) != refs[lo].key) continue;
        if (intersects(objs[i], objs[j])) out.emplace_back(i, j);
      }
    }
    lo = hi;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Unordered pairs {a, b} of intersecting objects, as (smaller id, larger id),
/// sorted ascending.
inline std::vector<IdPair> pairwise_intersections(std::span<const GeomObject> objs) {
  std::vector<IdPair> out;
  for (auto [i, j] : grid_pairs(objs)) {
    ObjectId a = objs[i].id;
    ObjectId b = objs[j].id;
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace geoconn
