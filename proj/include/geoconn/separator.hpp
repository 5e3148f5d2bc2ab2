#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "geoconn/geometry.hpp"
#include "geoconn/hierarchy.hpp"

namespace geoconn {

/// Balanced square separator of a disk set.
///
/// Coordinates of the square and of the stabbing points are stored
/// multiplied by `scale` = 2b, which makes them integers: the square B_t has
/// center (center_x, center_y) / scale and half side half_side / scale.
struct SeparatorResult {
  Coord scale = 1;
  Coord center_x = 0;
  Coord center_y = 0;
  Coord half_side = 0;
  /// Smallest square holding ceil(n/5) centers: lower-left corner and side.
  Point b0_corner;
  Coord b0_side = 0;
  std::size_t b = 0;
  std::size_t t_index = 0;  // t = t_index / b
  std::vector<Point> stabbing_points;  // scaled
  std::vector<ObjectId> inside_ids;
  std::vector<ObjectId> outside_ids;
  std::vector<ObjectId> boundary_ids;
  std::size_t small_boundary = 0;  // boundary disks of radius <= r/b

  double t() const { return static_cast<double>(t_index) / static_cast<double>(b); }
};

enum class SquareRelation { inside, outside, boundary };

namespace detail {

__extension__ using Wide = __int128;

/// Relation of a disk (scaled center p, scaled radius rho) to the closed
/// square with scaled center c and half side h.
inline SquareRelation relate(Wide px, Wide py, Wide rho, Wide cx, Wide cy, Wide h) {
  const Wide xl = cx - h, xh = cx + h, yl = cy - h, yh = cy + h;
  const Wide dx = std::max({xl - px, Wide{0}, px - xh});
  const Wide dy = std::max({yl - py, Wide{0}, py - yh});
  if (dx * dx + dy * dy > rho * rho) return SquareRelation::outside;
  if (px - rho > xl && px + rho < xh && py - rho > yl && py + rho < yh) return SquareRelation::inside;
  return SquareRelation::boundary;
}

/// Range add, global max over a fixed array; leaves hold counts.
class MaxAddTree {
 public:
  explicit MaxAddTree(std::size_t n) : n_(std::max<std::size_t>(n, 1)), max_(4 * n_, 0), add_(4 * n_, 0) {}

  void add(std::size_t l, std::size_t r, int v) { add(1, 0, n_ - 1, l, r, v); }
  int max() const { return max_[1]; }

  /// Leftmost position attaining the maximum.
  std::size_t argmax() const {
    std::size_t node = 1, lo = 0, hi = n_ - 1;
    int carry = 0;
    while (lo < hi) {
      carry += add_[node];
      const std::size_t mid = (lo + hi) / 2;
      if (max_[2 * node] + carry == max_[1]) {
        node = 2 * node;
        hi = mid;
      } else {
        node = 2 * node + 1;
        lo = mid + 1;
      }
    }
    return lo;
  }

 private:
  void add(std::size_t node, std::size_t lo, std::size_t hi, std::size_t l, std::size_t r, int v) {
    if (r < lo || hi < l) return;
    if (l <= lo && hi <= r) {
      max_[node] += v;
      add_[node] += v;
      return;
    }
    const std::size_t mid = (lo + hi) / 2;
    add(2 * node, lo, mid, l, r, v);
    add(2 * node + 1, mid + 1, hi, l, r, v);
    max_[node] = add_[node] + std::max(max_[2 * node], max_[2 * node + 1]);
  }

  std::size_t n_;
  std::vector<int> max_;
  std::vector<int> add_;
};

/// Lower-left corner of a closed square of side s holding at least k of
/// the points, if one exists. Sliding window over x, range-add over y.
inline std::optional<Point> square_with_k(std::span<const Point> sorted_by_x, Coord s, std::size_t k) {
  std::vector<Coord> starts;  // candidate bottom edges y - s
  starts.reserve(sorted_by_x.size());
  for (const auto& p : sorted_by_x) starts.push_back(p.y - s);
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  auto range_of = [&](const Point& p) {
    // Bottom edges Y with Y <= p.y <= Y + s.
    const auto l = std::lower_bound(starts.begin(), starts.end(), p.y - s) - starts.begin();
    const auto r = std::upper_bound(starts.begin(), starts.end(), p.y) - starts.begin() - 1;
    return std::pair<std::size_t, std::size_t>(l, r);
  };
  MaxAddTree tree(starts.size());
  std::size_t right = 0;
  for (std::size_t left = 0; left < sorted_by_x.size(); ++left) {
    if (left > 0) {
      auto [l, r] = range_of(sorted_by_x[left - 1]);
      tree.add(l, r, -1);
    }
    while (right < sorted_by_x.size() && sorted_by_x[right].x <= sorted_by_x[left].x + s) {
      auto [l, r] = range_of(sorted_by_x[right]);
      tree.add(l, r, +1);
      ++right;
    }
    if (static_cast<std::size_t>(tree.max()) >= k) return Point{sorted_by_x[left].x, starts[tree.argmax()]};
  }
  return std::nullopt;
}

}  // namespace detail

/// Smallest closed axis-parallel square (integer side) holding at least k of
/// the points: returns (lower-left corner, side). Integer centers make the
/// integer optimum the real optimum.
inline std::pair<Point, Coord> smallest_square_with(std::span<const Point> points, std::size_t k) {
  std::vector<Point> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
  Coord lo = 0;
  Coord hi = 0;
  if (!sorted.empty()) {
    Coord min_y = sorted[0].y, max_y = sorted[0].y;
    for (const auto& p : sorted) min_y = std::min(min_y, p.y), max_y = std::max(max_y, p.y);
    hi = std::max(sorted.back().x - sorted.front().x, max_y - min_y);
  }
  while (lo < hi) {
    const Coord mid = lo + (hi - lo) / 2;
    if (detail::square_with_k(sorted, mid, k)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return {*detail::square_with_k(sorted, lo, k), lo};
}

/// Square whose inside and outside each hold at most 4n/5 disks, with a
/// point set stabbing every disk that meets its boundary.
inline SeparatorResult find_disk_separator(std::span<const GeomObject> disks) {
  const std::size_t n = disks.size();
  if (n < 25) throw InstanceTooSmall("separator needs at least 25 disks, got " + std::to_string(n));
  std::vector<Point> centers;
  centers.reserve(n);
  for (const auto& o : disks) {
    const auto* d = std::get_if<Disk>(&o.shape);
    if (d == nullptr) throw FamilyMismatch();
    centers.push_back(d->center);
  }

  SeparatorResult out;
  const auto [corner, side] = smallest_square_with(centers, (n + 4) / 5);
  out.b0_corner = corner;
  out.b0_side = side;
  out.b = static_cast<std::size_t>(detail::ceil_sqrt(static_cast<Coord>(n)));
  const auto b = static_cast<Coord>(out.b);
  const Coord scale = 2 * b;
  out.scale = scale;
  out.center_x = scale * corner.x + b * side;
  out.center_y = scale * corner.y + b * side;
  using detail::Wide;
  const Wide cx = out.center_x, cy = out.center_y;

  // Disks of radius <= r/b, i.e. scaled radius <= 2r.
  auto small = [&](const Disk& d) { return d.radius * b <= side; };
  auto half_side = [&](Coord j) { return (b + j) * side; };

  if (side == 0) {
    // Center-coincident majority: the square degenerates to a point.
    out.t_index = 1;
  } else {
    std::size_t best = n + 1;
    for (Coord j = 1; j < b; ++j) {
      std::size_t crossing = 0;
      for (const auto& o : disks) {
        const Disk& d = std::get<Disk>(o.shape);
        if (!small(d)) continue;
        if (detail::relate(Wide{scale} * d.center.x, Wide{scale} * d.center.y, Wide{scale} * d.radius, cx, cy,
                           half_side(j)) == SquareRelation::boundary) {
          ++crossing;
        }
      }
      if (crossing < best) {
        best = crossing;
        out.t_index = static_cast<std::size_t>(j);
      }
    }
  }
  out.half_side = half_side(static_cast<Coord>(out.t_index));
  const Wide h = out.half_side;

  std::set<std::pair<Coord, Coord>> lattice;
  std::vector<Point> centers_used;
  for (const auto& o : disks) {
    const Disk& d = std::get<Disk>(o.shape);
    const Wide px = Wide{scale} * d.center.x, py = Wide{scale} * d.center.y, rho = Wide{scale} * d.radius;
    switch (detail::relate(px, py, rho, cx, cy, h)) {
      case SquareRelation::inside:
        out.inside_ids.push_back(o.id);
        continue;
      case SquareRelation::outside:
        out.outside_ids.push_back(o.id);
        continue;
      case SquareRelation::boundary:
        out.boundary_ids.push_back(o.id);
        break;
    }
    auto contains = [&](Wide x, Wide y) { return (x - px) * (x - px) + (y - py) * (y - py) <= rho * rho; };
    if (side == 0) {
      lattice.emplace(out.center_x, out.center_y);
      continue;
    }
    if (small(d)) {
      ++out.small_boundary;
      centers_used.push_back({static_cast<Coord>(px), static_cast<Coord>(py)});
      continue;
    }
    // A big disk holds a ball of radius r/b (scaled 2 side) centered within
    // r/b of the boundary; snap that ball's center to the lattice of
    // spacing r/(2b) (scaled: side) anchored at the square's center.
    const double fx = static_cast<double>(px), fy = static_cast<double>(py);
    const double fcx = static_cast<double>(cx), fcy = static_cast<double>(cy), fh = static_cast<double>(h);
    double zx = std::clamp(fx, fcx - fh, fcx + fh);
    double zy = std::clamp(fy, fcy - fh, fcy + fh);
    if (zx > fcx - fh && zx < fcx + fh && zy > fcy - fh && zy < fcy + fh) {
      // Center strictly inside: push to the nearest side.
      const double gaps[4] = {zx - (fcx - fh), fcx + fh - zx, zy - (fcy - fh), fcy + fh - zy};
      const int k = static_cast<int>(std::min_element(gaps, gaps + 4) - gaps);
      if (k == 0) zx = fcx - fh;
      if (k == 1) zx = fcx + fh;
      if (k == 2) zy = fcy - fh;
      if (k == 3) zy = fcy + fh;
    }
    const double ball = 2.0 * static_cast<double>(side);
    const double len = std::hypot(fx - zx, fy - zy);
    double wx = fx, wy = fy;
    if (len >= ball) {
      wx = zx + (fx - zx) * ball / len;
      wy = zy + (fy - zy) * ball / len;
    }
    const auto snap = [&](double v, Wide origin) {
      return origin + Wide{std::llround((v - static_cast<double>(origin)) / static_cast<double>(side))} * side;
    };
    const Wide gx = snap(wx, cx), gy = snap(wy, cy);
    std::optional<std::pair<Coord, Coord>> chosen;
    for (int radius = 0; radius <= 3 && !chosen; ++radius) {
      for (int i = -radius; i <= radius && !chosen; ++i) {
        for (int k = -radius; k <= radius && !chosen; ++k) {
          const Wide x = gx + Wide{i} * side, y = gy + Wide{k} * side;
          if (contains(x, y)) chosen = {static_cast<Coord>(x), static_cast<Coord>(y)};
        }
      }
    }
    if (chosen) {
      lattice.insert(*chosen);
    } else {
      centers_used.push_back({static_cast<Coord>(px), static_cast<Coord>(py)});
    }
  }
  for (const auto& [x, y] : lattice) out.stabbing_points.push_back({x, y});
  std::sort(centers_used.begin(), centers_used.end(),
            [](const Point& a, const Point& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  centers_used.erase(std::unique(centers_used.begin(), centers_used.end()), centers_used.end());
  for (const auto& p : centers_used) {
    if (!lattice.contains({p.x, p.y})) out.stabbing_points.push_back(p);
  }
  return out;
}

/// Relation of one disk to the separator's square, by exact arithmetic.
inline SquareRelation relate(const Disk& d, const SeparatorResult& r) {
  const detail::Wide s = r.scale;
  return detail::relate(s * d.center.x, s * d.center.y, s * d.radius, r.center_x, r.center_y, r.half_side);
}

/// Does the disk contain the (scaled) point?
inline bool contains_scaled(const Disk& d, const Point& p, Coord scale) {
  const detail::Wide dx = detail::Wide{p.x} - detail::Wide{scale} * d.center.x;
  const detail::Wide dy = detail::Wide{p.y} - detail::Wide{scale} * d.center.y;
  const detail::Wide rho = detail::Wide{scale} * d.radius;
  return dx * dx + dy * dy <= rho * rho;
}

}  // namespace geoconn
