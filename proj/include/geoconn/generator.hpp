#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <utility>

#include "geoconn/geometry.hpp"

namespace geoconn {

/// Deterministic 64-bit generator (splitmix64). Used wherever runs must be
/// reproducible byte-for-byte from a seed.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>((*this)());
    const std::uint64_t limit = max() - max() % span;
    std::uint64_t v;
    do {
      v = (*this)();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

  /// Uniform real in [0, 1).
  double unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Random single-family objects in [-bound, bound]^2. `density` is the
/// target expected intersection degree of an object among `n` peers; the
/// object scale is derived from it per family. Axis segments never reuse a
/// supporting line, so generated sets are always in general position.
class ObjectGenerator {
 public:
  ObjectGenerator(Family family, std::size_t n, double density, Coord bound, std::uint64_t seed)
      : family_(family), bound_(bound), rng_(seed) {
    const double b = static_cast<double>(bound);
    const double nn = static_cast<double>(std::max<std::size_t>(n, 1));
    const double d = std::max(density, 0.0);
    switch (family) {
      case Family::axis:
        scale_ = 2.0 * b * std::sqrt(2.0 * d / nn);
        break;
      case Family::segment:
        scale_ = b * std::sqrt(2.0 * std::numbers::pi * d / nn);
        break;
      case Family::disk:
        scale_ = b * std::sqrt(d / (std::numbers::pi * nn));
        break;
    }
    scale_ = std::clamp(scale_, 1.0, b);
  }

  Family family() const { return family_; }

  Shape next() {
    switch (family_) {
      case Family::axis:
        return next_axis();
      case Family::segment:
        return next_segment();
      case Family::disk:
        return next_disk();
    }
    return next_disk();
  }

  SplitMix64& rng() { return rng_; }

 private:
  Coord length() {
    // Uniform in [scale/2, 3 scale/2], at least 1.
    const double l = scale_ * (0.5 + rng_.unit());
    return std::max<Coord>(1, static_cast<Coord>(std::llround(l)));
  }

  Shape next_axis() {
    if (used_lines_.size() >= 2 * static_cast<std::size_t>(2 * bound_ + 1)) {
      throw Error("coordinate bound too small for this many axis segments");
    }
    for (;;) {
      const auto orientation = rng_.uniform(0, 1) == 0 ? Orientation::horizontal : Orientation::vertical;
      const Coord fixed = rng_.uniform(-bound_, bound_);
      if (used_lines_.contains({orientation, fixed})) continue;
      const Coord len = std::min<Coord>(length(), 2 * bound_);
      const Coord low = rng_.uniform(-bound_, bound_ - len);
      used_lines_.insert({orientation, fixed});
      return AxisSegment{orientation, fixed, low, low + len};
    }
  }

  Shape next_segment() {
    for (;;) {
      const Point a{rng_.uniform(-bound_, bound_), rng_.uniform(-bound_, bound_)};
      const double angle = rng_.unit() * 2.0 * std::numbers::pi;
      const double len = static_cast<double>(length());
      const Point b{std::clamp<Coord>(a.x + std::llround(len * std::cos(angle)), -bound_, bound_),
                    std::clamp<Coord>(a.y + std::llround(len * std::sin(angle)), -bound_, bound_)};
      if (a == b) continue;
      return LineSegment{a, b};
    }
  }

  Shape next_disk() {
    const Point c{rng_.uniform(-bound_, bound_), rng_.uniform(-bound_, bound_)};
    return Disk{c, length()};
  }

  Family family_;
  Coord bound_;
  SplitMix64 rng_;
  double scale_ = 1.0;
  std::set<std::pair<Orientation, Coord>> used_lines_;
};

}  // namespace geoconn
