#include <gtest/gtest.h>

#include <algorithm>

#include "geoconn/generator.hpp"
#include "geoconn/geometry.hpp"

using namespace geoconn;

namespace {

GeomObject disk(std::uint64_t id, Coord x, Coord y, Coord r) { return {ObjectId{id}, Disk{{x, y}, r}}; }
GeomObject seg(std::uint64_t id, Coord x1, Coord y1, Coord x2, Coord y2) {
  return {ObjectId{id}, LineSegment{{x1, y1}, {x2, y2}}};
}
GeomObject horiz(std::uint64_t id, Coord y, Coord lo, Coord hi) {
  return {ObjectId{id}, AxisSegment{Orientation::horizontal, y, lo, hi}};
}
GeomObject vert(std::uint64_t id, Coord x, Coord lo, Coord hi) {
  return {ObjectId{id}, AxisSegment{Orientation::vertical, x, lo, hi}};
}

std::vector<GeomObject> random_objects(Family f, std::size_t n, double density, std::uint64_t seed,
                                       Coord bound = 1000) {
  ObjectGenerator gen(f, n, density, bound, seed);
  std::vector<GeomObject> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({ObjectId{i + 1}, gen.next()});
  return out;
}

}  // namespace

TEST(Intersects, TangentDisksTouch) { EXPECT_TRUE(intersects(disk(1, 0, 0, 5), disk(2, 9, 0, 4))); }

TEST(Intersects, SeparatedDisks) { EXPECT_FALSE(intersects(disk(1, 0, 0, 5), disk(2, 10, 0, 4))); }

TEST(Intersects, NestedDisks) { EXPECT_TRUE(intersects(disk(1, 0, 0, 50), disk(2, 3, 3, 1))); }

TEST(Intersects, CrossingSegments) { EXPECT_TRUE(intersects(seg(1, 0, 0, 4, 4), seg(2, 0, 4, 4, 0))); }

TEST(Intersects, SegmentEndpointTouch) { EXPECT_TRUE(intersects(seg(1, 0, 0, 4, 0), seg(2, 4, 0, 6, 3))); }

TEST(Intersects, CollinearSegments) {
  EXPECT_TRUE(intersects(seg(1, 0, 0, 4, 4), seg(2, 4, 4, 6, 6)));
  EXPECT_FALSE(intersects(seg(1, 0, 0, 4, 4), seg(2, 5, 5, 6, 6)));
}

TEST(Intersects, ParallelSegmentsApart) { EXPECT_FALSE(intersects(seg(1, 0, 0, 4, 0), seg(2, 0, 1, 4, 1))); }

TEST(Intersects, AxisDisjointRanges) { EXPECT_FALSE(intersects(horiz(1, 0, 0, 2), vert(2, 5, -1, 1))); }

TEST(Intersects, AxisCrossAndTouch) {
  EXPECT_TRUE(intersects(horiz(1, 0, 0, 10), vert(2, 5, -1, 1)));
  EXPECT_TRUE(intersects(horiz(1, 0, 0, 10), vert(2, 10, 0, 3)));  // corner
  EXPECT_FALSE(intersects(horiz(1, 0, 0, 10), vert(2, 5, 1, 3)));
}

TEST(Intersects, MixedFamiliesThrow) {
  EXPECT_THROW((void)intersects(disk(1, 0, 0, 1), seg(2, 0, 0, 1, 1)), FamilyMismatch);
}

TEST(Intersects, SymmetricAndReflexive) {
  for (Family f : {Family::axis, Family::segment, Family::disk}) {
    const auto objs = random_objects(f, 120, 3.0, 7 + static_cast<int>(f));
    for (const auto& a : objs) {
      EXPECT_TRUE(intersects(a, a));
      for (const auto& b : objs) ASSERT_EQ(intersects(a, b), intersects(b, a));
    }
  }
}

TEST(Intersects, LargeCoordinatesStayExact) {
  const Coord m = kCoordLimit;
  EXPECT_TRUE(intersects(disk(1, -m, 0, m), disk(2, m, 0, m)));
  EXPECT_FALSE(intersects(disk(1, -m, -m, m), disk(2, m, m, m)));
  EXPECT_TRUE(intersects(seg(1, -m, -m, m, m), seg(2, -m, m, m, -m)));
  EXPECT_FALSE(intersects(seg(1, -m, -m, m, m - 1), seg(2, -m, -m + 1, m, m)));
}

TEST(Validate, RejectsMalformed) {
  EXPECT_THROW(validate(disk(1, 0, 0, 0)), InvalidObject);
  EXPECT_THROW(validate(seg(1, 1, 1, 1, 1)), InvalidObject);
  EXPECT_THROW(validate(horiz(1, 0, 3, 3)), InvalidObject);
  EXPECT_THROW(validate(disk(1, kCoordLimit + 1, 0, 1)), InvalidObject);
  EXPECT_NO_THROW(validate(disk(1, kCoordLimit, -kCoordLimit, 1)));
}

TEST(GeneralPosition, CollinearOverlapRejected) {
  const std::vector<GeomObject> touching{horiz(1, 0, 0, 5), horiz(2, 0, 5, 9)};
  EXPECT_THROW(validate_general_position(touching), InvalidObject);
  const std::vector<GeomObject> apart{horiz(1, 0, 0, 5), horiz(2, 0, 6, 9), vert(3, 0, 0, 5)};
  EXPECT_NO_THROW(validate_general_position(apart));
}

TEST(GeneralPosition, LineIndexTracksLiveSet) {
  AxisLineIndex index;
  const AxisSegment a{Orientation::vertical, 3, 0, 10};
  index.insert(a, ObjectId{1});
  EXPECT_TRUE(index.conflicts({Orientation::vertical, 3, 10, 12}));
  EXPECT_FALSE(index.conflicts({Orientation::horizontal, 3, 0, 10}));
  index.erase(a);
  EXPECT_FALSE(index.conflicts({Orientation::vertical, 3, 10, 12}));
}

TEST(PairwiseIntersections, Empty) { EXPECT_TRUE(pairwise_intersections({}).empty()); }

TEST(PairwiseIntersections, DiskChain) {
  const std::vector<GeomObject> chain{disk(1, 0, 0, 2), disk(2, 3, 0, 2), disk(3, 6, 0, 2)};
  const std::vector<IdPair> want{{ObjectId{1}, ObjectId{2}}, {ObjectId{2}, ObjectId{3}}};
  EXPECT_EQ(pairwise_intersections(chain), want);
}

TEST(PairwiseIntersections, MatchesDoubleLoop) {
  std::uint64_t seed = 1;
  for (Family f : {Family::axis, Family::segment, Family::disk}) {
    for (double density : {0.3, 2.0, 12.0}) {
      for (std::size_t n : {2, 20, 300}) {
        const auto objs = random_objects(f, n, density, seed++);
        const auto brute = brute_force_pairs(objs);
        EXPECT_EQ(grid_pairs(objs), brute) << family_name(f) << " n=" << n;
        EXPECT_EQ(sweep_pairs(objs), brute) << family_name(f) << " n=" << n;
      }
    }
  }
}

TEST(PairwiseIntersections, SkewedSizes) {
  // One huge disk among many small ones drives the grid cell size up.
  auto objs = random_objects(Family::disk, 200, 0.5, 99);
  objs.push_back(disk(1000, 0, 0, 900));
  EXPECT_EQ(grid_pairs(objs), brute_force_pairs(objs));
}
