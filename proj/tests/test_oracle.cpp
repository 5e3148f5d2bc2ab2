#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "geoconn/oracle.hpp"

using namespace geoconn;

namespace {

GeomObject disk(std::uint64_t id, Coord x, Coord y, Coord r) { return {ObjectId{id}, Disk{{x, y}, r}}; }

std::vector<GeomObject> random_objects(Family f, std::size_t n, double density, std::uint64_t seed,
                                       std::uint64_t first_id = 1) {
  ObjectGenerator gen(f, n, density, 2000, seed);
  std::vector<GeomObject> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({ObjectId{first_id + i}, gen.next()});
  return out;
}

}  // namespace

TEST(OracleComponents, DisjointDisks) {
  std::vector<GeomObject> objs;
  for (std::uint64_t i = 0; i < 10; ++i) objs.push_back(disk(i + 1, static_cast<Coord>(10 * i), 0, 2));
  const auto p = oracle::components(objs);
  EXPECT_EQ(p.count(), 10u);
  for (std::size_t c = 0; c < p.count(); ++c) EXPECT_EQ(p.size(c), 1u);
}

TEST(OracleComponents, DiskChain) {
  std::vector<GeomObject> objs;
  for (std::uint64_t i = 0; i < 7; ++i) objs.push_back(disk(i + 1, static_cast<Coord>(3 * i), 0, 2));
  const auto p = oracle::components(objs);
  ASSERT_EQ(p.count(), 1u);
  EXPECT_EQ(p.size(0), 7u);
}

TEST(OracleComponents, MatchesBfsOverGridEdges) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto objs = random_objects(Family::axis, 50, 2.5, seed);
    std::vector<Edge> edges;
    for (auto [i, j] : grid_pairs(objs)) edges.emplace_back(i, j);
    const auto bfs = bfs_components(objs.size(), edges);
    const auto p = oracle::components(objs);
    ASSERT_EQ(p.count(), bfs.count);
    for (std::size_t i = 0; i < objs.size(); ++i) {
      EXPECT_EQ(p.component_of.at(objs[i].id), bfs.labels[i]);
    }
  }
}

TEST(OracleSignature, EmptyQueue) {
  const std::vector<GeomObject> c{disk(1, 0, 0, 3)};
  EXPECT_TRUE(oracle::signature(c, {}).empty());
}

TEST(OracleSignature, DirectBits) {
  const std::vector<GeomObject> c{disk(1, 0, 0, 3)};
  const std::vector<GeomObject> q{disk(2, 4, 0, 2), disk(3, 100, 100, 2)};
  EXPECT_EQ(oracle::signature(c, q).to_string(), "10");
}

TEST(OracleSignature, MatchesDoubleLoop) {
  const auto objs = random_objects(Family::disk, 80, 3.0, 11);
  const auto q = random_objects(Family::disk, 9, 1.0, 12, 1000);
  const auto p = oracle::components(objs);
  for (std::size_t c = 0; c < p.count(); ++c) {
    const Signature sig = oracle::signature_of(objs, p, c, q);
    ASSERT_EQ(sig.size(), q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      bool hit = false;
      for (std::size_t m : p.members[c]) hit = hit || intersects(objs[m], q[i]);
      EXPECT_EQ(sig.test(i), hit);
    }
  }
}

TEST(OracleClasses, EmptyQueueIsOneClass) {
  const auto objs = random_objects(Family::segment, 60, 0.5, 3);
  const auto p = oracle::components(objs);
  const auto cls = oracle::classes(objs, p, {});
  ASSERT_EQ(cls.size(), 1u);
  EXPECT_EQ(cls[0].size(), p.count());
}

TEST(OracleClasses, OneSegmentSplitsTwo) {
  const std::vector<GeomObject> objs{{ObjectId{1}, LineSegment{{0, 0}, {10, 0}}},
                                     {ObjectId{2}, LineSegment{{0, 50}, {10, 50}}}};
  const std::vector<GeomObject> q{{ObjectId{3}, LineSegment{{5, -5}, {5, 5}}}};
  const auto p = oracle::components(objs);
  EXPECT_EQ(oracle::classes(objs, p, q).size(), 2u);
}

TEST(OracleClasses, PartitionAndSignatureGrouping) {
  const auto objs = random_objects(Family::disk, 150, 1.0, 21);
  const auto q = random_objects(Family::disk, 6, 0.05, 22, 1000);
  const auto p = oracle::components(objs);
  const auto cls = oracle::classes(objs, p, q);
  std::set<std::size_t> seen;
  for (const auto& group : cls) {
    const Signature first = oracle::signature_of(objs, p, group.front(), q);
    for (std::size_t c : group) {
      EXPECT_TRUE(seen.insert(c).second);
      EXPECT_EQ(oracle::signature_of(objs, p, c, q), first);
    }
  }
  EXPECT_EQ(seen.size(), p.count());
  for (std::size_t a = 0; a < cls.size(); ++a) {
    for (std::size_t b = a + 1; b < cls.size(); ++b) {
      EXPECT_NE(oracle::signature_of(objs, p, cls[a][0], q), oracle::signature_of(objs, p, cls[b][0], q));
    }
  }
}

TEST(OracleClasses, RefinementIsMonotone) {
  const auto objs = random_objects(Family::axis, 120, 1.0, 31);
  auto q = random_objects(Family::axis, 8, 4.0, 32, 1000);
  const auto p = oracle::components(objs);
  std::vector<std::size_t> class_of_prev(p.count(), 0);
  for (std::size_t k = 0; k <= q.size(); ++k) {
    const auto cls = oracle::classes(objs, p, std::span<const GeomObject>(q).first(k));
    std::vector<std::size_t> class_of(p.count());
    for (std::size_t g = 0; g < cls.size(); ++g) {
      for (std::size_t c : cls[g]) class_of[c] = g;
    }
    // Components together now were together before.
    for (std::size_t a = 0; a < p.count(); ++a) {
      for (std::size_t b = 0; b < p.count(); ++b) {
        if (class_of[a] == class_of[b]) {
          ASSERT_EQ(class_of_prev[a], class_of_prev[b]);
        }
      }
    }
    class_of_prev = class_of;
  }
}

TEST(ClassCountExperiment, SmallSweeps) {
  oracle::ClassCountParams params;
  params.family = Family::disk;
  params.n = 400;
  params.seed = 4;
  params.q_values = {0, 1, 2, 5, 10};
  const auto rows = oracle::class_count_experiment(params);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].classes, 1u);
  EXPECT_LE(rows[1].classes, 2u);
  for (const auto& r : rows) {
    EXPECT_LE(r.classes, std::min<std::size_t>(r.components, std::size_t{1} << r.q));
    EXPECT_EQ(r.seed, 4u);
  }
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].classes, rows[i - 1].classes);
}
