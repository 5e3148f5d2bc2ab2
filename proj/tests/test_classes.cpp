#include <gtest/gtest.h>

#include <set>

#include "geoconn/classes.hpp"
#include "geoconn/oracle.hpp"
#include "geoconn/reporters.hpp"

using namespace geoconn;

namespace {

constexpr Coord kBound = 1000;

struct Instance {
  std::vector<GeomObject> objects;
  std::vector<ComponentPtr> components;
};

Instance random_instance(Family f, std::size_t n, double density, std::uint64_t seed) {
  Instance inst;
  ObjectGenerator gen(f, n, density, kBound, seed);
  for (std::size_t i = 0; i < n; ++i) inst.objects.push_back({ObjectId{i + 1}, gen.next()});
  const auto p = oracle::components(inst.objects);
  for (std::size_t c = 0; c < p.count(); ++c) {
    std::vector<GeomObject> members;
    for (std::size_t i : p.members[c]) members.push_back(inst.objects[i]);
    inst.components.push_back(make_component(ComponentId{c + 1}, std::move(members)));
  }
  return inst;
}

std::vector<GeomObject> random_queries(Family f, std::size_t k, std::uint64_t seed) {
  ObjectGenerator gen(f, 16, 1.0, kBound, seed);
  std::vector<GeomObject> q;
  for (std::size_t i = 0; i < k; ++i) q.push_back({ObjectId{50000 + i}, gen.next()});
  return q;
}

// Registry partition as a set of component-id sets.
std::set<std::set<ComponentId>> partition(const ClassRegistry& r) {
  std::set<std::set<ComponentId>> out;
  for (const auto& [id, cls] : r.classes()) {
    std::set<ComponentId> members;
    for (const auto& [cid, c] : cls.members) members.insert(cid);
    out.insert(members);
  }
  return out;
}

std::set<std::set<ComponentId>> oracle_partition(const std::vector<ComponentPtr>& comps,
                                                 std::span<const GeomObject> q) {
  std::map<std::string, std::set<ComponentId>> by_sig;
  for (const auto& c : comps) by_sig[oracle::signature(c->objects, q).to_string()].insert(c->id);
  std::set<std::set<ComponentId>> out;
  for (auto& [sig, members] : by_sig) out.insert(members);
  return out;
}

void expect_sound(const ClassRegistry& r, std::span<const GeomObject> q) {
  for (const auto& [id, cls] : r.classes()) {
    ASSERT_EQ(cls.signature.size(), q.size());
    std::size_t total = 0;
    for (const auto& [cid, c] : cls.members) {
      total += c->size();
      EXPECT_EQ(cls.signature, oracle::signature(c->objects, q)) << "class " << id.value;
      EXPECT_TRUE(cls.reporter->contains(cid));
    }
    EXPECT_EQ(cls.total_size, total);
    EXPECT_EQ(cls.reporter->component_count(), cls.members.size());
  }
}

ReporterFactory factory(Family f) { return reporter_factory(f, kBound); }

}  // namespace

TEST(ClassRegistry, InitPhase) {
  ClassRegistry empty(factory(Family::disk));
  empty.init_phase({});
  EXPECT_EQ(empty.class_count(), 0u);

  const auto inst = random_instance(Family::disk, 40, 0.5, 1);
  ClassRegistry r(factory(Family::disk));
  r.init_phase(inst.components);
  ASSERT_EQ(r.class_count(), 1u);
  const EqClass& cls = r.classes().begin()->second;
  EXPECT_EQ(cls.total_size, 40u);
  EXPECT_TRUE(cls.signature.empty());
  EXPECT_EQ(r.ledger().initial_weight(), 40u);
}

TEST(ClassRegistry, QueryMissingEverythingDoesNotSplit) {
  const auto inst = random_instance(Family::disk, 30, 0.5, 2);
  ClassRegistry r(factory(Family::disk));
  r.init_phase(inst.components);
  const GeomObject far{ObjectId{999}, Disk{{5000, 5000}, 1}};
  const auto outcome = r.insert_q(far);
  EXPECT_EQ(r.class_count(), 1u);
  EXPECT_FALSE(outcome[0].displaced);
  EXPECT_EQ(r.classes().begin()->second.signature.to_string(), "0");
}

TEST(ClassRegistry, QueryHittingEverythingDoesNotSplit) {
  const auto inst = random_instance(Family::disk, 30, 0.5, 3);
  ClassRegistry r(factory(Family::disk));
  r.init_phase(inst.components);
  r.insert_q({ObjectId{999}, Disk{{0, 0}, 4 * kBound}});
  EXPECT_EQ(r.class_count(), 1u);
  EXPECT_EQ(r.classes().begin()->second.signature.to_string(), "1");
}

TEST(ClassRegistry, SmallerSideIsDisplaced) {
  // Sizes 8 and 2; the query meets only the size-2 component.
  std::vector<GeomObject> big;
  for (std::uint64_t i = 0; i < 8; ++i) big.push_back({ObjectId{i + 1}, Disk{{static_cast<Coord>(2 * i), 0}, 1}});
  const auto c8 = make_component(ComponentId{1}, big);
  const auto c2 = make_component(ComponentId{2}, {{ObjectId{20}, Disk{{0, 100}, 1}}, {ObjectId{21}, Disk{{2, 100}, 1}}});
  ClassRegistry r(factory(Family::disk));
  const std::vector<ComponentPtr> comps{c8, c2};
  r.init_phase(comps);
  const auto outcome = r.insert_q({ObjectId{99}, Disk{{1, 102}, 2}});
  ASSERT_TRUE(outcome[0].displaced);
  EXPECT_TRUE(outcome[0].displaced_intersects);
  EXPECT_EQ(outcome[0].displaced_weight, 2u);
  EXPECT_EQ(r.ledger().displaced_weight(), 2u);
  EXPECT_EQ(r.get(r.class_of(ComponentId{2})).signature.to_string(), "1");
  EXPECT_EQ(r.get(r.class_of(ComponentId{1})).signature.to_string(), "0");
  EXPECT_EQ(r.class_of(ComponentId{1}), outcome[0].original);
  EXPECT_EQ(r.ledger().displacements(ObjectId{20}), 1u);
  EXPECT_EQ(r.ledger().displacements(ObjectId{1}), 0u);
}

TEST(ClassRegistry, TieDisplacesIntersectingSide) {
  const auto a = make_component(ComponentId{1}, {{ObjectId{1}, Disk{{0, 0}, 1}}});
  const auto b = make_component(ComponentId{2}, {{ObjectId{2}, Disk{{100, 0}, 1}}});
  ClassRegistry r(factory(Family::disk));
  const std::vector<ComponentPtr> comps{a, b};
  r.init_phase(comps);
  const auto outcome = r.insert_q({ObjectId{9}, Disk{{100, 3}, 2}});
  ASSERT_TRUE(outcome[0].displaced);
  EXPECT_TRUE(outcome[0].displaced_intersects);
  EXPECT_EQ(r.class_of(ComponentId{2}), *outcome[0].displaced);
}

TEST(ClassRegistry, SingleMemberNeverSplits) {
  const auto a = make_component(ComponentId{1}, {{ObjectId{1}, Disk{{0, 0}, 1}}});
  ClassRegistry r(factory(Family::disk));
  const std::vector<ComponentPtr> comps{a};
  r.init_phase(comps);
  for (const auto& s : random_queries(Family::disk, 10, 5)) r.insert_q(s);
  EXPECT_EQ(r.class_count(), 1u);
}

class RegistryFamily : public ::testing::TestWithParam<Family> {};

TEST_P(RegistryFamily, InsertQMatchesOracleClasses) {
  const Family f = GetParam();
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto inst = random_instance(f, 150, 1.0, seed);
    const auto q = random_queries(f, 12, seed + 100);
    ClassRegistry r(factory(f));
    r.init_phase(inst.components);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto before = partition(r);
      const auto outcomes = r.insert_q(q[i]);
      const auto prefix = std::span<const GeomObject>(q).first(i + 1);
      expect_sound(r, prefix);
      EXPECT_EQ(partition(r), oracle_partition(inst.components, prefix));
      for (const auto& o : outcomes) {
        if (!o.displaced) continue;
        const auto& kept = r.get(o.original);
        const auto& moved = r.get(*o.displaced);
        EXPECT_LE(moved.total_size, kept.total_size);
      }
    }
    const auto& ledger = r.ledger();
    EXPECT_LE(ledger.max_displacements(), DisplacementLedger::halving_bound(ledger.initial_weight()));
    EXPECT_LE(static_cast<double>(ledger.displaced_weight()), ledger.aggregate_bound());
  }
}

TEST_P(RegistryFamily, ReplayEqualsOracleSignatures) {
  const Family f = GetParam();
  const auto inst = random_instance(f, 120, 1.0, 42);
  const auto q = random_queries(f, 9, 43);
  const auto out = classify_by_replay(inst.components, q, factory(f));
  ASSERT_EQ(out.size(), inst.components.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out[i].first, inst.components[i]);
    EXPECT_EQ(out[i].second, oracle::signature(inst.components[i]->objects, q));
  }
}

INSTANTIATE_TEST_SUITE_P(All, RegistryFamily, ::testing::Values(Family::axis, Family::segment, Family::disk),
                         [](const auto& info) { return std::string(family_name(info.param)); });

TEST(ClassifyByReplay, EmptyQueueAndSingleComponent) {
  const auto c = make_component(ComponentId{1}, {{ObjectId{1}, Disk{{0, 0}, 3}}});
  const std::vector<ComponentPtr> comps{c};
  EXPECT_TRUE(classify_by_replay(comps, {}, factory(Family::disk))[0].second.empty());
  const std::vector<GeomObject> q{{ObjectId{2}, Disk{{4, 0}, 1}}, {ObjectId{3}, Disk{{40, 0}, 1}},
                                  {ObjectId{4}, Disk{{0, 0}, 1}}};
  EXPECT_EQ(classify_by_replay(comps, q, factory(Family::disk))[0].second.to_string(), "101");
}

TEST(ClassRegistry, DeleteComponent) {
  const auto inst = random_instance(Family::segment, 60, 0.5, 9);
  ClassRegistry r(factory(Family::segment));
  r.init_phase(inst.components);
  const auto q = random_queries(Family::segment, 6, 10);
  for (const auto& s : q) r.insert_q(s);
  std::vector<ComponentPtr> remaining = inst.components;
  while (remaining.size() > 1) {
    r.delete_component(remaining.back()->id);
    remaining.pop_back();
    // No insert/delete interleaving with splits: the partition still refines
    // the oracle's and every class is sound.
    expect_sound(r, q);
    for (const auto& cls : partition(r)) {
      std::set<std::string> sigs;
      for (ComponentId id : cls) sigs.insert(oracle::signature(inst.components[id.value - 1]->objects, q).to_string());
      EXPECT_EQ(sigs.size(), 1u);
    }
  }
  const ComponentId last = remaining[0]->id;
  const Signature last_sig = r.get(r.class_of(last)).signature;
  r.delete_component(last);
  EXPECT_EQ(r.class_count(), 0u);
  EXPECT_FALSE(r.find_signature(last_sig).has_value());
  EXPECT_THROW(r.delete_component(last), MissingComponent);
}

TEST(ClassRegistry, InsertComponentJoinsOrCreates) {
  ClassRegistry r(factory(Family::disk));
  r.init_phase({});
  const auto a = make_component(ComponentId{1}, {{ObjectId{1}, Disk{{0, 0}, 1}}});
  const auto b = make_component(ComponentId{2}, {{ObjectId{2}, Disk{{10, 0}, 1}}});
  const ClassId ca = r.insert_component(a, Signature{});
  EXPECT_EQ(r.class_count(), 1u);
  const ClassId cb = r.insert_component(b, Signature{});
  EXPECT_EQ(ca, cb);
  EXPECT_EQ(r.get(ca).members.size(), 2u);
  EXPECT_EQ(r.ledger().sigma(), 2u);
  EXPECT_THROW(r.insert_component(make_component(ComponentId{3}, {{ObjectId{3}, Disk{{20, 0}, 1}}}),
                                  Signature::from_string("1")),
               Error);
}

TEST(ClassRegistry, SingletonKeepsExistingIndexEntry) {
  ClassRegistry r(factory(Family::disk));
  const auto a = make_component(ComponentId{1}, {{ObjectId{1}, Disk{{0, 0}, 1}}});
  const std::vector<ComponentPtr> comps{a};
  r.init_phase(comps);
  const ClassId original = r.class_of(a->id);
  const auto b = make_component(ComponentId{2}, {{ObjectId{2}, Disk{{10, 0}, 1}}});
  const ClassId single = r.insert_singleton(b, Signature{});
  EXPECT_NE(single, original);
  EXPECT_EQ(r.class_count(), 2u);
  EXPECT_EQ(*r.find_signature(Signature{}), original);
  const auto c = make_component(ComponentId{3}, {{ObjectId{3}, Disk{{20, 0}, 1}}});
  EXPECT_EQ(r.insert_component(c, Signature{}), original);
}

TEST(DisplacementLedger, HalvingBound) {
  EXPECT_EQ(DisplacementLedger::halving_bound(1), 1u);
  EXPECT_EQ(DisplacementLedger::halving_bound(2), 2u);
  EXPECT_EQ(DisplacementLedger::halving_bound(7), 3u);
  EXPECT_EQ(DisplacementLedger::halving_bound(8), 4u);
  DisplacementLedger l;
  l.reset(10);
  EXPECT_EQ(DisplacementLedger::csv_header(), "phase,inserts,splits,displaced_weight,sigma");
  EXPECT_EQ(l.csv_row(3), "3,0,0,0,0");
}
