#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "geoconn/classes.hpp"
#include "geoconn/graph.hpp"
#include "geoconn/reporters.hpp"

namespace geoconn {

/// Default phase length for a phase starting with n live objects:
/// ceil(n^e) with e = 1/5 (axis), 5/21 (segment), 1/9 (disk), at least min_q.
inline std::size_t default_phase_length(Family family, std::size_t n, std::size_t min_q = 4) {
  long double e = 0;
  switch (family) {
    case Family::axis:
      e = 1.0L / 5;
      break;
    case Family::segment:
      e = 5.0L / 21;
      break;
    case Family::disk:
      e = 1.0L / 9;
      break;
  }
  const auto q = n == 0 ? std::size_t{0}
                        : static_cast<std::size_t>(std::ceil(std::pow(static_cast<long double>(n), e) - 1e-12L));
  return std::max(q, min_q);
}

struct EngineConfig {
  Family family = Family::disk;
  Coord bound = kCoordLimit;
  /// Overrides q_policy when set.
  std::optional<std::size_t> fixed_q;
  std::size_t min_q = 4;
  /// n -> phase length; empty means default_phase_length.
  std::function<std::size_t(std::size_t)> q_policy;
  /// Re-check signatures and the proxy graph after every update.
  bool verify_hooks = false;
  /// Cutting parameter of the segment structure. Kept for completeness; the
  /// segment reporter here does not use cuttings.
  double cutting_r = 0;
};

struct PhaseSummary {
  std::size_t index = 0;
  std::size_t n = 0;  // live objects at phase start
  std::size_t q = 0;
  std::size_t updates = 0;
  std::size_t q_inserts = 0;
  std::size_t splits = 0;
  std::uint64_t displaced_weight = 0;
  std::uint64_t sigma = 0;
  std::uint64_t replay_weight = 0;
  std::uint32_t max_displacements = 0;
  double aggregate_bound = 0;
};

/// Fully dynamic connectivity of the intersection graph of one family.
class Engine {
 public:
  explicit Engine(std::vector<GeomObject> objects, EngineConfig config = {})
      : config_(std::move(config)), registry_(reporter_factory(config_.family, config_.bound)) {
    if (config_.min_q < 1) throw Error("min_q must be positive");
    for (auto& o : objects) admit(o);
    for (auto& o : objects) {
      place_slot(o.id) = {0, 0, Slot::in_s};
      shapes_.emplace(o.id, std::move(o));
    }
    start_phase();
  }

  Family family() const { return config_.family; }
  const EngineConfig& config() const { return config_; }

  ObjectId insert(const GeomObject& obj) {
    admit(obj);
    const std::size_t index = q_objects_.size();
    q_objects_.push_back(obj);
    q_live_.push_back(true);
    q_adj_.emplace_back();
    for (std::size_t j = 0; j < index; ++j) {
      if (q_live_[j] && intersects(q_objects_[j], obj)) q_adj_[index].push_back(j);
    }
    place_slot(obj.id) = {0, static_cast<std::uint32_t>(index), Slot::in_q};
    shapes_.emplace(obj.id, obj);
    for (const SplitOutcome& out : registry_.insert_q(obj)) {
      if (!out.displaced) continue;
      // Touches each displaced object once, within the ledger's budget.
      for (const auto& [cid, c] : registry_.get(*out.displaced).members) set_class(*c, *out.displaced);
    }
    finish_update();
    return obj.id;
  }

  /// Inserts with the next unused id.
  ObjectId insert(const Shape& shape) { return insert(GeomObject{ObjectId{next_id_}, shape}); }

  void remove(ObjectId id) {
    auto it = shapes_.find(id);
    if (it == shapes_.end()) throw UnknownObject(id);
    const GeomObject obj = std::move(it->second);
    shapes_.erase(it);
    const Slot rec = *find_slot(id);
    erase_slot(id);
    if (const auto* s = std::get_if<AxisSegment>(&obj.shape)) lines_.erase(*s);
    if (rec.state == Slot::in_s) {
      delete_from_s(obj.id, ComponentId{rec.ref});
    } else {
      q_live_[rec.ref] = false;
    }
    finish_update();
  }

  /// Are u and v connected? A constant number of hash lookups.
  bool query(ObjectId u, ObjectId v) const {
    last_lookups_ = 0;
    const Slot& a = lookup(u);
    const Slot& b = lookup(v);
    const bool both_s = a.state == Slot::in_s && b.state == Slot::in_s;
    if (both_s && a.ref == b.ref) return true;
    const Vertex va = vertex_of(a);
    const Vertex vb = vertex_of(b);
    if (both_s && (va.isolated || vb.isolated)) return false;
    return va.label == vb.label;
  }

  std::size_t num_components() const { return component_count_; }
  bool contains(ObjectId id) const { return shapes_.contains(id); }
  std::size_t size() const { return shapes_.size(); }

  /// Live objects, ascending id.
  std::vector<GeomObject> live_objects() const {
    std::vector<GeomObject> out;
    out.reserve(shapes_.size());
    for (const auto& [id, o] : shapes_) out.push_back(o);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
  }

  /// Starts a new phase over the current live set.
  void rebuild_phase() {
    history_.push_back(current_phase());
    start_phase();
  }

  std::size_t phase_length() const { return q_; }
  std::size_t update_count() const { return updates_; }
  std::size_t phase_index() const { return phase_; }
  const ClassRegistry& registry() const { return registry_; }
  const std::vector<PhaseSummary>& phase_history() const { return history_; }

  PhaseSummary current_phase() const {
    const DisplacementLedger& l = registry_.ledger();
    return {phase_,       phase_n_,         q_,          updates_,          l.inserts(),
            l.splits(),   l.displaced_weight(), l.sigma(), l.replay_weight(), l.max_displacements(),
            l.aggregate_bound()};
  }

  /// Hash lookups made by the most recent query().
  std::size_t query_lookups() const { return last_lookups_; }

  /// Number of vertices and edges of the proxy graph.
  std::pair<std::size_t, std::size_t> proxy_graph_size() const {
    return {class_vertex_.size() + live_q_, h_edges_.size()};
  }

  /// Every class signature bit agrees with direct predicates on every member.
  bool check_signatures() const {
    for (const auto& [id, cls] : registry_.classes()) {
      if (cls.signature.size() != q_objects_.size()) return false;
      for (const auto& [cid, c] : cls.members) {
        for (std::size_t i = 0; i < q_objects_.size(); ++i) {
          if (cls.signature.test(i) != component_intersects(*c, q_objects_[i])) return false;
        }
      }
    }
    return true;
  }

  /// The proxy graph's edges are exactly those the direct predicates demand.
  bool check_proxy_graph() const {
    std::vector<Edge> expected;
    for (const auto& [id, cls] : registry_.classes()) {
      const std::size_t cv = class_vertex_.at(id).index;
      for (std::size_t i = 0; i < q_objects_.size(); ++i) {
        if (!q_live_[i]) continue;
        const bool hit = std::any_of(cls.members.begin(), cls.members.end(), [&](const auto& m) {
          return component_intersects(*m.second, q_objects_[i]);
        });
        if (hit) expected.emplace_back(cv, q_vertex_[i]);
      }
    }
    for (std::size_t i = 0; i < q_objects_.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (q_live_[i] && q_live_[j] && intersects(q_objects_[i], q_objects_[j])) {
          expected.emplace_back(q_vertex_[j], q_vertex_[i]);
        }
      }
    }
    for (const auto& [id, cls] : registry_.classes()) {
      for (const auto& [cid, c] : cls.members) {
        for (const auto& o : c->objects) {
          const Slot* slot = find_slot(o.id);
          if (slot == nullptr || slot->state != Slot::in_s || slot->ref != cid.value ||
              slot->cls + class_base_ != id.value) {
            return false;
          }
        }
      }
    }
    std::vector<Edge> actual = h_edges_;
    std::sort(expected.begin(), expected.end());
    std::sort(actual.begin(), actual.end());
    return expected == actual;
  }

 private:
  // Everything query() needs about one object, in eight bytes.
  struct Slot {
    enum State : std::uint32_t { empty, in_s, in_q };
    std::uint32_t cls = 0;       // class id minus class_base_ (S)
    std::uint32_t ref : 30 = 0;  // component id (S) or insertion index (Q)
    State state : 2 = empty;
  };

  static constexpr std::size_t kNoVertex = static_cast<std::size_t>(-1);

  struct Vertex {
    std::size_t index = 0;
    std::size_t label = 0;
    bool isolated = false;
  };

  void admit(const GeomObject& obj) {
    if (obj.family() != config_.family) throw FamilyMismatch();
    validate(obj, config_.bound);
    if (!used_ids_.insert(obj.id).second) {
      throw InvalidObject("object id " + std::to_string(obj.id.value) + " already used");
    }
    if (const auto* s = std::get_if<AxisSegment>(&obj.shape)) {
      if (lines_.conflicts(*s)) {
        used_ids_.erase(obj.id);
        throw InvalidObject("object " + std::to_string(obj.id.value) +
                            ": collinear overlap with a live axis segment");
      }
      lines_.insert(*s, obj.id);
    }
    next_id_ = std::max(next_id_, obj.id.value + 1);
  }

  // Slots of ids in [base_, base_ + direct_.size()) sit in a dense table;
  // any other id goes to far_. The window moves at every phase start.
  bool in_window(ObjectId id) const { return id.value >= base_ && id.value - base_ < direct_.size(); }

  const Slot* find_slot(ObjectId id) const {
    if (in_window(id)) {
      const Slot& s = direct_[id.value - base_];
      return s.state == Slot::empty ? nullptr : &s;
    }
    auto it = far_.find(id);
    return it == far_.end() ? nullptr : &it->second;
  }

  Slot& slot_of(ObjectId id) { return in_window(id) ? direct_[id.value - base_] : far_.at(id); }
  Slot& place_slot(ObjectId id) { return in_window(id) ? direct_[id.value - base_] : far_[id]; }

  void erase_slot(ObjectId id) {
    if (in_window(id)) {
      direct_[id.value - base_] = {};
    } else {
      far_.erase(id);
    }
  }

  // Recenters the window on the live ids, leaving room for the ids the
  // coming phase is likely to insert.
  void reindex_slots() {
    std::vector<std::pair<ObjectId, Slot>> all;
    all.reserve(shapes_.size());
    std::uint64_t lo = next_id_;
    for (const auto& [id, o] : shapes_) {
      all.emplace_back(id, *find_slot(id));
      lo = std::min(lo, id.value);
    }
    base_ = lo;
    const std::size_t want = std::max<std::size_t>(kMinWindow, 2 * shapes_.size());
    const std::size_t span = next_id_ - lo + shapes_.size() + kMinWindow;
    direct_.assign(std::min(want, span), Slot{});
    far_.clear();
    for (const auto& [id, slot] : all) place_slot(id) = slot;
  }

  void set_class(const Component& c, ClassId cls) {
    const auto rel = static_cast<std::uint32_t>(cls.value - class_base_);
    for (const auto& o : c.objects) slot_of(o.id).cls = rel;
  }

  const Slot& lookup(ObjectId id) const {
    ++last_lookups_;
    const Slot* slot = find_slot(id);
    if (slot == nullptr) throw UnknownObject(id);
    return *slot;
  }

  Vertex vertex_of(const Slot& rec) const {
    ++last_lookups_;
    if (rec.state == Slot::in_q) {
      const std::size_t v = q_vertex_[rec.ref];
      return {v, h_labels_[v], false};
    }
    return class_vertex_.at(ClassId{rec.cls + class_base_});
  }

  std::size_t next_phase_length(std::size_t n) const {
    if (config_.fixed_q) return std::max(*config_.fixed_q, config_.min_q);
    if (config_.q_policy) return std::max(config_.q_policy(n), config_.min_q);
    return default_phase_length(config_.family, n, config_.min_q);
  }

  // Component ids restart every phase.
  ComponentPtr new_component(std::vector<GeomObject> members) {
    ComponentPtr c = make_component(ComponentId{next_component_++}, std::move(members));
    for (const auto& o : c->objects) slot_of(o.id).ref = static_cast<std::uint32_t>(c->id.value);
    components_.emplace(c->id, c);
    return c;
  }

  void note_class(const ComponentPtr& c) { set_class(*c, registry_.class_of(c->id)); }

  // Connected pieces of `objs` (ascending id), largest first, ties broken
  // by smallest object id.
  static std::vector<std::vector<GeomObject>> split_components(std::vector<GeomObject> objs) {
    std::sort(objs.begin(), objs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    UnionFind uf(objs.size());
    for (auto [i, j] : grid_pairs(objs)) uf.unite(i, j);
    std::unordered_map<std::size_t, std::size_t> piece_of;
    std::vector<std::vector<GeomObject>> pieces;
    for (std::size_t i = 0; i < objs.size(); ++i) {
      auto [it, fresh] = piece_of.emplace(uf.find(i), pieces.size());
      if (fresh) pieces.emplace_back();
      pieces[it->second].push_back(objs[i]);
    }
    std::stable_sort(pieces.begin(), pieces.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return pieces;
  }

  void start_phase() {
    ++phase_;
    q_objects_.clear();
    q_live_.clear();
    q_adj_.clear();
    components_.clear();
    next_component_ = 1;
    updates_ = 0;
    phase_n_ = shapes_.size();
    q_ = next_phase_length(phase_n_);

    reindex_slots();
    std::vector<GeomObject> all;
    all.reserve(shapes_.size());
    for (const auto& [id, o] : shapes_) {
      slot_of(id).state = Slot::in_s;
      all.push_back(o);
    }
    std::vector<ComponentPtr> comps;
    for (auto& piece : split_components(std::move(all))) comps.push_back(new_component(std::move(piece)));
    registry_.init_phase(comps);
    // Class ids only grow, so the phase's first class is the smallest.
    if (!comps.empty()) class_base_ = registry_.class_of(comps.front()->id).value;
    for (const auto& c : comps) note_class(c);
    rebuild_proxy_graph();
  }

  void delete_from_s(ObjectId gone, ComponentId component) {
    const ComponentPtr c = components_.at(component);
    registry_.delete_component(c->id);
    components_.erase(c->id);
    std::vector<GeomObject> rest;
    rest.reserve(c->size());
    for (const auto& o : c->objects) {
      if (o.id != gone) rest.push_back(o);
    }
    if (rest.empty()) return;
    auto pieces = split_components(std::move(rest));

    // The largest piece becomes its own class, signed by direct tests.
    const ComponentPtr first = new_component(std::move(pieces.front()));
    Signature sig;
    for (const auto& s : q_objects_) sig.push_back(component_intersects(*first, s));
    registry_.insert_singleton(first, sig);
    note_class(first);
    if (pieces.size() == 1) return;

    // The others are at most half of c; classify them by replaying Q.
    std::vector<ComponentPtr> others;
    std::size_t weight = 0;
    for (std::size_t i = 1; i < pieces.size(); ++i) {
      others.push_back(new_component(std::move(pieces[i])));
      weight += others.back()->size();
    }
    registry_.record_replay(weight);
    for (const auto& [comp, signature] :
         classify_by_replay(others, q_objects_, reporter_factory(config_.family, config_.bound))) {
      registry_.insert_component(comp, signature);
      note_class(comp);
    }
  }

  void finish_update() {
    ++updates_;
    rebuild_proxy_graph();
    if (config_.verify_hooks) {
      if (!check_signatures()) throw Error("signature check failed");
      if (!check_proxy_graph()) throw Error("proxy graph check failed");
    }
    if (updates_ >= q_) rebuild_phase();
  }

  // Class vertices first (ascending class id), then live insertions.
  void rebuild_proxy_graph() {
    class_vertex_.clear();
    q_vertex_.assign(q_objects_.size(), kNoVertex);
    h_edges_.clear();
    std::size_t v = 0;
    for (const auto& [id, cls] : registry_.classes()) class_vertex_[id] = {v++, 0, false};
    live_q_ = 0;
    for (std::size_t i = 0; i < q_objects_.size(); ++i) {
      if (q_live_[i]) {
        q_vertex_[i] = v++;
        ++live_q_;
      }
    }
    std::vector<bool> touched(v, false);
    auto add_edge = [&](std::size_t a, std::size_t b) {
      h_edges_.emplace_back(a, b);
      touched[a] = touched[b] = true;
    };
    for (const auto& [id, cls] : registry_.classes()) {
      const std::size_t cv = class_vertex_[id].index;
      for (std::size_t i = 0; i < q_objects_.size(); ++i) {
        if (q_live_[i] && cls.signature.test(i)) add_edge(cv, q_vertex_[i]);
      }
    }
    for (std::size_t i = 0; i < q_objects_.size(); ++i) {
      if (!q_live_[i]) continue;
      for (std::size_t j : q_adj_[i]) {
        if (q_live_[j]) add_edge(q_vertex_[j], q_vertex_[i]);
      }
    }
    const LabeledGraph g = components(v, h_edges_);
    h_labels_ = g.labels;
    std::size_t count = g.count;
    for (auto& [id, vert] : class_vertex_) {
      vert.label = h_labels_[vert.index];
      vert.isolated = !touched[vert.index];
      if (vert.isolated) count = count - 1 + registry_.get(id).members.size();
    }
    component_count_ = count;
  }

  EngineConfig config_;
  ClassRegistry registry_;
  static constexpr std::size_t kMinWindow = 1024;
  std::unordered_map<ObjectId, GeomObject> shapes_;  // live objects
  std::vector<Slot> direct_;
  std::uint64_t base_ = 0;
  std::unordered_map<ObjectId, Slot> far_;
  std::uint64_t class_base_ = 0;
  std::unordered_set<ObjectId> used_ids_;  // ids are never reused
  std::uint64_t next_id_ = 1;
  AxisLineIndex lines_;

  std::unordered_map<ComponentId, ComponentPtr> components_;
  std::uint64_t next_component_ = 1;

  std::vector<GeomObject> q_objects_;
  std::vector<bool> q_live_;
  std::vector<std::vector<std::size_t>> q_adj_;  // earlier Q entries met by entry i

  std::unordered_map<ClassId, Vertex> class_vertex_;
  std::vector<std::size_t> q_vertex_;  // by insertion index; kNoVertex if dead
  std::size_t live_q_ = 0;
  std::vector<Edge> h_edges_;
  std::vector<std::size_t> h_labels_;
  std::size_t component_count_ = 0;

  std::size_t phase_ = 0;
  std::size_t phase_n_ = 0;
  std::size_t q_ = 0;
  std::size_t updates_ = 0;
  std::vector<PhaseSummary> history_;
  mutable std::size_t last_lookups_ = 0;
};

}  // namespace geoconn
