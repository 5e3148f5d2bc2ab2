#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geoconn/component.hpp"
#include "geoconn/reporter.hpp"
#include "geoconn/signature.hpp"

namespace geoconn {

/// Components that all meet exactly the same objects of the phase's
/// insertion sequence, with one reporter over them.
struct EqClass {
  ClassId id;
  Signature signature;
  std::map<ComponentId, ComponentPtr> members;
  std::size_t total_size = 0;
  std::unique_ptr<Reporter> reporter;
};

/// Bookkeeping for the amortized analysis of one phase.
class DisplacementLedger {
 public:
  void reset(std::size_t initial_weight) {
    *this = DisplacementLedger{};
    initial_ = initial_weight;
  }

  void record_displacement(const Component& c) {
    displaced_weight_ += c.size();
    for (const auto& o : c.objects) {
      const std::uint32_t n = ++per_object_[o.id];
      max_per_object_ = std::max(max_per_object_, n);
    }
  }

  void record_insertion(std::size_t splits) {
    splits_ += splits;
    splits_per_insertion_.push_back(splits);
  }

  void record_component_insertion(std::size_t weight) { sigma_ += weight; }
  void record_replay(std::size_t weight) { replay_weight_ += weight; }

  /// Object weight of the class collection at phase start.
  std::size_t initial_weight() const { return initial_; }
  std::size_t inserts() const { return splits_per_insertion_.size(); }
  std::size_t splits() const { return splits_; }
  std::uint64_t displaced_weight() const { return displaced_weight_; }
  /// Weight added through component insertions (Σ).
  std::uint64_t sigma() const { return sigma_; }
  /// Weight of the pieces classified by replay after deletions.
  std::uint64_t replay_weight() const { return replay_weight_; }
  std::uint32_t max_displacements() const { return max_per_object_; }
  std::uint32_t displacements(ObjectId id) const {
    auto it = per_object_.find(id);
    return it == per_object_.end() ? 0 : it->second;
  }
  const std::unordered_map<ObjectId, std::uint32_t>& per_object() const { return per_object_; }
  const std::vector<std::size_t>& splits_per_insertion() const { return splits_per_insertion_; }

  /// floor(log2 w) + 1 for w >= 1.
  static std::uint32_t halving_bound(std::uint64_t w) {
    return w == 0 ? 0 : static_cast<std::uint32_t>(std::bit_width(w));
  }

  /// Potential-argument cap on total displaced weight: W (log2 W + 1),
  /// W = initial weight + Σ.
  double aggregate_bound() const {
    const double w = static_cast<double>(initial_ + sigma_);
    return w <= 1 ? w : w * (std::log2(w) + 1);
  }

  static std::string csv_header() { return "phase,inserts,splits,displaced_weight,sigma"; }
  std::string csv_row(std::size_t phase) const {
    std::ostringstream out;
    out << phase << ',' << inserts() << ',' << splits_ << ',' << displaced_weight_ << ',' << sigma_;
    return out.str();
  }

 private:
  std::size_t initial_ = 0;
  std::size_t splits_ = 0;
  std::uint64_t displaced_weight_ = 0;
  std::uint64_t sigma_ = 0;
  std::uint64_t replay_weight_ = 0;
  std::uint32_t max_per_object_ = 0;
  std::unordered_map<ObjectId, std::uint32_t> per_object_;
  std::vector<std::size_t> splits_per_insertion_;
};

struct SplitOutcome {
  ClassId original;
  std::optional<ClassId> displaced;
  bool displaced_intersects = false;  // which side left
  std::size_t displaced_weight = 0;
};

/// The evolving partition of live components into equivalence classes.
class ClassRegistry {
 public:
  explicit ClassRegistry(ReporterFactory factory) : factory_(std::move(factory)) {}

  /// Starts a phase: all components in one class with the empty signature.
  void init_phase(std::span<const ComponentPtr> components) {
    classes_.clear();
    index_.clear();
    class_of_.clear();
    q_length_ = 0;
    std::size_t weight = 0;
    for (const auto& c : components) weight += c->size();
    ledger_.reset(weight);
    if (components.empty()) return;
    EqClass& cls = create_class(Signature{});
    for (const auto& c : components) add_member(cls, c);
    cls.reporter->build(components);
    index_.emplace(cls.signature, cls.id);
  }

  /// Refines every class by its relation to s; all signatures gain a bit.
  std::vector<SplitOutcome> insert_q(const GeomObject& s) {
    std::vector<ClassId> ids;
    ids.reserve(classes_.size());
    for (const auto& [id, cls] : classes_) ids.push_back(id);
    std::vector<SplitOutcome> out;
    std::size_t splits = 0;
    for (ClassId id : ids) {
      out.push_back(split_class(id, s));
      if (out.back().displaced) ++splits;
    }
    ++q_length_;
    ledger_.record_insertion(splits);
    rebuild_index();
    return out;
  }

  /// One step of insert_q: races both streams of the class's reporter,
  /// moves the lighter side to a fresh class and appends the new bit to
  /// both signatures. Leaves the signature index stale until insert_q ends.
  SplitOutcome split_class(ClassId id, const GeomObject& s) {
    EqClass& cls = at(id);
    const std::size_t total = cls.total_size;
    SplitOutcome outcome{id, std::nullopt, false, 0};

    struct Side {
      explicit Side(std::unique_ptr<ReportStream> s) : stream(std::move(s)) {}

      std::unique_ptr<ReportStream> stream;
      std::vector<ReportItem> items;
      std::size_t weight = 0;
      bool done = false;

      void step() {
        if (auto item = stream->next()) {
          weight += item->size;
          items.push_back(*item);
        } else {
          done = true;
        }
      }
      void finish() {
        while (!done) step();
      }
    };
    Side hit{cls.reporter->stream_intersecting(s)};
    Side miss{cls.reporter->stream_nonintersecting(s)};

    // Strict alternation until one stream runs dry or one side holds more
    // than half the weight; either way the lighter side is then known.
    for (;;) {
      hit.step();
      if (hit.done || 2 * hit.weight > total) break;
      miss.step();
      if (miss.done || 2 * miss.weight > total) break;
    }
    std::size_t hit_weight = hit.weight;
    std::size_t miss_weight = miss.weight;
    if (hit.done) {
      miss_weight = total - hit_weight;
    } else if (miss.done) {
      hit_weight = total - miss_weight;
    } else if (2 * hit.weight > total) {
      miss.finish();
      miss_weight = miss.weight;
      hit_weight = total - miss_weight;
    } else {
      hit.finish();
      hit_weight = hit.weight;
      miss_weight = total - hit_weight;
    }

    if (hit_weight == 0 || miss_weight == 0) {
      cls.signature.push_back(hit_weight > 0);
      return outcome;
    }
    const bool displace_hit = hit_weight <= miss_weight;
    Side& leaving = displace_hit ? hit : miss;
    leaving.finish();
    std::vector<ReportItem> moved = std::move(leaving.items);
    hit.stream.reset();
    miss.stream.reset();

    const Signature base = cls.signature;
    cls.signature.push_back(!displace_hit);
    EqClass& fresh = create_class(base.extended(displace_hit));
    std::vector<ComponentPtr> components;
    components.reserve(moved.size());
    for (const ReportItem& item : moved) {
      ComponentPtr c = cls.members.at(item.id);
      cls.reporter->delete_component(item.id);
      cls.members.erase(item.id);
      cls.total_size -= c->size();
      add_member(fresh, c);
      ledger_.record_displacement(*c);
      components.push_back(std::move(c));
    }
    fresh.reporter->build(components);

    outcome.displaced = fresh.id;
    outcome.displaced_intersects = displace_hit;
    outcome.displaced_weight = fresh.total_size;
    return outcome;
  }

  /// Removes a component; a class left empty is retired.
  void delete_component(ComponentId c) {
    auto it = class_of_.find(c);
    if (it == class_of_.end()) throw MissingComponent(c);
    EqClass& cls = at(it->second);
    cls.reporter->delete_component(c);
    cls.total_size -= cls.members.at(c)->size();
    cls.members.erase(c);
    class_of_.erase(it);
    if (cls.members.empty()) retire(cls.id);
  }

  /// Adds a component whose signature is known: joins the class indexed
  /// under that signature or founds a new one.
  ClassId insert_component(const ComponentPtr& c, const Signature& signature) {
    check_length(signature);
    ledger_.record_component_insertion(c->size());
    auto it = index_.find(signature);
    if (it != index_.end()) {
      EqClass& cls = at(it->second);
      cls.reporter->insert_component(c);
      add_member(cls, c);
      return cls.id;
    }
    EqClass& cls = create_class(signature);
    cls.reporter->insert_component(c);
    add_member(cls, c);
    index_.emplace(signature, cls.id);
    return cls.id;
  }

  /// Adds a component as its own class even if its signature is taken. The
  /// new class is indexed only when no class holds that signature yet.
  ClassId insert_singleton(const ComponentPtr& c, const Signature& signature) {
    check_length(signature);
    ledger_.record_component_insertion(c->size());
    EqClass& cls = create_class(signature);
    cls.reporter->insert_component(c);
    add_member(cls, c);
    index_.emplace(signature, cls.id);
    return cls.id;
  }

  ClassId class_of(ComponentId c) const {
    auto it = class_of_.find(c);
    if (it == class_of_.end()) throw MissingComponent(c);
    return it->second;
  }

  const EqClass& get(ClassId id) const {
    auto it = classes_.find(id);
    if (it == classes_.end()) throw Error("unknown class " + std::to_string(id.value));
    return it->second;
  }

  std::optional<ClassId> find_signature(const Signature& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<ClassId, EqClass>& classes() const { return classes_; }
  std::size_t class_count() const { return classes_.size(); }
  std::size_t component_count() const { return class_of_.size(); }
  std::size_t q_length() const { return q_length_; }
  const DisplacementLedger& ledger() const { return ledger_; }
  void record_replay(std::size_t weight) { ledger_.record_replay(weight); }

 private:
  EqClass& at(ClassId id) { return classes_.at(id); }

  EqClass& create_class(Signature signature) {
    const ClassId id{next_class_++};
    auto [it, fresh] = classes_.emplace(id, EqClass{id, std::move(signature), {}, 0, factory_()});
    return it->second;
  }

  void add_member(EqClass& cls, const ComponentPtr& c) {
    cls.members.emplace(c->id, c);
    cls.total_size += c->size();
    class_of_[c->id] = cls.id;
  }

  void retire(ClassId id) {
    auto it = index_.find(classes_.at(id).signature);
    if (it != index_.end() && it->second == id) index_.erase(it);
    classes_.erase(id);
  }

  // Oldest class wins a shared signature, so an indexed class stays indexed.
  void rebuild_index() {
    index_.clear();
    for (const auto& [id, cls] : classes_) index_.emplace(cls.signature, id);
  }

  void check_length(const Signature& s) const {
    if (s.size() != q_length_) {
      throw Error("signature has " + std::to_string(s.size()) + " bits, phase has " +
                  std::to_string(q_length_) + " insertions");
    }
  }

  ReporterFactory factory_;
  std::map<ClassId, EqClass> classes_;
  std::unordered_map<Signature, ClassId, SignatureHash> index_;
  std::unordered_map<ComponentId, ClassId> class_of_;
  std::size_t q_length_ = 0;
  std::uint64_t next_class_ = 1;  // never reused
  DisplacementLedger ledger_;
};

/// Signatures of `components` with respect to `q`, obtained by running the
/// splitting procedure on a throwaway registry. Output follows input order.
inline std::vector<std::pair<ComponentPtr, Signature>> classify_by_replay(
    std::span<const ComponentPtr> components, std::span<const GeomObject> q,
    const ReporterFactory& factory) {
  ClassRegistry scratch(factory);
  scratch.init_phase(components);
  for (const auto& s : q) scratch.insert_q(s);
  std::vector<std::pair<ComponentPtr, Signature>> out;
  out.reserve(components.size());
  for (const auto& c : components) {
    out.emplace_back(c, scratch.get(scratch.class_of(c->id)).signature);
  }
  return out;
}

}  // namespace geoconn
