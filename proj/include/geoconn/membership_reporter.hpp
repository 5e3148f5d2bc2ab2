#pragma once

#include <map>
#include <memory>
#include <optional>

#include "geoconn/hierarchy.hpp"
#include "geoconn/reporter.hpp"

namespace geoconn {

/// Reporter that keeps one membership index per component and answers both
/// streams by walking the components in ascending id order, classifying
/// each with a single index query. Index must be constructible from a span
/// of objects and provide `bool hits(const GeomObject&, std::uint64_t& work)`.
template <typename Index>
class MembershipReporter final : public Reporter {
 public:
  void insert_component(const ComponentPtr& c) override {
    auto [it, fresh] = entries_.try_emplace(c->id, Entry{Index(c->objects), c->size()});
    if (!fresh) throw Error("component " + std::to_string(c->id.value) + " already present");
    objects_ += c->size();
  }

  void delete_component(ComponentId id) override {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw MissingComponent(id);
    objects_ -= it->second.size;
    entries_.erase(it);
  }

  std::unique_ptr<ReportStream> stream_intersecting(const GeomObject& s) override {
    return std::make_unique<Stream>(*this, s, true);
  }

  std::unique_ptr<ReportStream> stream_nonintersecting(const GeomObject& s) override {
    return std::make_unique<Stream>(*this, s, false);
  }

  std::size_t component_count() const override { return entries_.size(); }
  std::size_t object_count() const override { return objects_; }
  bool contains(ComponentId id) const override { return entries_.contains(id); }

 private:
  struct Entry {
    Index index;
    std::size_t size;
  };

  class Stream final : public ReportStream {
   public:
    Stream(MembershipReporter& owner, const GeomObject& s, bool want_hits)
        : owner_(owner), query_(s), want_hits_(want_hits), it_(owner.entries_.begin()) {}

    std::optional<ReportItem> next() override {
      while (it_ != owner_.entries_.end()) {
        auto current = it_++;
        ++owner_.work_;
        if (current->second.index.hits(query_, owner_.work_) == want_hits_) {
          return ReportItem{current->first, current->second.size};
        }
      }
      return std::nullopt;
    }

   private:
    MembershipReporter& owner_;
    GeomObject query_;
    bool want_hits_;
    typename std::map<ComponentId, Entry>::const_iterator it_;
  };

  std::map<ComponentId, Entry> entries_;
  std::size_t objects_ = 0;
};

using DiskReporter = MembershipReporter<DiskDistanceIndex>;
using SegmentReporter = MembershipReporter<SegmentBoxIndex>;

}  // namespace geoconn
