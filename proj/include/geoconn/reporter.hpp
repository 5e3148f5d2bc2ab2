#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "geoconn/component.hpp"

namespace geoconn {

struct ReportItem {
  ComponentId id;
  std::size_t size = 0;

  friend bool operator==(const ReportItem&, const ReportItem&) = default;
};

/// Lazy stream of components. Valid only while its reporter is not mutated.
class ReportStream {
 public:
  virtual ~ReportStream() = default;
  virtual std::optional<ReportItem> next() = 0;
};

/// Component (non-)intersection reporting over the components of one class.
///
/// For a query object s, stream_intersecting(s) yields every live component
/// that meets s and stream_nonintersecting(s) every live component that does
/// not, each exactly once. The two streams are meant to be stepped
/// alternately by the caller; each produces its items on demand.
class Reporter {
 public:
  virtual ~Reporter() = default;

  /// Inserts every component; backends may bulk-load an empty reporter.
  virtual void build(std::span<const ComponentPtr> components) {
    for (const auto& c : components) insert_component(c);
  }

  /// Throws Error if a component with the same id is already present.
  virtual void insert_component(const ComponentPtr& c) = 0;
  /// Throws MissingComponent for an unknown id.
  virtual void delete_component(ComponentId id) = 0;

  virtual std::unique_ptr<ReportStream> stream_intersecting(const GeomObject& s) = 0;
  virtual std::unique_ptr<ReportStream> stream_nonintersecting(const GeomObject& s) = 0;

  virtual std::size_t component_count() const = 0;
  /// Total number of objects over the live components.
  virtual std::size_t object_count() const = 0;
  virtual bool contains(ComponentId id) const = 0;

  /// Elementary steps spent inside streams since construction.
  std::uint64_t work_counter() const { return work_; }

 protected:
  std::uint64_t work_ = 0;
};

using ReporterFactory = std::function<std::unique_ptr<Reporter>()>;

/// Drains a stream into a vector.
inline std::vector<ReportItem> drain(ReportStream& stream) {
  std::vector<ReportItem> out;
  while (auto item = stream.next()) out.push_back(*item);
  return out;
}

}  // namespace geoconn
