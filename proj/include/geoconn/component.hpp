#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "geoconn/core.hpp"
#include "geoconn/geometry.hpp"

namespace geoconn {

/// A connected component of the static object set. Immutable once built and
/// shared between the engine, the class registry and the reporters.
struct Component {
  ComponentId id;
  std::vector<GeomObject> objects;

  std::size_t size() const { return objects.size(); }
};

using ComponentPtr = std::shared_ptr<const Component>;

inline ComponentPtr make_component(ComponentId id, std::vector<GeomObject> objects) {
  return std::make_shared<const Component>(Component{id, std::move(objects)});
}

/// Does any object of c meet s?
inline bool component_intersects(const Component& c, const GeomObject& s) {
  for (const auto& o : c.objects) {
    if (intersects(o, s)) return true;
  }
  return false;
}

}  // namespace geoconn
