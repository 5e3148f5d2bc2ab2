#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "geoconn/generator.hpp"
#include "geoconn/geometry.hpp"
#include "geoconn/graph.hpp"
#include "geoconn/signature.hpp"

namespace geoconn::oracle {

/// Exact connected components of the intersection graph of an object set.
/// Components are numbered in order of their first object in the input.
struct ComponentPartition {
  std::unordered_map<ObjectId, std::size_t> component_of;
  std::vector<std::vector<std::size_t>> members;  // input indices per component

  std::size_t count() const { return members.size(); }
  std::size_t size(std::size_t component) const { return members[component].size(); }
};

/// Brute-force ground truth: sort-and-sweep edge enumeration plus
/// union-find. Deliberately independent of the grid enumeration the engine
/// uses.
inline ComponentPartition components(std::span<const GeomObject> objs) {
  std::vector<Edge> edges;
  for (auto [i, j] : sweep_pairs(objs)) edges.emplace_back(i, j);
  const LabeledGraph g = geoconn::components(objs.size(), edges);
  ComponentPartition out;
  out.members.resize(g.count);
  for (std::size_t i = 0; i < objs.size(); ++i) {
    out.component_of.emplace(objs[i].id, g.labels[i]);
    out.members[g.labels[i]].push_back(i);
  }
  return out;
}

/// Bit i set iff some object of the component meets q[i].
template <typename Range>
Signature signature(const Range& component_objects, std::span<const GeomObject> q) {
  Signature sig;
  for (const auto& s : q) {
    bool hit = false;
    for (const GeomObject& u : component_objects) {
      if (intersects(s, u)) {
        hit = true;
        break;
      }
    }
    sig.push_back(hit);
  }
  return sig;
}

inline Signature signature_of(std::span<const GeomObject> objs, const ComponentPartition& p,
                              std::size_t component, std::span<const GeomObject> q) {
  std::vector<GeomObject> members;
  members.reserve(p.members[component].size());
  for (std::size_t i : p.members[component]) members.push_back(objs[i]);
  return signature(members, q);
}

/// Components grouped by equal signature; groups ordered by their first
/// component, components ascending within a group.
inline std::vector<std::vector<std::size_t>> classes(std::span<const GeomObject> objs,
                                                     const ComponentPartition& p,
                                                     std::span<const GeomObject> q) {
  std::unordered_map<Signature, std::size_t, SignatureHash> group_of;
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t c = 0; c < p.count(); ++c) {
    auto [it, fresh] = group_of.emplace(signature_of(objs, p, c, q), out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(c);
  }
  return out;
}

struct ClassCountRow {
  std::size_t q = 0;
  std::size_t n = 0;
  std::size_t components = 0;
  std::size_t classes = 0;
  std::uint64_t seed = 0;
};

struct ClassCountParams {
  Family family = Family::disk;
  std::size_t n = 4096;
  double density = 1.0;
  Coord bound = 1 << 16;
  std::uint64_t seed = 1;
  std::vector<std::size_t> q_values;
  /// Scale of the query objects relative to the static set's objects.
  double query_scale = 8.0;
};

/// Number of distinct signatures of the components of a random instance
/// with respect to growing prefixes of one random query sequence.
inline std::vector<ClassCountRow> class_count_experiment(const ClassCountParams& params) {
  ObjectGenerator gen(params.family, params.n, params.density, params.bound, params.seed);
  std::vector<GeomObject> objs;
  objs.reserve(params.n);
  for (std::size_t i = 0; i < params.n; ++i) objs.push_back({ObjectId{i + 1}, gen.next()});
  const ComponentPartition p = components(objs);

  const std::size_t q_max =
      params.q_values.empty() ? 0 : *std::max_element(params.q_values.begin(), params.q_values.end());
  // Larger query objects so each one meets several components.
  ObjectGenerator qgen(params.family, params.n,
                       params.density * params.query_scale * params.query_scale, params.bound,
                       params.seed ^ 0x5157ULL);
  std::vector<GeomObject> q;
  for (std::size_t i = 0; i < q_max; ++i) q.push_back({ObjectId{params.n + i + 1}, qgen.next()});

  // Full signatures once; prefixes give every sweep point.
  std::vector<Signature> full;
  full.reserve(p.count());
  for (std::size_t c = 0; c < p.count(); ++c) full.push_back(signature_of(objs, p, c, q));

  std::vector<ClassCountRow> rows;
  for (std::size_t qv : params.q_values) {
    std::unordered_map<Signature, std::size_t, SignatureHash> distinct;
    for (const auto& sig : full) {
      Signature prefix;
      for (std::size_t i = 0; i < qv; ++i) prefix.push_back(sig.test(i));
      distinct.emplace(std::move(prefix), 0);
    }
    rows.push_back({qv, params.n, p.count(), p.count() == 0 ? 0 : distinct.size(), params.seed});
  }
  return rows;
}

}  // namespace geoconn::oracle
