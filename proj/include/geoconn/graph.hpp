#pragma once

#include <cstddef>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geoconn/core.hpp"

namespace geoconn {

/// Disjoint sets over 0..n-1 with union by rank and path halving.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) { reset(n); }

  void reset(std::size_t n) {
    parent_.resize(n);
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    rank_.assign(n, 0);
    components_ = n;
  }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  /// Returns true when a and b were in different sets.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    --components_;
    return true;
  }

  std::size_t size() const { return parent_.size(); }
  std::size_t component_count() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
  std::size_t components_ = 0;
};

using Edge = std::pair<std::size_t, std::size_t>;

/// Component labels in canonical form: labels are numbered 0, 1, ... in
/// order of each component's smallest vertex.
struct LabeledGraph {
  std::vector<std::size_t> labels;
  std::size_t count = 0;

  friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;
};

namespace detail {

inline void check_edges(std::size_t vertex_count, std::span<const Edge> edges) {
  for (const auto& [a, b] : edges) {
    if (a >= vertex_count || b >= vertex_count) {
      throw MalformedGraph("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                           ") references an undeclared vertex");
    }
  }
}

}  // namespace detail

/// Connected components of an undirected graph on vertices 0..vertex_count-1.
inline LabeledGraph components(std::size_t vertex_count, std::span<const Edge> edges) {
  detail::check_edges(vertex_count, edges);
  UnionFind uf(vertex_count);
  for (const auto& [a, b] : edges) uf.unite(a, b);
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> root_label(vertex_count, unset);
  LabeledGraph out;
  out.labels.resize(vertex_count);
  for (std::size_t v = 0; v < vertex_count; ++v) {
    std::size_t& label = root_label[uf.find(v)];
    if (label == unset) label = out.count++;
    out.labels[v] = label;
  }
  return out;
}

/// Breadth-first labeling; same canonical form as components().
inline LabeledGraph bfs_components(std::size_t vertex_count, std::span<const Edge> edges) {
  detail::check_edges(vertex_count, edges);
  std::vector<std::vector<std::size_t>> adjacency(vertex_count);
  for (const auto& [a, b] : edges) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  LabeledGraph out;
  out.labels.assign(vertex_count, unset);
  for (std::size_t s = 0; s < vertex_count; ++s) {
    if (out.labels[s] != unset) continue;
    std::queue<std::size_t> frontier;
    frontier.push(s);
    out.labels[s] = out.count;
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t w : adjacency[v]) {
        if (out.labels[w] == unset) {
          out.labels[w] = out.count;
          frontier.push(w);
        }
      }
    }
    ++out.count;
  }
  return out;
}

}  // namespace geoconn
