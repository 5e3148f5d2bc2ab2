#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "geoconn/generator.hpp"
#include "geoconn/reporter.hpp"

namespace geoconn {

/// A segment in the frame of one reporter side: height `y`, extent
/// [low, high] along the frame's x axis. Horizontal segments map to the
/// frame unchanged; vertical segments map with x and y swapped.
struct FrameSegment {
  Coord y = 0;
  Coord low = 0;
  Coord high = 0;
};

/// Cell of the vertical decomposition of one component's frame segments.
///
/// x is doubled: X = 2x is the vertical line at integer x and odd X is the
/// open strip between two integer lines, so the cells of one component are
/// pairwise disjoint closed integer boxes that tile
/// [-2 bound, 2 bound] x [-bound, bound + 1]. The y range is
/// [y_begin, y_end]; y_end is the height of the upper bounding segment, or
/// bound + 1 when the cell is unbounded above (no upper segment).
struct AxisCell {
  ComponentId owner;
  Coord x_begin = 0;
  Coord x_end = 0;
  Coord y_begin = 0;
  Coord y_end = 0;
  std::optional<FrameSegment> upper;

  bool contains(Coord x2, Coord y) const {
    return x_begin <= x2 && x2 <= x_end && y_begin <= y && y <= y_end;
  }
};

/// Sweep over the frame segments of one component, emitting the cells of its
/// vertical decomposition clipped to the coordinate box. Segments at the same
/// height must not touch.
inline std::vector<AxisCell> vertical_decomposition(ComponentId owner,
                                                    std::span<const FrameSegment> segments,
                                                    Coord bound) {
  const Coord x_min = -2 * bound;
  const Coord x_max = 2 * bound;
  const Coord bottom = -bound - 1;  // height of the virtual floor
  const Coord top = bound + 1;

  struct Event {
    Coord x;
    bool insert;
    std::size_t segment;
  };
  std::vector<Event> events;
  events.reserve(2 * segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    events.push_back({2 * segments[i].low, true, i});
    events.push_back({2 * segments[i].high + 1, false, i});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.insert < b.insert;  // removals first
  });

  std::map<Coord, std::size_t> active;  // height -> segment index
  std::map<Coord, Coord> gap_start;     // lower boundary height -> first X of the open gap
  gap_start[bottom] = x_min;
  std::vector<AxisCell> cells;

  auto above = [&](Coord y) -> std::optional<std::size_t> {
    auto it = active.upper_bound(y);
    if (it == active.end()) return std::nullopt;
    return it->second;
  };
  auto below = [&](Coord y) -> Coord {
    auto it = active.lower_bound(y);
    return it == active.begin() ? bottom : std::prev(it)->first;
  };
  auto close_gap = [&](Coord lower, std::optional<std::size_t> upper, Coord x_end) {
    auto it = gap_start.find(lower);
    const Coord x_begin = it->second;
    gap_start.erase(it);
    x_end = std::min(x_end, x_max);
    if (x_begin > x_end) return;
    AxisCell cell{owner, x_begin, x_end, lower + 1, top, std::nullopt};
    if (upper) {
      cell.y_end = segments[*upper].y;
      cell.upper = segments[*upper];
    }
    cells.push_back(cell);
  };

  for (const Event& e : events) {
    const FrameSegment& s = segments[e.segment];
    const Coord lower = below(s.y);
    if (e.insert) {
      close_gap(lower, above(s.y), e.x - 1);
      gap_start[lower] = e.x;
      gap_start[s.y] = e.x;
      active.emplace(s.y, e.segment);
    } else {
      active.erase(s.y);
      const auto upper = above(s.y);
      close_gap(lower, e.segment, e.x - 1);
      close_gap(s.y, upper, e.x - 1);
      gap_start[lower] = e.x;
    }
  }
  close_gap(bottom, std::nullopt, x_max);
  return cells;
}

/// Rectangle-stabbing index over axis cells with output-sensitive reporting.
///
/// Primary level: a segment tree over doubled x, allocated on demand, each
/// cell stored at its canonical nodes. Secondary level, per node: a treap of
/// (y_end, cell) augmented with the subtree minimum of y_begin. A stabbing
/// point (X, Y) plus a window [lo, hi] on y_end is then a 3-sided query
/// y_begin <= Y, lo <= y_end <= hi on each node of the root-to-leaf path of X.
class CellStabbingIndex {
 public:
  explicit CellStabbingIndex(Coord bound) : x_min_(-2 * bound), x_max_(2 * bound) {
    x_nodes_.push_back({});
  }

  void insert(std::uint32_t cell_id, const AxisCell& cell) {
    insert_x(0, x_min_, x_max_, cell_id, cell);
  }

  void erase(std::uint32_t cell_id, const AxisCell& cell) { erase_x(0, x_min_, x_max_, cell_id, cell); }

  /// Same result as inserting each cell, but every node's treap is built
  /// from its sorted entries in linear time. Requires an empty index.
  void bulk_insert(std::vector<std::pair<std::uint32_t, AxisCell>> cells) {
    if (stored_entries() != 0) throw Error("bulk_insert into a non-empty index");
    // Visiting cells in key order makes every node's run come out sorted.
    std::sort(cells.begin(), cells.end(), [this](const auto& a, const auto& b) {
      return key_less(static_cast<std::int32_t>(a.second.y_end), a.first, static_cast<std::int32_t>(b.second.y_end),
                      b.first);
    });
    std::vector<std::uint32_t> count;
    for (const auto& [id, cell] : cells) {
      visit_x(0, x_min_, x_max_, cell, [&](std::int32_t node) {
        if (count.size() <= static_cast<std::size_t>(node)) count.resize(x_nodes_.size(), 0);
        ++count[static_cast<std::size_t>(node)];
      });
    }
    count.resize(x_nodes_.size(), 0);
    std::vector<std::uint32_t> next(count.size());
    std::uint32_t total = 0;
    for (std::size_t node = 0; node < count.size(); ++node) {
      next[node] = total;
      total += count[node];
    }
    treap_.assign(total, TNode{});
    free_.clear();
    for (const auto& [id, cell] : cells) {
      visit_x(0, x_min_, x_max_, cell, [&](std::int32_t node) { treap_[next[static_cast<std::size_t>(node)]++] = make_tnode(id, cell); });
    }
    std::vector<std::int32_t> spine;
    for (std::size_t node = 0, begin = 0; node < count.size(); begin += count[node], ++node) {
      if (count[node] == 0) continue;
      // Cartesian tree over the sorted run: the stack holds the right spine.
      spine.clear();
      for (std::size_t i = begin; i < begin + count[node]; ++i) {
        const auto t = static_cast<std::int32_t>(i);
        std::int32_t last = -1;
        while (!spine.empty() && treap_[spine.back()].priority < treap_[t].priority) {
          last = spine.back();
          spine.pop_back();
        }
        treap_[t].left = last;
        if (!spine.empty()) treap_[spine.back()].right = t;
        spine.push_back(t);
      }
      x_nodes_[node].treap = spine.front();
      pull_all(spine.front());
    }
  }

  class Cursor {
   public:
    /// Next cell containing the stabbing point whose y_end lies in the window.
    std::optional<std::uint32_t> next() {
      for (;;) {
        while (!stack_.empty()) {
          const Frame f = stack_.back();
          stack_.pop_back();
          ++*work_;
          const TNode& n = index_->treap_[f.node];
          if (f.expanded) {
            if (n.y_begin <= y_ && lo_ <= n.y_end && n.y_end <= hi_) return n.cell;
            continue;
          }
          if (n.min_y_begin > y_) continue;
          if (n.y_end <= hi_ && n.right >= 0) stack_.push_back({n.right, false});
          stack_.push_back({f.node, true});
          if (n.y_end >= lo_ && n.left >= 0) stack_.push_back({n.left, false});
        }
        if (next_root_ == roots_.size()) return std::nullopt;
        stack_.push_back({roots_[next_root_++], false});
      }
    }

   private:
    friend class CellStabbingIndex;
    struct Frame {
      std::int32_t node;
      bool expanded;
    };

    const CellStabbingIndex* index_ = nullptr;
    std::vector<std::int32_t> roots_;
    std::size_t next_root_ = 0;
    std::vector<Frame> stack_;
    Coord y_ = 0;
    Coord lo_ = 0;
    Coord hi_ = 0;
    std::uint64_t* work_ = nullptr;
  };

  /// Cells containing (x2, y) whose y_end lies in [ye_lo, ye_hi].
  Cursor query(Coord x2, Coord y, Coord ye_lo, Coord ye_hi, std::uint64_t& work) const {
    Cursor c;
    c.index_ = this;
    c.y_ = y;
    c.lo_ = ye_lo;
    c.hi_ = ye_hi;
    c.work_ = &work;
    if (ye_lo > ye_hi || x2 < x_min_ || x2 > x_max_) return c;
    std::int32_t node = 0;
    Coord a = x_min_;
    Coord b = x_max_;
    while (node >= 0) {
      ++work;
      if (x_nodes_[node].treap >= 0) c.roots_.push_back(x_nodes_[node].treap);
      if (a == b) break;
      const Coord mid = a + (b - a) / 2;
      if (x2 <= mid) {
        node = x_nodes_[node].child[0];
        b = mid;
      } else {
        node = x_nodes_[node].child[1];
        a = mid + 1;
      }
    }
    return c;
  }

  std::size_t stored_entries() const { return treap_.size() - free_.size(); }

 private:
  struct XNode {
    std::array<std::int32_t, 2> child{-1, -1};
    std::int32_t treap = -1;
  };

  struct TNode {
    std::int32_t y_end;
    std::int32_t y_begin;
    std::int32_t min_y_begin;
    std::uint32_t cell;
    std::uint32_t priority;
    std::int32_t left;
    std::int32_t right;
  };

  bool key_less(std::int32_t y_end_a, std::uint32_t cell_a, std::int32_t y_end_b,
                std::uint32_t cell_b) const {
    return y_end_a != y_end_b ? y_end_a < y_end_b : cell_a < cell_b;
  }

  void pull(std::int32_t t) {
    TNode& n = treap_[t];
    n.min_y_begin = n.y_begin;
    if (n.left >= 0) n.min_y_begin = std::min(n.min_y_begin, treap_[n.left].min_y_begin);
    if (n.right >= 0) n.min_y_begin = std::min(n.min_y_begin, treap_[n.right].min_y_begin);
  }

  // Splits t into keys < (y_end, cell) and keys >= (y_end, cell).
  void split(std::int32_t t, std::int32_t y_end, std::uint32_t cell, std::int32_t& l,
             std::int32_t& r) {
    if (t < 0) {
      l = r = -1;
      return;
    }
    if (key_less(treap_[t].y_end, treap_[t].cell, y_end, cell)) {
      split(treap_[t].right, y_end, cell, treap_[t].right, r);
      l = t;
    } else {
      split(treap_[t].left, y_end, cell, l, treap_[t].left);
      r = t;
    }
    pull(t);
  }

  std::int32_t merge(std::int32_t a, std::int32_t b) {
    if (a < 0) return b;
    if (b < 0) return a;
    if (treap_[a].priority > treap_[b].priority) {
      treap_[a].right = merge(treap_[a].right, b);
      pull(a);
      return a;
    }
    treap_[b].left = merge(a, treap_[b].left);
    pull(b);
    return b;
  }

  std::int32_t treap_insert(std::int32_t t, std::int32_t fresh) {
    if (t < 0) return fresh;
    TNode& f = treap_[fresh];
    if (f.priority > treap_[t].priority) {
      split(t, f.y_end, f.cell, treap_[fresh].left, treap_[fresh].right);
      pull(fresh);
      return fresh;
    }
    if (key_less(f.y_end, f.cell, treap_[t].y_end, treap_[t].cell)) {
      const std::int32_t child = treap_insert(treap_[t].left, fresh);
      treap_[t].left = child;
    } else {
      const std::int32_t child = treap_insert(treap_[t].right, fresh);
      treap_[t].right = child;
    }
    pull(t);
    return t;
  }

  std::int32_t treap_erase(std::int32_t t, std::int32_t y_end, std::uint32_t cell) {
    if (t < 0) return t;
    if (treap_[t].y_end == y_end && treap_[t].cell == cell) {
      const std::int32_t merged = merge(treap_[t].left, treap_[t].right);
      free_.push_back(t);
      return merged;
    }
    if (key_less(y_end, cell, treap_[t].y_end, treap_[t].cell)) {
      const std::int32_t child = treap_erase(treap_[t].left, y_end, cell);
      treap_[t].left = child;
    } else {
      const std::int32_t child = treap_erase(treap_[t].right, y_end, cell);
      treap_[t].right = child;
    }
    pull(t);
    return t;
  }

  std::int32_t new_tnode(std::uint32_t cell_id, const AxisCell& cell) {
    const TNode n = make_tnode(cell_id, cell);
    if (!free_.empty()) {
      const std::int32_t t = free_.back();
      free_.pop_back();
      treap_[t] = n;
      return t;
    }
    treap_.push_back(n);
    return static_cast<std::int32_t>(treap_.size() - 1);
  }

  void pull_all(std::int32_t t) {
    if (t < 0) return;
    pull_all(treap_[t].left);
    pull_all(treap_[t].right);
    pull(t);
  }

  TNode make_tnode(std::uint32_t cell_id, const AxisCell& cell) {
    return {static_cast<std::int32_t>(cell.y_end), static_cast<std::int32_t>(cell.y_begin),
            static_cast<std::int32_t>(cell.y_begin), cell_id, static_cast<std::uint32_t>(rng_()), -1, -1};
  }

  // Calls f on each canonical node of the cell's x-range, creating nodes.
  template <class F>
  void visit_x(std::int32_t node, Coord a, Coord b, const AxisCell& cell, F&& f) {
    if (cell.x_begin <= a && b <= cell.x_end) {
      f(node);
      return;
    }
    const Coord mid = a + (b - a) / 2;
    if (cell.x_begin <= mid) visit_x(child(node, 0), a, mid, cell, f);
    if (cell.x_end > mid) visit_x(child(node, 1), mid + 1, b, cell, f);
  }

  void insert_x(std::int32_t node, Coord a, Coord b, std::uint32_t cell_id, const AxisCell& cell) {
    if (cell.x_begin <= a && b <= cell.x_end) {
      const std::int32_t fresh = new_tnode(cell_id, cell);
      const std::int32_t root = treap_insert(x_nodes_[node].treap, fresh);
      x_nodes_[node].treap = root;
      return;
    }
    const Coord mid = a + (b - a) / 2;
    if (cell.x_begin <= mid) insert_x(child(node, 0), a, mid, cell_id, cell);
    if (cell.x_end > mid) insert_x(child(node, 1), mid + 1, b, cell_id, cell);
  }

  void erase_x(std::int32_t node, Coord a, Coord b, std::uint32_t cell_id, const AxisCell& cell) {
    if (node < 0) return;
    if (cell.x_begin <= a && b <= cell.x_end) {
      const std::int32_t root = treap_erase(x_nodes_[node].treap, static_cast<std::int32_t>(cell.y_end), cell_id);
      x_nodes_[node].treap = root;
      return;
    }
    const Coord mid = a + (b - a) / 2;
    if (cell.x_begin <= mid) erase_x(x_nodes_[node].child[0], a, mid, cell_id, cell);
    if (cell.x_end > mid) erase_x(x_nodes_[node].child[1], mid + 1, b, cell_id, cell);
  }

  std::int32_t child(std::int32_t node, int side) {
    if (x_nodes_[node].child[side] < 0) {
      x_nodes_.push_back({});
      x_nodes_[node].child[side] = static_cast<std::int32_t>(x_nodes_.size() - 1);
    }
    return x_nodes_[node].child[side];
  }

  Coord x_min_;
  Coord x_max_;
  std::vector<XNode> x_nodes_;
  std::vector<TNode> treap_;
  std::vector<std::int32_t> free_;
  SplitMix64 rng_{0x6a09e667f3bcc909ULL};
};

/// Component (non-)intersection reporter for axis-aligned segments.
///
/// A vertical query s with lower endpoint p meets component c iff s meets
/// the segment bounding from above the cell of c's vertical decomposition
/// that contains p; a cell unbounded above means no intersection. Side 0
/// answers vertical queries from the decomposition of horizontal segments,
/// side 1 answers horizontal queries from the (transposed) vertical ones.
/// Queries must not overlap a stored segment collinearly.
class AxisReporter final : public Reporter {
 public:
  explicit AxisReporter(Coord bound = kCoordLimit)
      : bound_(bound), sides_{CellStabbingIndex(bound), CellStabbingIndex(bound)} {}

  void insert_component(const ComponentPtr& c) override {
    const Entry& e = add_entry(c);
    for (int side = 0; side < 2; ++side) {
      for (std::uint32_t id : e.cells[side]) sides_[side].insert(id, cells_[id]);
    }
  }

  void build(std::span<const ComponentPtr> components) override {
    if (!entries_.empty()) {
      Reporter::build(components);
      return;
    }
    std::array<std::vector<std::pair<std::uint32_t, AxisCell>>, 2> all;
    for (const auto& c : components) {
      const Entry& e = add_entry(c);
      for (int side = 0; side < 2; ++side) {
        for (std::uint32_t id : e.cells[side]) all[side].emplace_back(id, cells_[id]);
      }
    }
    for (int side = 0; side < 2; ++side) sides_[side].bulk_insert(std::move(all[side]));
  }

  void delete_component(ComponentId id) override {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw MissingComponent(id);
    for (int side = 0; side < 2; ++side) {
      for (std::uint32_t cell : it->second.cells[side]) {
        sides_[side].erase(cell, cells_[cell]);
        free_cells_.push_back(cell);
      }
    }
    objects_ -= it->second.size;
    entries_.erase(it);
  }

  std::unique_ptr<ReportStream> stream_intersecting(const GeomObject& s) override {
    return make_stream(s, true);
  }

  std::unique_ptr<ReportStream> stream_nonintersecting(const GeomObject& s) override {
    return make_stream(s, false);
  }

  std::size_t component_count() const override { return entries_.size(); }
  std::size_t object_count() const override { return objects_; }
  bool contains(ComponentId id) const override { return entries_.contains(id); }

  std::size_t cell_count() const {
    std::size_t n = 0;
    for (const auto& [id, e] : entries_) n += e.cells[0].size() + e.cells[1].size();
    return n;
  }

 private:
  struct Entry {
    std::size_t size;
    std::array<std::vector<std::uint32_t>, 2> cells;
  };

  class Stream final : public ReportStream {
   public:
    Stream(const AxisReporter& owner, CellStabbingIndex::Cursor cursor)
        : owner_(owner), cursor_(std::move(cursor)) {}

    std::optional<ReportItem> next() override {
      auto cell = cursor_.next();
      if (!cell) return std::nullopt;
      const ComponentId id = owner_.cells_[*cell].owner;
      return ReportItem{id, owner_.entries_.at(id).size};
    }

   private:
    const AxisReporter& owner_;
    CellStabbingIndex::Cursor cursor_;
  };

  std::unique_ptr<ReportStream> make_stream(const GeomObject& obj, bool want_hits) {
    const auto* s = std::get_if<AxisSegment>(&obj.shape);
    if (s == nullptr) throw FamilyMismatch();
    validate(obj, bound_);
    const int side = s->orientation == Orientation::vertical ? 0 : 1;
    // In the side's frame the query is the vertical segment x = fixed,
    // y in [low, high]; its lower endpoint is the stabbing point.
    const Coord lo = want_hits ? s->low : s->high + 1;
    const Coord hi = want_hits ? s->high : bound_ + 1;
    return std::make_unique<Stream>(*this, sides_[side].query(2 * s->fixed, s->low, lo, hi, work_));
  }

  // Validates c, decomposes both sides and stores the cells, without
  // touching the stabbing indexes.
  const Entry& add_entry(const ComponentPtr& c) {
    if (entries_.contains(c->id)) {
      throw Error("component " + std::to_string(c->id.value) + " already present");
    }
    validate_general_position(c->objects);
    std::array<std::vector<FrameSegment>, 2> frame;
    for (const auto& o : c->objects) {
      const auto* s = std::get_if<AxisSegment>(&o.shape);
      if (s == nullptr) throw FamilyMismatch();
      validate(o, bound_);
      frame[s->orientation == Orientation::horizontal ? 0 : 1].push_back({s->fixed, s->low, s->high});
    }
    Entry entry{c->size(), {}};
    for (int side = 0; side < 2; ++side) {
      for (const AxisCell& cell : vertical_decomposition(c->id, frame[side], bound_)) {
        entry.cells[side].push_back(store_cell(cell));
      }
    }
    objects_ += c->size();
    return entries_.emplace(c->id, std::move(entry)).first->second;
  }

  std::uint32_t store_cell(const AxisCell& cell) {
    if (!free_cells_.empty()) {
      const std::uint32_t id = free_cells_.back();
      free_cells_.pop_back();
      cells_[id] = cell;
      return id;
    }
    cells_.push_back(cell);
    return static_cast<std::uint32_t>(cells_.size() - 1);
  }

  Coord bound_;
  std::array<CellStabbingIndex, 2> sides_;
  std::vector<AxisCell> cells_;
  std::vector<std::uint32_t> free_cells_;
  std::unordered_map<ComponentId, Entry> entries_;
  std::size_t objects_ = 0;
};

}  // namespace geoconn
