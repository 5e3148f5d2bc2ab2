#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "geoconn/generator.hpp"
#include "geoconn/geometry.hpp"

namespace geoconn {

struct Operation {
  enum class Kind { insert, remove, query, count };

  Kind kind = Kind::count;
  GeomObject object;  // insert
  ObjectId a;         // remove, query
  ObjectId b;         // query

  static Operation insert(GeomObject o) { return {Kind::insert, std::move(o), {}, {}}; }
  static Operation remove(ObjectId id) { return {Kind::remove, {}, id, {}}; }
  static Operation query(ObjectId u, ObjectId v) { return {Kind::query, {}, u, v}; }
  static Operation count() { return {}; }
};

struct Workload {
  Family family = Family::disk;
  std::uint64_t seed = 0;
  Coord bound = kCoordLimit;
  std::vector<Operation> ops;
};

inline void write_operation(std::ostream& out, const Operation& op) {
  switch (op.kind) {
    case Operation::Kind::insert:
      std::visit(
          [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, AxisSegment>) {
              out << "IA " << op.object.id.value << ' ' << (s.orientation == Orientation::horizontal ? 'H' : 'V')
                  << ' ' << s.fixed << ' ' << s.low << ' ' << s.high;
            } else if constexpr (std::is_same_v<T, LineSegment>) {
              out << "IS " << op.object.id.value << ' ' << s.p1.x << ' ' << s.p1.y << ' ' << s.p2.x << ' ' << s.p2.y;
            } else {
              out << "ID " << op.object.id.value << ' ' << s.center.x << ' ' << s.center.y << ' ' << s.radius;
            }
          },
          op.object.shape);
      break;
    case Operation::Kind::remove:
      out << "D " << op.a.value;
      break;
    case Operation::Kind::query:
      out << "Q " << op.a.value << ' ' << op.b.value;
      break;
    case Operation::Kind::count:
      out << 'C';
      break;
  }
  out << '\n';
}

inline void write_workload(std::ostream& out, const Workload& w) {
  out << "H " << family_name(w.family) << ' ' << w.seed << ' ' << w.bound << '\n';
  for (const auto& op : w.ops) write_operation(out, op);
}

inline std::string to_string(const Workload& w) {
  std::ostringstream out;
  write_workload(out, w);
  return out.str();
}

/// Parses the text format. Checks syntax, family consistency and that ids
/// are inserted before use; geometry is validated by the engine.
inline Workload parse_workload(std::istream& in) {
  Workload w;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  std::unordered_set<ObjectId> seen;
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag) || tag[0] == '#') continue;
    auto fail = [&](const std::string& why) { throw ParseError(number, why); };
    auto expect_end = [&] {
      std::string extra;
      if (fields >> extra) fail("trailing field '" + extra + "'");
    };
    auto read_int = [&](auto& v, const char* what) {
      if (!(fields >> v)) fail(std::string("expected ") + what);
    };
    auto read_id = [&](const char* what) {
      std::uint64_t v = 0;
      read_int(v, what);
      return ObjectId{v};
    };
    auto known = [&](ObjectId id) {
      if (!seen.contains(id)) fail("id " + std::to_string(id.value) + " used before insertion");
      return id;
    };

    if (tag == "H") {
      if (header) fail("duplicate header");
      std::string family;
      if (!(fields >> family)) fail("expected family");
      try {
        w.family = parse_family(family);
      } catch (const Error& e) {
        fail(e.what());
      }
      read_int(w.seed, "seed");
      read_int(w.bound, "bound");
      if (w.bound < 1 || w.bound > kCoordLimit) fail("bound out of range");
      expect_end();
      header = true;
      continue;
    }
    if (!header) fail("missing header");
    if (tag == "IA" || tag == "IS" || tag == "ID") {
      const Family f = tag == "IA" ? Family::axis : tag == "IS" ? Family::segment : Family::disk;
      if (f != w.family) fail(std::string("insert of family ") + family_name(f) + " in " + family_name(w.family) +
                              " workload");
      GeomObject obj;
      obj.id = read_id("id");
      if (f == Family::axis) {
        std::string orient;
        AxisSegment s;
        if (!(fields >> orient) || (orient != "H" && orient != "V")) fail("expected orientation H or V");
        s.orientation = orient == "H" ? Orientation::horizontal : Orientation::vertical;
        read_int(s.fixed, "fixed coordinate");
        read_int(s.low, "low");
        read_int(s.high, "high");
        obj.shape = s;
      } else if (f == Family::segment) {
        LineSegment s;
        read_int(s.p1.x, "x1");
        read_int(s.p1.y, "y1");
        read_int(s.p2.x, "x2");
        read_int(s.p2.y, "y2");
        obj.shape = s;
      } else {
        Disk d;
        read_int(d.center.x, "cx");
        read_int(d.center.y, "cy");
        read_int(d.radius, "r");
        obj.shape = d;
      }
      expect_end();
      if (!seen.insert(obj.id).second) fail("id " + std::to_string(obj.id.value) + " inserted twice");
      w.ops.push_back(Operation::insert(std::move(obj)));
    } else if (tag == "D") {
      const ObjectId id = known(read_id("id"));
      expect_end();
      w.ops.push_back(Operation::remove(id));
    } else if (tag == "Q") {
      const ObjectId u = known(read_id("id"));
      const ObjectId v = known(read_id("id"));
      expect_end();
      w.ops.push_back(Operation::query(u, v));
    } else if (tag == "C") {
      expect_end();
      w.ops.push_back(Operation::count());
    } else {
      fail("unknown operation '" + tag + "'");
    }
  }
  if (!header) throw ParseError(number, "missing header");
  return w;
}

inline Workload parse_workload(const std::string& text) {
  std::istringstream in(text);
  return parse_workload(in);
}

struct OperationMix {
  double insert = 0.25;
  double remove = 0.25;
  double query = 0.4;
  double count = 0.1;
};

struct GenParams {
  Family family = Family::disk;
  std::size_t n = 256;
  std::size_t ops = 1024;
  double density = 1.0;
  std::uint64_t seed = 1;
  Coord bound = 1 << 16;
  OperationMix mix;
};

/// Deterministic random workload: n inserts, then `ops` mixed operations.
/// Deletes and queries pick uniformly among live ids; with nothing live
/// they turn into inserts.
inline Workload generate_workload(const GenParams& p) {
  const OperationMix& m = p.mix;
  const double total = m.insert + m.remove + m.query + m.count;
  if (m.insert < 0 || m.remove < 0 || m.query < 0 || m.count < 0 || !(total > 0)) {
    throw Error("operation ratios must be non-negative with a positive sum");
  }
  if (p.density < 0) throw Error("density must be non-negative");
  Workload w{p.family, p.seed, p.bound, {}};
  w.ops.reserve(p.n + p.ops);
  ObjectGenerator gen(p.family, p.n, p.density, p.bound, p.seed);
  SplitMix64 pick(p.seed ^ 0x6f70735f6d6978ULL);
  std::vector<ObjectId> live;
  std::uint64_t next = 1;
  auto add = [&] {
    const ObjectId id{next++};
    w.ops.push_back(Operation::insert({id, gen.next()}));
    live.push_back(id);
  };
  auto any_live = [&] { return live[static_cast<std::size_t>(pick.uniform(0, static_cast<std::int64_t>(live.size()) - 1))]; };

  for (std::size_t i = 0; i < p.n; ++i) add();
  for (std::size_t i = 0; i < p.ops; ++i) {
    const double u = pick.unit() * total;
    if (u < m.insert) {
      add();
    } else if (u < m.insert + m.remove) {
      if (live.empty()) {
        add();
        continue;
      }
      const auto k = static_cast<std::size_t>(pick.uniform(0, static_cast<std::int64_t>(live.size()) - 1));
      w.ops.push_back(Operation::remove(live[k]));
      live[k] = live.back();
      live.pop_back();
    } else if (u < m.insert + m.remove + m.query) {
      if (live.empty()) {
        add();
        continue;
      }
      const ObjectId a = any_live();
      const ObjectId b = any_live();
      w.ops.push_back(Operation::query(a, b));
    } else {
      w.ops.push_back(Operation::count());
    }
  }
  return w;
}

}  // namespace geoconn
