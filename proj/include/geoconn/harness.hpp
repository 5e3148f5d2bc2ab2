#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "geoconn/engine.hpp"
#include "geoconn/oracle.hpp"
#include "geoconn/separator.hpp"
#include "geoconn/workload.hpp"

namespace geoconn {

struct RunOptions {
  std::optional<std::size_t> fixed_q;
  bool verify_hooks = false;
};

inline EngineConfig engine_config(const Workload& w, const RunOptions& opt) {
  EngineConfig cfg;
  cfg.family = w.family;
  cfg.bound = w.bound;
  cfg.fixed_q = opt.fixed_q;
  cfg.verify_hooks = opt.verify_hooks;
  return cfg;
}

/// Leading inserts of a workload go to the engine constructor in one batch.
inline std::size_t leading_inserts(const Workload& w) {
  std::size_t k = 0;
  while (k < w.ops.size() && w.ops[k].kind == Operation::Kind::insert) ++k;
  return k;
}

struct PhaseTiming {
  PhaseSummary summary;
  std::uint64_t insert_ns = 0;
  std::uint64_t remove_ns = 0;
  std::uint64_t query_ns = 0;
  std::uint64_t count_ns = 0;
};

struct RunResult {
  std::vector<std::string> answers;  // one per Q or C
  std::vector<PhaseTiming> phases;
  std::uint64_t build_ns = 0;

  static std::string csv_header() {
    return "phase,n,q,updates,inserts,splits,displaced_weight,sigma,replay_weight,max_displacements,"
           "insert_ns,delete_ns,query_ns,count_ns";
  }

  void write_stats(std::ostream& out) const {
    out << csv_header() << '\n';
    for (const auto& p : phases) {
      const PhaseSummary& s = p.summary;
      out << s.index << ',' << s.n << ',' << s.q << ',' << s.updates << ',' << s.q_inserts << ',' << s.splits << ','
          << s.displaced_weight << ',' << s.sigma << ',' << s.replay_weight << ',' << s.max_displacements << ','
          << p.insert_ns << ',' << p.remove_ns << ',' << p.query_ns << ',' << p.count_ns << '\n';
    }
  }
};

/// Executes a workload on the engine, timing every operation.
inline RunResult run_workload(const Workload& w, const RunOptions& opt = {}) {
  using Clock = std::chrono::steady_clock;
  auto ns_since = [](Clock::time_point t) {
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t).count());
  };
  RunResult out;
  const std::size_t k = leading_inserts(w);
  std::vector<GeomObject> initial;
  initial.reserve(k);
  for (std::size_t i = 0; i < k; ++i) initial.push_back(w.ops[i].object);
  auto t0 = Clock::now();
  Engine engine(std::move(initial), engine_config(w, opt));
  out.build_ns = ns_since(t0);

  // Timings are charged to the phase in which the operation started.
  std::vector<PhaseTiming> timing(1);
  for (std::size_t i = k; i < w.ops.size(); ++i) {
    const Operation& op = w.ops[i];
    const std::size_t slot = engine.phase_index() - 1;
    if (timing.size() <= slot) timing.resize(slot + 1);
    PhaseTiming& t = timing[slot];
    const auto start = Clock::now();
    switch (op.kind) {
      case Operation::Kind::insert:
        engine.insert(op.object);
        t.insert_ns += ns_since(start);
        break;
      case Operation::Kind::remove:
        engine.remove(op.a);
        t.remove_ns += ns_since(start);
        break;
      case Operation::Kind::query: {
        const bool connected = engine.query(op.a, op.b);
        t.query_ns += ns_since(start);
        out.answers.push_back(connected ? "1" : "0");
        break;
      }
      case Operation::Kind::count: {
        const std::size_t c = engine.num_components();
        t.count_ns += ns_since(start);
        out.answers.push_back(std::to_string(c));
        break;
      }
    }
  }
  std::vector<PhaseSummary> summaries = engine.phase_history();
  summaries.push_back(engine.current_phase());
  timing.resize(summaries.size());
  for (std::size_t i = 0; i < summaries.size(); ++i) timing[i].summary = summaries[i];
  out.phases = std::move(timing);
  return out;
}

struct VerifyOptions {
  std::optional<std::size_t> fixed_q;
  /// Check class signatures against direct predicates every this many
  /// updates (0: never).
  std::size_t signature_every = 0;
  /// Full signature and proxy-graph checks after every update.
  bool deep = false;
};

struct VerifyReport {
  bool match = true;
  std::string divergence;  // first mismatch, if any
  std::size_t queries = 0;
  std::size_t counts = 0;
  std::size_t updates = 0;
  std::size_t signature_checks = 0;
  bool signatures_ok = true;
  std::vector<PhaseSummary> phases;

  std::string summary() const {
    if (match) {
      return "MATCH queries=" + std::to_string(queries) + " counts=" + std::to_string(counts) +
             " phases=" + std::to_string(phases.size());
    }
    return "MISMATCH " + divergence;
  }
};

/// Runs engine and oracle side by side; stops at the first divergence.
inline VerifyReport verify_workload(const Workload& w, const VerifyOptions& opt = {}) {
  VerifyReport report;
  const std::size_t k = leading_inserts(w);
  std::vector<GeomObject> initial;
  for (std::size_t i = 0; i < k; ++i) initial.push_back(w.ops[i].object);
  RunOptions run_opt{opt.fixed_q, opt.deep};
  Engine engine(initial, engine_config(w, run_opt));

  std::unordered_map<ObjectId, GeomObject> live;
  for (const auto& o : initial) live.emplace(o.id, o);
  std::optional<oracle::ComponentPartition> truth;  // recomputed lazily after updates
  auto oracle_now = [&]() -> const oracle::ComponentPartition& {
    if (!truth) {
      std::vector<GeomObject> objs;
      objs.reserve(live.size());
      for (const auto& [id, o] : live) objs.push_back(o);
      truth = oracle::components(objs);
    }
    return *truth;
  };
  auto diverge = [&](std::size_t line, const std::string& what) {
    report.match = false;
    report.divergence = "op " + std::to_string(line) + ": " + what;
  };

  for (std::size_t i = k; i < w.ops.size() && report.match; ++i) {
    const Operation& op = w.ops[i];
    const std::size_t line = i + 2;  // header is line 1
    switch (op.kind) {
      case Operation::Kind::insert:
        engine.insert(op.object);
        live.emplace(op.object.id, op.object);
        break;
      case Operation::Kind::remove:
        engine.remove(op.a);
        live.erase(op.a);
        break;
      case Operation::Kind::query: {
        const auto& p = oracle_now();
        const bool want = p.component_of.at(op.a) == p.component_of.at(op.b);
        const bool got = engine.query(op.a, op.b);
        ++report.queries;
        if (got != want) {
          diverge(line, "Q " + std::to_string(op.a.value) + " " + std::to_string(op.b.value) + " engine " +
                            std::to_string(got) + " oracle " + std::to_string(want));
        }
        continue;
      }
      case Operation::Kind::count: {
        const std::size_t want = oracle_now().count();
        const std::size_t got = engine.num_components();
        ++report.counts;
        if (got != want) diverge(line, "C engine " + std::to_string(got) + " oracle " + std::to_string(want));
        continue;
      }
    }
    truth.reset();
    ++report.updates;
    if (opt.signature_every != 0 && report.updates % opt.signature_every == 0) {
      ++report.signature_checks;
      if (!engine.check_signatures()) {
        report.signatures_ok = false;
        diverge(line, "class signature disagrees with direct predicates");
      }
    }
  }
  report.phases = engine.phase_history();
  report.phases.push_back(engine.current_phase());
  return report;
}

/// Per-object and aggregate displacement bounds of one phase.
struct DisplacementCheck {
  bool per_object = true;
  bool aggregate = true;
};

inline DisplacementCheck check_displacements(const PhaseSummary& s) {
  const auto per_object_cap = DisplacementLedger::halving_bound(s.n);
  const double w = static_cast<double>(s.n + s.sigma);
  const double cap = w <= 1 ? w : w * (std::log2(w) + 1);
  return {s.max_displacements <= per_object_cap, static_cast<double>(s.displaced_weight) <= cap};
}

struct BenchRow {
  Family family = Family::disk;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t phases = 0;
  std::size_t updates = 0;
  double update_ns = 0;  // amortized, rebuilds included
  double query_ns = 0;
  std::uint64_t displaced_weight = 0;
  std::size_t max_classes = 0;

  static std::string csv_header() {
    return "family,n,seed,phases,updates,update_ns,query_ns,displaced_weight,max_classes";
  }
  std::string csv() const {
    std::ostringstream out;
    out << family_name(family) << ',' << n << ',' << seed << ',' << phases << ',' << updates << ',' << update_ns << ','
        << query_ns << ',' << displaced_weight << ',' << max_classes;
    return out.str();
  }
};

struct BenchParams {
  Family family = Family::axis;
  std::size_t n = 1024;
  std::uint64_t seed = 1;
  std::size_t updates = 256;
  std::size_t queries = 4096;
  double density = 0.5;
  Coord bound = kCoordLimit;
  std::optional<std::size_t> fixed_q;
};

/// Steady-state cost at size n: balanced inserts and deletes keep the live
/// count near n; queries are timed in batches between updates.
inline BenchRow bench_once(const BenchParams& p) {
  using Clock = std::chrono::steady_clock;
  ObjectGenerator gen(p.family, p.n, p.density, p.bound, p.seed);
  std::vector<GeomObject> initial;
  initial.reserve(p.n);
  for (std::size_t i = 0; i < p.n; ++i) initial.push_back({ObjectId{i + 1}, gen.next()});
  EngineConfig cfg;
  cfg.family = p.family;
  cfg.bound = p.bound;
  cfg.fixed_q = p.fixed_q;
  Engine engine(initial, cfg);

  SplitMix64 rng(p.seed ^ 0xbe7c4ULL);
  std::vector<ObjectId> live;
  for (const auto& o : initial) live.push_back(o.id);
  std::uint64_t next = p.n + 1;
  auto any = [&] { return static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(live.size()) - 1)); };

  BenchRow row{p.family, p.n, p.seed};
  std::uint64_t update_ns = 0, query_ns = 0;
  std::size_t queries = 0;
  const std::size_t query_batch = std::max<std::size_t>(1, p.queries / std::max<std::size_t>(1, p.updates));
  std::vector<std::pair<ObjectId, ObjectId>> pairs(query_batch);
  volatile bool sink = false;
  for (std::size_t u = 0; u < p.updates; ++u) {
    const auto t0 = Clock::now();
    if (u % 2 == 0 || live.size() < 2) {
      const ObjectId id{next++};
      engine.insert(GeomObject{id, gen.next()});
      live.push_back(id);
    } else {
      const std::size_t k = any();
      engine.remove(live[k]);
      live[k] = live.back();
      live.pop_back();
    }
    update_ns += static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
    row.max_classes = std::max(row.max_classes, engine.registry().class_count());

    for (auto& pr : pairs) pr = {live[any()], live[any()]};
    const auto t1 = Clock::now();
    for (const auto& [a, b] : pairs) sink = engine.query(a, b);
    query_ns += static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t1).count());
    queries += pairs.size();
  }
  (void)sink;
  row.updates = p.updates;
  row.phases = engine.phase_index();
  row.update_ns = p.updates == 0 ? 0 : static_cast<double>(update_ns) / static_cast<double>(p.updates);
  row.query_ns = queries == 0 ? 0 : static_cast<double>(query_ns) / static_cast<double>(queries);
  std::uint64_t displaced = 0;
  for (const auto& s : engine.phase_history()) displaced += s.displaced_weight;
  row.displaced_weight = displaced + engine.current_phase().displaced_weight;
  return row;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double d = static_cast<double>(n) * sxx - sx * sx;
  return d == 0 ? 0 : (static_cast<double>(n) * sxy - sx * sy) / d;
}

struct SeparatorRow {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t inside = 0;
  std::size_t outside = 0;
  std::size_t boundary = 0;
  std::size_t stab_points = 0;
  bool stabbed = true;  // every boundary disk holds a stabbing point

  static std::string csv_header() { return "n,seed,inside,outside,boundary,stab_points"; }
  std::string csv() const {
    std::ostringstream out;
    out << n << ',' << seed << ',' << inside << ',' << outside << ',' << boundary << ',' << stab_points;
    return out.str();
  }
};

/// Random disk instance, separator, and an exact check of the stabbing claim.
inline SeparatorRow separator_instance(std::size_t n, double density, std::uint64_t seed, Coord bound = 1 << 16) {
  ObjectGenerator gen(Family::disk, n, density, bound, seed);
  std::vector<GeomObject> disks;
  disks.reserve(n);
  for (std::size_t i = 0; i < n; ++i) disks.push_back({ObjectId{i + 1}, gen.next()});
  const SeparatorResult r = find_disk_separator(disks);
  SeparatorRow row{n, seed, r.inside_ids.size(), r.outside_ids.size(), r.boundary_ids.size(),
                   r.stabbing_points.size(), true};
  for (ObjectId id : r.boundary_ids) {
    const Disk& d = std::get<Disk>(disks[id.value - 1].shape);
    bool hit = false;
    for (const auto& p : r.stabbing_points) {
      if (contains_scaled(d, p, r.scale)) {
        hit = true;
        break;
      }
    }
    row.stabbed = row.stabbed && hit;
  }
  return row;
}

}  // namespace geoconn
