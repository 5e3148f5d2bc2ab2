// geoconn: generate, run and verify dynamic connectivity workloads.
//
// Exit status: 0 ok / MATCH, 1 mismatch, 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geoconn/geoconn.hpp"

namespace {

using namespace geoconn;

constexpr int kMismatch = 1;
constexpr int kUsage = 2;

std::uint64_t seed_or_env(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("GEOCONN_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(std::string("GEOCONN_SEED is not an integer: ") + env);
    }
  }
  return 1;
}

// Writes to the named file, or stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error("cannot open " + path + " for writing");
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Workload load(const std::string& path) {
  if (path == "-") return parse_workload(std::cin);
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_workload(in);
}

OperationMix parse_ratios(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error("bad ratio '" + item + "'");
    }
  }
  if (v.size() != 4) throw Error("--ratios needs insert,delete,query,count");
  return {v[0], v[1], v[2], v[3]};
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto dash = item.find('-');
    try {
      if (dash != std::string::npos && dash > 0) {
        const std::size_t lo = std::stoull(item.substr(0, dash)), hi = std::stoull(item.substr(dash + 1));
        for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        out.push_back(std::stoull(item));
      }
    } catch (const std::exception&) {
      throw Error("bad list item '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fully dynamic connectivity of geometric intersection graphs"};
  app.require_subcommand(1);

  std::string family = "disk";
  std::size_t n = 256;
  std::size_t ops = 1024;
  double density = 1.0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> q;
  std::string out_path;
  Coord bound = 1 << 16;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--family", family, "axis, segment or disk")->check(CLI::IsMember({"axis", "segment", "disk"}));
    cmd->add_option("--seed", seed, "random seed (default: $GEOCONN_SEED, else 1)");
    cmd->add_option("--density", density, "expected intersection degree")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", out_path, "output file (default stdout)");
  };

  auto* gen = app.add_subcommand("gen", "generate a random workload");
  common(gen);
  std::string ratios = "0.25,0.25,0.4,0.1";
  gen->add_option("--n", n, "initial objects");
  gen->add_option("--ops", ops, "mixed operations after the initial inserts");
  gen->add_option("--bound", bound, "coordinate bound")->check(CLI::Range(Coord{1}, kCoordLimit));
  gen->add_option("--ratios", ratios, "insert,delete,query,count weights");

  std::string workload_path;
  std::string stats_path;
  auto* run = app.add_subcommand("run", "execute a workload, one answer per Q/C line");
  run->add_option("workload", workload_path, "workload file, - for stdin")->required();
  run->add_option("--q", q, "fixed phase length");
  run->add_option("--out", out_path, "answers file (default stdout)");
  run->add_option("--stats", stats_path, "per-phase statistics CSV");

  bool deep = false;
  std::size_t signature_every = 0;
  auto* verify = app.add_subcommand("verify", "compare engine answers with the brute-force oracle");
  verify->add_option("workload", workload_path, "workload file, - for stdin")->required();
  verify->add_option("--q", q, "fixed phase length");
  verify->add_flag("--deep", deep, "check signatures and proxy graph after every update");
  verify->add_option("--signatures", signature_every, "check signatures every N updates");

  std::string n_list = "1024,2048,4096";
  std::size_t seeds = 1;
  std::size_t updates = 256;
  auto* bench = app.add_subcommand("bench", "amortized update and query cost across sizes");
  common(bench);
  bench->add_option("--n", n_list, "comma-separated sizes");
  bench->add_option("--seeds", seeds, "seeds per size");
  bench->add_option("--updates", updates, "updates per run");
  bench->add_option("--q", q, "fixed phase length");

  std::string q_list = "2-32";
  std::size_t count = 1;
  auto* classes = app.add_subcommand("classes", "count equivalence classes against growing query prefixes");
  common(classes);
  classes->add_option("--n", n, "static objects");
  classes->add_option("--q", q_list, "query prefix lengths, e.g. 2-32 or 2,4,8");

  auto* separator = app.add_subcommand("separator", "square separators of random disk sets");
  common(separator);
  separator->add_option("--n", n, "disks per instance");
  separator->add_option("--count", count, "instances (seeds seed, seed+1, ...)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*gen) {
      GenParams p{parse_family(family), n, ops, density, seed_or_env(seed), bound, parse_ratios(ratios)};
      Output out(out_path);
      write_workload(out.get(), generate_workload(p));
    } else if (*run) {
      const Workload w = load(workload_path);
      const RunResult r = run_workload(w, {q, false});
      Output out(out_path);
      for (const auto& a : r.answers) out.get() << a << '\n';
      if (!stats_path.empty()) {
        Output stats(stats_path);
        r.write_stats(stats.get());
      }
    } else if (*verify) {
      const Workload w = load(workload_path);
      const VerifyReport r = verify_workload(w, {q, signature_every, deep});
      std::cout << r.summary() << '\n';
      return r.match ? 0 : kMismatch;
    } else if (*bench) {
      Output out(out_path);
      out.get() << BenchRow::csv_header() << '\n';
      const std::uint64_t base = seed_or_env(seed);
      for (std::size_t size : parse_list(n_list)) {
        for (std::size_t s = 0; s < seeds; ++s) {
          BenchParams p;
          p.family = parse_family(family);
          p.n = size;
          p.seed = base + s;
          p.updates = updates;
          p.density = density;
          p.fixed_q = q;
          out.get() << bench_once(p).csv() << std::endl;
        }
      }
    } else if (*classes) {
      oracle::ClassCountParams p;
      p.family = parse_family(family);
      p.n = n;
      p.density = density;
      p.seed = seed_or_env(seed);
      p.q_values = parse_list(q_list);
      Output out(out_path);
      out.get() << "q,n,components,classes,seed\n";
      for (const auto& row : oracle::class_count_experiment(p)) {
        out.get() << row.q << ',' << row.n << ',' << row.components << ',' << row.classes << ',' << row.seed << '\n';
      }
    } else if (*separator) {
      Output out(out_path);
      out.get() << SeparatorRow::csv_header() << '\n';
      const std::uint64_t base = seed_or_env(seed);
      for (std::size_t i = 0; i < count; ++i) out.get() << separator_instance(n, density, base + i).csv() << '\n';
    }
  } catch (const ParseError& e) {
    std::cerr << "geoconn: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "geoconn: " << e.what() << '\n';
    return kUsage;
  }
  return 0;
}
