#pragma once

// Fairness model-checking instances: the nu/mu fairness formula as a GFD
// with a nested LFD, over generated transition graphs, run through the
// ground -> normal form -> difference logic -> solver pipeline.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "parser.hpp"
#include "smt.hpp"

namespace fofd {

/// P(x): on every path from x, a-labelled successors are taken infinitely
/// often. `=>` binds looser than `|`, so the body reads
/// Edge(x,y) => ((L(y,a) & P(y)) | Q(y)).
inline constexpr const char* kFairnessTheory =
    "GFD {\n"
    "  !x: P(x) <- Q(x).\n"
    "  LFD {\n"
    "    !x: Q(x) <- !y: Edge(x,y) => (L(y,a) & P(y)) | Q(y).\n"
    "  }\n"
    "}\n";

/// The other bracketing, (Edge(x,y) => L(y,a) & P(y)) | Q(y).
inline constexpr const char* kFairnessTheoryAlt =
    "GFD {\n"
    "  !x: P(x) <- Q(x).\n"
    "  LFD {\n"
    "    !x: Q(x) <- !y: (Edge(x,y) => L(y,a) & P(y)) | Q(y).\n"
    "  }\n"
    "}\n";

enum class Shape { Ring, Layered, Random };

inline const char* shape_name(Shape s) {
  switch (s) {
    case Shape::Ring: return "ring";
    case Shape::Layered: return "layered";
    case Shape::Random: return "random";
  }
  return "?";
}

inline Shape parse_shape(const std::string& s) {
  if (s == "ring") return Shape::Ring;
  if (s == "layered") return Shape::Layered;
  if (s == "random") return Shape::Random;
  throw Error("unknown shape " + s + " (expected ring, layered or random)");
}

struct FairnessInstance {
  int n = 0;
  Shape shape = Shape::Ring;
  uint64_t seed = 0;
  std::vector<std::pair<int, int>> edges;  // sorted, no duplicates
  std::vector<int> labelled;               // states with label a, sorted
  Theory theory;
  Structure structure;
};

inline std::string state_name(int i) { return "s" + std::to_string(i); }

/// Builds the theory and structure for a given graph. The domain holds the
/// states s0..s{n-1} followed by the label element a.
inline FairnessInstance make_instance(int n, std::vector<std::pair<int, int>> edges, std::vector<int> labelled,
                                      const char* theory_text = kFairnessTheory) {
  if (n < 1) throw Error("a fairness instance needs at least one state");
  FairnessInstance inst;
  inst.n = n;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::sort(labelled.begin(), labelled.end());
  labelled.erase(std::unique(labelled.begin(), labelled.end()), labelled.end());
  inst.edges = std::move(edges);
  inst.labelled = std::move(labelled);
  inst.theory = parse_theory(theory_text);
  Structure& s = inst.structure;
  for (int i = 0; i < n; ++i) s.domain.push_back(state_name(i));
  s.domain.push_back("a");
  int size = n + 1;
  Relation edge(2, size), label(2, size);
  for (auto [u, v] : inst.edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) throw Error("edge outside the state range");
    edge.insert(std::vector<int>{u, v});
  }
  for (int u : inst.labelled) label.insert(std::vector<int>{u, n});
  s.relations["Edge"] = std::move(edge);
  s.relations["L"] = std::move(label);
  return inst;
}

/// Deterministic graph per (n, shape, seed); every state has a successor.
inline FairnessInstance gen_fairness(int n, Shape shape, uint64_t seed) {
  if (n < 1) throw Error("a fairness instance needs at least one state");
  std::mt19937_64 rng(seed * 1000003ULL + static_cast<uint64_t>(n) * 7919ULL + static_cast<uint64_t>(shape));
  auto below = [&](uint64_t k) { return static_cast<int>(rng() % k); };
  std::vector<std::pair<int, int>> edges;
  switch (shape) {
    case Shape::Ring:
      for (int i = 0; i < n; ++i) {
        edges.emplace_back(i, (i + 1) % n);
        if (below(4) == 0) edges.emplace_back(i, below(static_cast<uint64_t>(n)));
      }
      break;
    case Shape::Layered: {
      int width = 1;
      while ((width + 1) * (width + 1) <= n) ++width;
      int layers = (n + width - 1) / width;
      auto layer_start = [&](int l) { return l * width; };
      auto layer_size = [&](int l) { return std::min(width, n - l * width); };
      for (int i = 0; i < n; ++i) {
        int l = i / width;
        int next = l + 1 < layers ? l + 1 : below(static_cast<uint64_t>(layers));
        int k = 1 + below(2);
        for (int e = 0; e < k; ++e)
          edges.emplace_back(i, layer_start(next) + below(static_cast<uint64_t>(layer_size(next))));
        if (below(5) == 0) edges.emplace_back(i, layer_start(l) + below(static_cast<uint64_t>(layer_size(l))));
      }
      break;
    }
    case Shape::Random:
      for (int i = 0; i < n; ++i) {
        int k = 1 + below(3);
        for (int e = 0; e < k; ++e) edges.emplace_back(i, below(static_cast<uint64_t>(n)));
      }
      break;
  }
  std::vector<int> labelled;
  for (int i = 0; i < n; ++i)
    if (below(3) == 0) labelled.push_back(i);
  FairnessInstance inst = make_instance(n, std::move(edges), std::move(labelled));
  inst.shape = shape;
  inst.seed = seed;
  return inst;
}

inline std::string instance_text(const FairnessInstance& inst) {
  return print_theory(inst.theory) + print_structure(inst.structure);
}

/// FNV-1a over the printed theory and structure.
inline uint64_t instance_hash(const FairnessInstance& inst) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : instance_text(inst)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

/// P restricted to the states.
inline std::vector<int> fair_states(const FairnessInstance& inst, const Structure& model) {
  const Relation& p = model.relation("P");
  std::vector<int> out;
  for (int i = 0; i < inst.n; ++i)
    if (p.contains(std::vector<int>{i})) out.push_back(i);
  return out;
}

/// P by direct evaluation of the fixpoint semantics.
inline std::vector<int> evaluate_fairness(const FairnessInstance& inst) {
  return fair_states(inst, complete_defined(inst.theory, inst.structure));
}

struct BenchRow {
  int size = 0;
  Strength strength = Strength::Strong;
  size_t atoms = 0;
  size_t clauses = 0;
  size_t levels = 0;
  std::string status;
  double seconds = 0;
  uint64_t hash = 0;
  std::vector<int> fair;  // on SAT
  std::string error;
};

/// Ground (frame folded), normalise, reduce, solve and lift.
inline BenchRow run_pipeline(const FairnessInstance& inst, ReduceOptions opts, const SolverConfig& cfg) {
  BenchRow row;
  row.size = inst.n;
  row.strength = opts.strength;
  row.hash = instance_hash(inst);
  auto start = std::chrono::steady_clock::now();
  try {
    PropTheory pt = to_defnf(ground(inst.theory, inst.structure, {true}));
    DLTheory dl = reduce(pt, opts);
    row.atoms = pt.atoms.size();
    row.clauses = dl.formulas.size();
    row.levels = dl.level_count();
    SolveResult r = solve(dl, cfg);
    row.status = status_name(r.status);
    if (r.status == SolveStatus::Sat) row.fair = fair_states(inst, lift_model(r, pt));
  } catch (const Error& e) {
    row.status = "ERROR";
    row.error = e.what();
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

struct BenchOptions {
  std::vector<int> sizes;
  Shape shape = Shape::Ring;
  uint64_t seed = 1;
  std::vector<Strength> strengths{Strength::Weak, Strength::Strong};
  bool scc = true;
};

/// One row per size and strength, in input order; failures are recorded in
/// the row and the run continues.
inline std::vector<BenchRow> run_bench(const BenchOptions& o, const SolverConfig& cfg) {
  std::vector<BenchRow> rows;
  for (int n : o.sizes) {
    FairnessInstance inst = gen_fairness(n, o.shape, o.seed);
    for (Strength s : o.strengths) {
      ReduceOptions ro;
      ro.strength = s;
      ro.scc = o.scc;
      rows.push_back(run_pipeline(inst, ro, cfg));
    }
  }
  return rows;
}

inline const char* strength_name(Strength s) { return s == Strength::Weak ? "weak" : "strong"; }

inline std::string format_seconds(double s, bool timing) {
  if (!timing) return "-";
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << s;
  return os.str();
}

inline std::string report_csv(const std::vector<BenchRow>& rows, bool timing = true) {
  std::ostringstream os;
  os << "size,strength,atoms,clauses,levels,status,seconds\n";
  for (const auto& r : rows)
    os << r.size << ',' << strength_name(r.strength) << ',' << r.atoms << ',' << r.clauses << ',' << r.levels
       << ',' << r.status << ',' << format_seconds(r.seconds, timing) << '\n';
  return os.str();
}

inline std::string report_table(const std::vector<BenchRow>& rows, const BenchOptions& o, bool timing = true) {
  std::ostringstream os;
  os << "fairness benchmark, shape " << shape_name(o.shape) << ", seed " << o.seed
     << "\n";
  os << std::left << std::setw(7) << "size" << std::setw(8) << "strength" << std::right << std::setw(9) << "atoms"
     << std::setw(10) << "clauses" << std::setw(8) << "levels" << std::setw(9) << "status" << std::setw(10)
     << "seconds" << std::setw(8) << "fair" << "  instance\n";
  for (const auto& r : rows) {
    std::ostringstream hash;
    hash << std::hex << std::setw(16) << std::setfill('0') << r.hash;
    os << std::left << std::setw(7) << r.size << std::setw(8) << strength_name(r.strength) << std::right
       << std::setw(9) << r.atoms << std::setw(10) << r.clauses << std::setw(8) << r.levels << std::setw(9)
       << r.status << std::setw(10) << format_seconds(r.seconds, timing) << std::setw(8)
       << (r.status == "SAT" ? std::to_string(r.fair.size()) : "-") << "  " << hash.str() << '\n';
    if (!r.error.empty()) os << "  error: " << r.error << '\n';
  }
  return os.str();
}

}  // namespace fofd
