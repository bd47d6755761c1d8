#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "fofd/fofd.hpp"

using namespace fofd;

namespace {

enum Exit { kOk = 0, kNo = 1, kUsage = 2, kSolver = 3 };

struct UsageError : Error {
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

struct Inputs {
  std::string theory;
  std::string structure;
  std::string domain;
};

bool propositional(const Theory& t) {
  if (!t.vocabulary.constants.empty()) return false;
  for (const auto& [p, a] : t.vocabulary.predicates)
    if (a != 0) return false;
  return true;
}

// The structure file when given, else the --domain list ("unit" is {u});
// purely propositional theories default to the unit domain.
Structure frame_of(const Theory& t, const Inputs& in) {
  if (!in.structure.empty()) {
    if (!in.domain.empty()) throw UsageError("give either a structure file or --domain, not both");
    return parse_structure(read_file(in.structure));
  }
  if (in.domain == "unit" || (in.domain.empty() && propositional(t))) return make_domain({"u"});
  if (in.domain.empty()) throw UsageError("this theory needs a structure file or --domain");
  auto elems = split(in.domain, ',');
  if (elems.empty()) throw UsageError("--domain is empty");
  return make_domain(elems);
}

PropTheory ground_inputs(const Inputs& in) {
  Theory t = parse_theory(read_file(in.theory));
  return ground(t, frame_of(t, in), {true});
}

struct SolverOptions {
  std::string path;
  std::vector<std::string> args;
  double timeout = 60;
};

SolverConfig solver_config(const SolverOptions& o) {
  SolverConfig c;
  if (!o.path.empty()) {
    auto p = find_on_path(o.path);
    if (!p) throw SolverError("solver not found: " + o.path);
    c.path = *p;
  } else {
    auto found = find_solver();
    if (!found) throw SolverError("no SMT solver found (set --solver or FOFD_SOLVER)");
    c = *found;
  }
  if (!o.args.empty()) c.args = o.args;
  c.timeout_seconds = o.timeout;
  return c;
}

ReduceOptions reduce_options(const std::string& strength, const std::string& scc) {
  ReduceOptions o;
  o.strength = strength == "weak" ? Strength::Weak : Strength::Strong;
  o.scc = scc == "on";
  return o;
}

int cmd_check(const Inputs& in, const std::string& out) {
  Theory t = parse_theory(read_file(in.theory));
  Structure s = frame_of(t, in);
  bool total = true;
  for (const auto& [p, a] : t.vocabulary.predicates)
    if (!s.relations.count(p)) total = false;
  if (total) {
    bool ok = check_model(t, s);
    write_output(out, ok ? "model\n" : "not a model\n");
    return ok ? kOk : kNo;
  }
  Interpretation I = complete_defined(t, s);
  if (!check_model(t, I)) {
    write_output(out, "not a model\n");
    return kNo;
  }
  write_output(out, print_structure(I));
  return kOk;
}

int cmd_ground(const Inputs& in, const std::string& out) {
  write_output(out, print_ground(to_defnf(ground_inputs(in))));
  return kOk;
}

int cmd_reduce(const Inputs& in, const ReduceOptions& ro, const std::string& out) {
  DLTheory dl = reduce(ground_inputs(in), ro);
  write_output(out, emit_smtlib(dl));
  if (!out.empty()) write_output(out + ".map", name_map(dl));
  return kOk;
}

int cmd_solve(const Inputs& in, const ReduceOptions& ro, const SolverOptions& so, const std::string& out) {
  PropTheory pt = to_defnf(ground_inputs(in));
  DLTheory dl = reduce(pt, ro);
  SolveResult r = solve(dl, solver_config(so));
  switch (r.status) {
    case SolveStatus::Sat: write_output(out, print_structure(lift_model(r, pt))); return kOk;
    case SolveStatus::Unsat: write_output(out, "UNSAT\n"); return kNo;
    default: std::cerr << "fofd: solver answered " << status_name(r.status) << "\n"; return kSolver;
  }
}

int cmd_transform(const std::string& path, const std::string& out) {
  SourceTheory st = parse_inductive_theory(read_file(path));
  write_output(out, print_theory(transform_theory(st.theory, st.inductive)));
  return kOk;
}

int cmd_bench(const std::string& sizes, const std::string& shape, uint64_t seed, const std::string& strength,
              const std::string& scc, bool csv, bool timing, const SolverOptions& so, const std::string& out) {
  BenchOptions o;
  for (const auto& s : split(sizes, ',')) {
    int n = 0;
    try {
      n = std::stoi(s);
    } catch (const std::exception&) {
      throw UsageError("bad size " + s);
    }
    if (n < 1) throw UsageError("sizes must be positive");
    o.sizes.push_back(n);
  }
  o.shape = parse_shape(shape);
  o.seed = seed;
  o.scc = scc == "on";
  if (strength == "weak") o.strengths = {Strength::Weak};
  else if (strength == "strong") o.strengths = {Strength::Strong};
  SolverConfig cfg;
  if (!o.sizes.empty()) cfg = solver_config(so);
  auto rows = run_bench(o, cfg);
  write_output(out, csv ? report_csv(rows, timing) : report_table(rows, o, timing));
  for (const auto& r : rows)
    if (r.status == "ERROR") return kSolver;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fixpoint definitions: evaluate, ground, reduce to difference logic, solve"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Inputs in;
  std::string out, strength = "strong", scc = "on";
  SolverOptions so;
  auto add_solver = [&](CLI::App* c) {
    c->add_option("--solver", so.path, "SMT solver executable");
    c->add_option("--solver-arg", so.args, "extra solver argument (repeatable)")->allow_extra_args(false);
    c->add_option("--timeout", so.timeout, "solver timeout in seconds")->check(CLI::PositiveNumber);
  };
  auto add_reduce = [&](CLI::App* c) {
    c->add_option("--strength", strength, "level constraints")->check(CLI::IsMember({"weak", "strong"}));
    c->add_option("--scc", scc, "only give levels to atoms on cycles")->check(CLI::IsMember({"on", "off"}));
  };
  auto add_inputs = [&](CLI::App* c) {
    c->add_option("theory", in.theory, "theory file (.fofd)")->required();
    c->add_option("structure", in.structure, "structure file (.struct)");
    c->add_option("--domain", in.domain, "domain elements a,b,c or 'unit' instead of a structure file");
    c->add_option("--out", out, "output file (default stdout)");
  };

  auto* check = app.add_subcommand("check", "check a structure against a theory, or complete its defined relations");
  add_inputs(check);
  auto* grd = app.add_subcommand("ground", "print the ground theory in definitional normal form");
  add_inputs(grd);
  auto* red = app.add_subcommand("reduce", "write the SMT-LIB difference logic encoding (and OUT.map)");
  add_inputs(red);
  add_reduce(red);
  auto* slv = app.add_subcommand("solve", "find a model with an SMT solver");
  add_inputs(slv);
  add_reduce(slv);
  add_solver(slv);

  std::string foid;
  auto* tid = app.add_subcommand("transform-id", "translate inductive definitions (GID blocks) into LFD/GFD");
  tid->add_option("input", foid, "input file (.foid)")->required();
  tid->add_option("--out", out, "output file (default stdout)");

  std::string sizes = "10,50", shape = "ring", bench_strength = "both";
  uint64_t seed = 1;
  bool csv = false, no_timing = false;
  auto* bench = app.add_subcommand("bench", "fairness model-checking benchmark");
  bench->add_option("--sizes", sizes, "comma separated state counts")->capture_default_str();
  bench->add_option("--shape", shape, "graph shape")->check(CLI::IsMember({"ring", "layered", "random"}))
      ->capture_default_str();
  bench->add_option("--seed", seed, "generator seed")->capture_default_str();
  bench->add_option("--strength", bench_strength, "weak, strong or both")
      ->check(CLI::IsMember({"weak", "strong", "both"}))->capture_default_str();
  bench->add_option("--scc", scc, "only give levels to atoms on cycles")->check(CLI::IsMember({"on", "off"}));
  bench->add_flag("--csv", csv, "CSV instead of a table");
  bench->add_flag("--no-timing", no_timing, "print '-' for times (reproducible output)");
  bench->add_option("--out", out, "output file (default stdout)");
  add_solver(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    ReduceOptions ro = reduce_options(strength, scc);
    if (*check) return cmd_check(in, out);
    if (*grd) return cmd_ground(in, out);
    if (*red) return cmd_reduce(in, ro, out);
    if (*slv) return cmd_solve(in, ro, so, out);
    if (*tid) return cmd_transform(foid, out);
    if (*bench) return cmd_bench(sizes, shape, seed, bench_strength, scc, csv, !no_timing, so, out);
  } catch (const SolverError& e) {
    std::cerr << "fofd: " << e.what() << "\n";
    return kSolver;
  } catch (const ParseError& e) {
    std::cerr << "fofd: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "fofd: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
