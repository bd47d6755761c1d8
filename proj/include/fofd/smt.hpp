#pragma once

// SMT-LIB 2 (QF_IDL) output for difference-logic theories, an external
// solver run as a subprocess, and parsing of its answer and model.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dlreduce.hpp"

namespace fofd {

class SolverError : public Error {
 public:
  SolverError(const std::string& msg, std::string raw = {}) : Error(msg), raw_(std::move(raw)) {}
  const std::string& raw_output() const { return raw_; }

 private:
  std::string raw_;
};

// ---------------------------------------------------------------------------
// Emission

inline std::string bool_symbol(int i) { return "b" + std::to_string(i); }
inline std::string int_symbol(int i) { return "l" + std::to_string(i); }

namespace detail {

inline std::string smt_int(long c) { return c < 0 ? "(- " + std::to_string(-c) + ")" : std::to_string(c); }

inline void emit_formula(std::ostream& os, const DLFormula& f) {
  switch (f.kind) {
    case DLKind::Atom:
      os << bool_symbol(f.atom);
      return;
    case DLKind::Diff:
      os << '(' << (f.op == DiffOp::Lt ? "<" : f.op == DiffOp::Le ? "<=" : "=") << " (- " << int_symbol(f.x)
         << ' ' << int_symbol(f.y) << ") " << smt_int(f.c) << ')';
      return;
    case DLKind::And:
    case DLKind::Or:
      if (f.kids.empty()) {
        os << (f.kind == DLKind::And ? "true" : "false");
        return;
      }
      if (f.kids.size() == 1) {
        emit_formula(os, *f.kids[0]);
        return;
      }
      break;
    default:
      break;
  }
  static const char* names[] = {"", "", "not", "and", "or", "=>", "="};
  os << '(' << names[static_cast<int>(f.kind)];
  for (const auto& k : f.kids) {
    os << ' ';
    emit_formula(os, *k);
  }
  os << ')';
}

inline void emit_body(std::ostream& os, const DLTheory& t) {
  os << "(set-option :produce-models true)\n(set-logic QF_IDL)\n";
  for (size_t i = 0; i < t.bool_names.size(); ++i) os << "(declare-fun " << bool_symbol(static_cast<int>(i)) << " () Bool)\n";
  for (size_t i = 0; i < t.levels.size(); ++i) os << "(declare-fun " << int_symbol(static_cast<int>(i)) << " () Int)\n";
  for (const auto& f : t.formulas) {
    os << "(assert ";
    emit_formula(os, *f);
    os << ")\n";
  }
}

}  // namespace detail

/// The complete solver input: declarations, one assert per formula, then
/// (check-sat) and (get-model). Identical theories give identical text.
inline std::string emit_smtlib(const DLTheory& t) {
  std::ostringstream os;
  detail::emit_body(os, t);
  os << "(check-sat)\n(get-model)\n";
  return os.str();
}

/// Sidecar map from solver symbols back to atoms and level variables.
inline std::string name_map(const DLTheory& t) {
  std::ostringstream os;
  for (size_t i = 0; i < t.bool_names.size(); ++i) os << bool_symbol(static_cast<int>(i)) << '\t' << t.bool_names[i] << '\n';
  for (size_t i = 0; i < t.levels.size(); ++i)
    os << int_symbol(static_cast<int>(i)) << '\t' << level_name(t, static_cast<int>(i)) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Solver output

enum class SolveStatus { Sat, Unsat, Unknown, Timeout };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat: return "SAT";
    case SolveStatus::Unsat: return "UNSAT";
    case SolveStatus::Unknown: return "UNKNOWN";
    case SolveStatus::Timeout: return "TIMEOUT";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  std::vector<bool> bools;
  std::vector<long> ints;
  std::vector<std::string> missing;  // declared symbols absent from the model
  double seconds = 0;
  std::string raw;
};

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

namespace detail {

class SExprReader {
 public:
  explicit SExprReader(const std::string& s) : s_(s) {}

  std::optional<SExpr> next() {
    skip();
    if (i_ >= s_.size()) return std::nullopt;
    return read(0);
  }

 private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  SExpr read(int depth) {
    if (depth > 1000) throw Error("solver output nested too deeply");
    skip();
    SExpr e;
    if (i_ >= s_.size()) throw Error("unexpected end of solver output");
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      e.is_list = true;
      for (;;) {
        skip();
        if (i_ >= s_.size()) throw Error("unbalanced parenthesis in solver output");
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        e.list.push_back(read(depth + 1));
      }
      return e;
    }
    if (c == ')') throw Error("unexpected ')' in solver output");
    if (c == '"' || c == '|') {
      char close = c;
      size_t j = i_ + 1;
      while (j < s_.size() && s_[j] != close) j += (close == '"' && s_[j] == '\\') ? 2 : 1;
      e.atom = s_.substr(i_, std::min(j + 1, s_.size()) - i_);
      if (close == '|' && e.atom.size() >= 2) e.atom = e.atom.substr(1, e.atom.size() - 2);
      i_ = std::min(j + 1, s_.size());
      return e;
    }
    size_t j = i_;
    while (j < s_.size() && !std::isspace(static_cast<unsigned char>(s_[j])) && s_[j] != '(' && s_[j] != ')') ++j;
    e.atom = s_.substr(i_, j - i_);
    i_ = j;
    return e;
  }

  const std::string& s_;
  size_t i_ = 0;
};

inline std::optional<long> int_value(const SExpr& e) {
  if (!e.is_list) {
    if (e.atom.empty()) return std::nullopt;
    char* end = nullptr;
    long v = std::strtol(e.atom.c_str(), &end, 10);
    if (*end) return std::nullopt;
    return v;
  }
  if (e.list.size() == 2 && !e.list[0].is_list && e.list[0].atom == "-") {
    auto v = int_value(e.list[1]);
    if (v) return -*v;
  }
  return std::nullopt;
}

inline void collect_defines(const SExpr& e, std::vector<const SExpr*>& out) {
  if (!e.is_list) return;
  if (!e.list.empty() && !e.list[0].is_list && e.list[0].atom == "define-fun") {
    out.push_back(&e);
    return;
  }
  for (const auto& k : e.list) collect_defines(k, out);
}

}  // namespace detail

inline std::vector<SExpr> parse_sexprs(const std::string& text) {
  detail::SExprReader r(text);
  std::vector<SExpr> out;
  while (auto e = r.next()) out.push_back(std::move(*e));
  return out;
}

/// Reads the first sat/unsat/unknown answer and every define-fun of the
/// model. Symbols missing from the model are false / 0 and listed.
inline SolveResult parse_solver_output(const std::string& text, const DLTheory& t) {
  SolveResult r;
  r.raw = text;
  std::vector<SExpr> top;
  try {
    top = parse_sexprs(text);
  } catch (const Error& e) {
    throw SolverError(std::string("cannot parse solver output: ") + e.what(), text);
  }
  std::optional<SolveStatus> status;
  std::string error;
  for (const auto& e : top) {
    if (!e.is_list && !status) {
      if (e.atom == "sat") status = SolveStatus::Sat;
      else if (e.atom == "unsat") status = SolveStatus::Unsat;
      else if (e.atom == "unknown") status = SolveStatus::Unknown;
      else if (e.atom == "timeout") status = SolveStatus::Timeout;
    }
    if (e.is_list && !e.list.empty() && !e.list[0].is_list && e.list[0].atom == "error" && error.empty())
      error = e.list.size() > 1 ? e.list[1].atom : "error";
  }
  if (!status) throw SolverError(error.empty() ? "no answer in solver output" : "solver error: " + error, text);
  r.status = *status;
  if (r.status != SolveStatus::Sat) return r;
  r.bools.assign(t.bool_names.size(), false);
  r.ints.assign(t.levels.size(), 0);
  std::vector<bool> seen_b(r.bools.size(), false), seen_i(r.ints.size(), false);
  std::vector<const SExpr*> defs;
  for (const auto& e : top) detail::collect_defines(e, defs);
  bool bad = false;
  for (const SExpr* d : defs) {
    if (d->list.size() != 5 || d->list[1].is_list) {
      bad = true;
      continue;
    }
    const std::string& name = d->list[1].atom;
    const SExpr& value = d->list[4];
    if (name.size() < 2 || (name[0] != 'b' && name[0] != 'l')) continue;
    char* end = nullptr;
    long idx = std::strtol(name.c_str() + 1, &end, 10);
    if (*end || idx < 0) continue;
    if (name[0] == 'b' && static_cast<size_t>(idx) < r.bools.size()) {
      if (value.is_list || (value.atom != "true" && value.atom != "false")) {
        bad = true;
        continue;
      }
      r.bools[static_cast<size_t>(idx)] = value.atom == "true";
      seen_b[static_cast<size_t>(idx)] = true;
    } else if (name[0] == 'l' && static_cast<size_t>(idx) < r.ints.size()) {
      auto v = detail::int_value(value);
      if (!v) {
        bad = true;
        continue;
      }
      r.ints[static_cast<size_t>(idx)] = *v;
      seen_i[static_cast<size_t>(idx)] = true;
    }
  }
  if (bad) {
    r.status = SolveStatus::Unknown;
    return r;
  }
  for (size_t i = 0; i < seen_b.size(); ++i)
    if (!seen_b[i]) r.missing.push_back(bool_symbol(static_cast<int>(i)));
  for (size_t i = 0; i < seen_i.size(); ++i)
    if (!seen_i[i]) r.missing.push_back(int_symbol(static_cast<int>(i)));
  return r;
}

// ---------------------------------------------------------------------------
// Running a solver

struct SolverConfig {
  std::string path;
  std::vector<std::string> args;
  double timeout_seconds = 60;
};

inline std::optional<std::string> find_on_path(const std::string& name) {
  if (name.find('/') != std::string::npos) {
    if (access(name.c_str(), X_OK) == 0) return name;
    return std::nullopt;
  }
  const char* path = std::getenv("PATH");
  if (!path) return std::nullopt;
  std::stringstream ss(path);
  std::string dir;
  while (std::getline(ss, dir, ':')) {
    if (dir.empty()) continue;
    std::string cand = dir + "/" + name;
    struct stat st {};
    if (stat(cand.c_str(), &st) == 0 && S_ISREG(st.st_mode) && access(cand.c_str(), X_OK) == 0) return cand;
  }
  return std::nullopt;
}

/// $FOFD_SOLVER, else the first of z3, yices-smt2, cvc5 found on PATH.
inline std::optional<SolverConfig> find_solver() {
  SolverConfig c;
  if (const char* env = std::getenv("FOFD_SOLVER"); env && *env) {
    auto p = find_on_path(env);
    if (!p) return std::nullopt;
    c.path = *p;
    return c;
  }
  for (const char* name : {"z3", "yices-smt2", "cvc5"}) {
    if (auto p = find_on_path(name)) {
      c.path = *p;
      if (std::string(name) == "cvc5") c.args = {"--lang=smt2"};
      return c;
    }
  }
  return std::nullopt;
}

struct ProcessResult {
  std::string output;
  int exit_code = -1;
  bool timed_out = false;
  double seconds = 0;
};

namespace detail {

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    const char* dir = std::getenv("TMPDIR");
    std::string tmpl = std::string(dir && *dir ? dir : "/tmp") + "/fofd-XXXXXX.smt2";
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    int fd = mkstemps(buf.data(), 5);
    if (fd < 0) throw SolverError("cannot create temporary file: " + std::string(std::strerror(errno)));
    path_ = buf.data();
    size_t off = 0;
    while (off < contents.size()) {
      ssize_t w = ::write(fd, contents.data() + off, contents.size() - off);
      if (w <= 0) {
        ::close(fd);
        throw SolverError("cannot write temporary file");
      }
      off += static_cast<size_t>(w);
    }
    ::close(fd);
  }
  ~TempFile() { ::unlink(path_.c_str()); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace detail

/// Runs argv with stdout and stderr captured; kills it after the timeout.
inline ProcessResult run_process(const std::vector<std::string>& argv, double timeout_seconds) {
  int pipefd[2];
  if (pipe(pipefd) != 0) throw SolverError("pipe failed: " + std::string(std::strerror(errno)));
  auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    throw SolverError("fork failed: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    ::dup2(pipefd[1], 1);
    ::dup2(pipefd[1], 2);
    ::close(pipefd[0]);
    ::close(pipefd[1]);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, 0);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    ::execv(args[0], args.data());
    const char msg[] = "exec failed\n";
    ssize_t ignored = ::write(2, msg, sizeof msg - 1);
    (void)ignored;
    _exit(127);
  }
  ::close(pipefd[1]);
  ProcessResult r;
  auto deadline = start + std::chrono::duration<double>(timeout_seconds);
  char buf[65536];
  for (;;) {
    auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      r.timed_out = true;
      break;
    }
    int ms = static_cast<int>(std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count()) + 1;
    pollfd p{pipefd[0], POLLIN, 0};
    int rc = ::poll(&p, 1, ms);
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) continue;
    ssize_t n = ::read(pipefd[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    r.output.append(buf, static_cast<size_t>(n));
  }
  if (r.timed_out) ::kill(pid, SIGKILL);
  ::close(pipefd[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!r.timed_out && r.exit_code == 127 && r.output.find("exec failed") != std::string::npos)
    throw SolverError("cannot execute " + argv[0], r.output);
  return r;
}

inline ProcessResult run_solver(const std::string& input, const SolverConfig& cfg) {
  if (cfg.timeout_seconds <= 0) throw SolverError("solver timeout must be positive");
  if (cfg.path.empty()) throw SolverError("no solver configured");
  detail::TempFile file(input);
  std::vector<std::string> argv{cfg.path};
  argv.insert(argv.end(), cfg.args.begin(), cfg.args.end());
  argv.push_back(file.path());
  return run_process(argv, cfg.timeout_seconds);
}

/// Solves the theory, optionally with extra literal assertions (atom ids,
/// negative ids -(a+1) for negated atoms).
inline SolveResult solve(const DLTheory& t, const SolverConfig& cfg, const std::vector<int>& assumptions = {}) {
  std::ostringstream os;
  detail::emit_body(os, t);
  for (int lit : assumptions)
    os << "(assert " << (lit >= 0 ? bool_symbol(lit) : "(not " + bool_symbol(-lit - 1) + ")") << ")\n";
  os << "(check-sat)\n(get-model)\n";
  ProcessResult p = run_solver(os.str(), cfg);
  SolveResult r;
  if (p.timed_out) {
    r.status = SolveStatus::Timeout;
    r.raw = p.output;
  } else {
    r = parse_solver_output(p.output, t);
  }
  r.seconds = p.seconds;
  return r;
}

/// Satisfiability of the theory under each cube of literals, in one solver
/// run using check-sat-assuming.
inline std::vector<SolveStatus> check_cubes(const DLTheory& t, const std::vector<std::vector<int>>& cubes,
                                            const SolverConfig& cfg) {
  if (cubes.empty()) return {};
  std::ostringstream os;
  detail::emit_body(os, t);
  for (const auto& cube : cubes) {
    os << "(check-sat-assuming (";
    for (size_t i = 0; i < cube.size(); ++i) {
      int lit = cube[i];
      os << (i ? " " : "") << (lit >= 0 ? bool_symbol(lit) : "(not " + bool_symbol(-lit - 1) + ")");
    }
    os << "))\n";
  }
  ProcessResult p = run_solver(os.str(), cfg);
  if (p.timed_out) return std::vector<SolveStatus>(cubes.size(), SolveStatus::Timeout);
  std::vector<SolveStatus> out;
  for (const auto& e : parse_sexprs(p.output)) {
    if (e.is_list) {
      if (!e.list.empty() && e.list[0].atom == "error") throw SolverError("solver error", p.output);
      continue;
    }
    if (e.atom == "sat") out.push_back(SolveStatus::Sat);
    else if (e.atom == "unsat") out.push_back(SolveStatus::Unsat);
    else if (e.atom == "unknown") out.push_back(SolveStatus::Unknown);
  }
  if (out.size() != cubes.size()) throw SolverError("expected one answer per cube", p.output);
  return out;
}

/// The model as a structure over the original vocabulary: folded frame
/// relations plus the solver's ground atoms; auxiliary atoms are dropped.
inline Structure lift_model(const SolveResult& r, const PropTheory& pt) {
  if (r.status != SolveStatus::Sat) throw Error("no model to lift");
  std::vector<bool> v(pt.atoms.size(), false);
  for (size_t i = 0; i < v.size() && i < r.bools.size(); ++i) v[i] = r.bools[i];
  return lift(pt, v);
}

}  // namespace fofd
