#pragma once

#include <map>
#include <string>
#include <vector>

#include "nnconcolic/concolic.hpp"

namespace nnc {

// Solver-ready conjunction: declared attack variables plus ordered
// signed predicates. `asserted` is the truth value the query demands of
// the predicate's atom conjunction.
struct ConstraintSystem {
  std::vector<int> variables;  // ascending attack-variable ids

  struct Assertion {
    BranchPredicate predicate;
    bool asserted = true;
  };
  std::vector<Assertion> assertions;

  std::string logic = "QF_NRA";
};

enum class SolverStatus { Sat, Unsat, Unknown, Error };

const char* to_string(SolverStatus s);

struct SolverResult {
  SolverStatus status = SolverStatus::Error;
  std::map<int, double> model;  // var id -> value, present iff sat
  double wall_seconds = 0.0;
  std::size_t query_bytes = 0;
  std::string diagnostic;
};

// Deterministic SMT-LIB2 text: set-logic, declare-consts, asserts in
// order, check-sat, get-model. Constants are shortest round-trip decimal
// literals; negative literals render as (- lit).
std::string render(const ConstraintSystem& system);

// Decimal literal used by render(); exposed for tests.
std::string smt_literal(double value);

// Parses a get-model response: (define-fun NAME () Real VALUE) entries
// where VALUE is a decimal (optionally with z3's trailing '?'), a
// negation (- v) or a rational (/ p q). Throws ParseError on anything
// else. Variable names must look like x<id>; other names are ignored.
std::map<int, double> parse_model_sexpr(const std::string& text);

struct SolverConfig {
  // argv for the solver process; "{timeout_ms}" inside an argument is
  // replaced with the per-query timeout. SMT-LIB2 goes to stdin, the
  // response is read from stdout.
  std::vector<std::string> command;
  std::string dump_dir;  // write each query as NNNNNN.smt2 when non-empty
};

// Splits a command line on whitespace (no quoting; solver paths with
// spaces are not supported).
std::vector<std::string> split_command(const std::string& command_line);

class SolverClient {
public:
  SolverClient() = default;
  explicit SolverClient(SolverConfig config);

  bool configured() const { return !config_.command.empty(); }
  const SolverConfig& config() const { return config_; }

  // Renders and solves. Never throws for solver-side failures: spawn
  // errors, malformed output and timeouts come back as Error/Unknown.
  SolverResult solve(const ConstraintSystem& system, double timeout_seconds);

  // Test seam: drive the child process with pre-rendered text.
  SolverResult solve_text(const std::string& smt2, double timeout_seconds);

private:
  SolverConfig config_;
  unsigned long long dump_counter_ = 0;
};

}  // namespace nnc
