#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nnconcolic/sym_expr.hpp"

namespace nnc {

// Concrete double paired with an optional symbolic expression.
// A null expression marks a plain constant; arithmetic between two
// constants never grows a tree.
struct ConcolicValue {
  double val = 0.0;
  ExprPtr exp;

  bool symbolic() const { return exp != nullptr; }

  static ConcolicValue constant(double v) { return {v, nullptr}; }
  static ConcolicValue variable(double v, int var_id) {
    return {v, make_var(var_id)};
  }
};

enum class ArithKind { Add, Sub, Mul, Div };
enum class Relation { Eq, Ne, Lt, Le, Gt, Ge };

struct PredicateAtom {
  ExprPtr lhs;
  Relation rel;
  ExprPtr rhs;
};

// One recorded branch: a conjunction of atoms plus the truth value the
// concrete execution observed. Ordinary comparisons carry one atom; the
// exp bracketing branch carries its two bound atoms in a single entry.
struct BranchPredicate {
  std::vector<PredicateAtom> atoms;
  bool taken = false;
};

// Branch recorder for one forward execution. Single-owner, not shared
// across concurrent passes.
struct BranchTrace {
  std::vector<BranchPredicate> predicates;

  std::size_t size() const { return predicates.size(); }
  bool empty() const { return predicates.empty(); }
  void record(BranchPredicate p) { predicates.push_back(std::move(p)); }
};

// Concrete arithmetic plus the matching expression tree. Throws
// DivByZero when dividing by a concrete zero and NumericOverflow when
// the result is not finite.
ConcolicValue arith(const ConcolicValue& a, const ConcolicValue& b,
                    ArithKind kind);
ConcolicValue neg(const ConcolicValue& a);

// Returns the concrete truth of (a rel b); records a predicate when at
// least one operand is symbolic. Constant-vs-constant comparisons leave
// the recorder untouched.
bool compare(const ConcolicValue& a, const ConcolicValue& b, Relation rel,
             BranchTrace& rec);

bool relation_holds(double a, double b, Relation rel);
const char* relation_symbol(Relation rel);

// Lifts a value to an expression: its own tree if symbolic, a Const
// node of the concrete value otherwise.
ExprPtr expr_of(const ConcolicValue& v);

bool eval_atom(const PredicateAtom& atom, const Assignment& assignment);
bool eval_predicate(const BranchPredicate& p, const Assignment& assignment);

std::uint64_t structural_hash(const BranchPredicate& p);
bool structural_equal(const BranchPredicate& a, const BranchPredicate& b);

std::string to_string(const PredicateAtom& atom);
std::string to_string(const BranchPredicate& p);

}  // namespace nnc
