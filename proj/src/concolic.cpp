#include "nnconcolic/concolic.hpp"

#include <cmath>
#include <sstream>

#include "nnconcolic/errors.hpp"

namespace nnc {

ExprPtr expr_of(const ConcolicValue& v) {
  return v.exp ? v.exp : make_const(v.val);
}

ConcolicValue arith(const ConcolicValue& a, const ConcolicValue& b,
                    ArithKind kind) {
  double result = 0.0;
  switch (kind) {
    case ArithKind::Add: result = a.val + b.val; break;
    case ArithKind::Sub: result = a.val - b.val; break;
    case ArithKind::Mul: result = a.val * b.val; break;
    case ArithKind::Div:
      if (b.val == 0.0)
        throw EngineError(ErrorKind::DivByZero, "concrete division by zero");
      result = a.val / b.val;
      break;
  }
  if (!std::isfinite(result))
    throw EngineError(ErrorKind::NumericOverflow,
                      "non-finite arithmetic result");

  if (!a.symbolic() && !b.symbolic()) return ConcolicValue::constant(result);

  ExprPtr tree;
  switch (kind) {
    case ArithKind::Add: tree = make_add(expr_of(a), expr_of(b)); break;
    case ArithKind::Sub: tree = make_sub(expr_of(a), expr_of(b)); break;
    case ArithKind::Mul: tree = make_mul(expr_of(a), expr_of(b)); break;
    case ArithKind::Div: tree = make_div(expr_of(a), expr_of(b)); break;
  }
  // Identity elimination may have reduced the tree to a constant
  // (e.g. symbolic * 0); such results are constant-only values.
  if (tree->kind == ExprKind::Const) return ConcolicValue::constant(result);
  return {result, std::move(tree)};
}

ConcolicValue neg(const ConcolicValue& a) {
  if (!a.symbolic()) return ConcolicValue::constant(-a.val);
  ExprPtr tree = make_neg(a.exp);
  if (tree->kind == ExprKind::Const) return ConcolicValue::constant(-a.val);
  return {-a.val, std::move(tree)};
}

bool relation_holds(double a, double b, Relation rel) {
  switch (rel) {
    case Relation::Eq: return a == b;
    case Relation::Ne: return a != b;
    case Relation::Lt: return a < b;
    case Relation::Le: return a <= b;
    case Relation::Gt: return a > b;
    case Relation::Ge: return a >= b;
  }
  return false;
}

const char* relation_symbol(Relation rel) {
  switch (rel) {
    case Relation::Eq: return "=";
    case Relation::Ne: return "!=";
    case Relation::Lt: return "<";
    case Relation::Le: return "<=";
    case Relation::Gt: return ">";
    case Relation::Ge: return ">=";
  }
  return "?";
}

bool compare(const ConcolicValue& a, const ConcolicValue& b, Relation rel,
             BranchTrace& rec) {
  bool taken = relation_holds(a.val, b.val, rel);
  if (a.symbolic() || b.symbolic()) {
    BranchPredicate p;
    p.atoms.push_back({expr_of(a), rel, expr_of(b)});
    p.taken = taken;
    rec.record(std::move(p));
  }
  return taken;
}

bool eval_atom(const PredicateAtom& atom, const Assignment& assignment) {
  return relation_holds(eval(atom.lhs, assignment), eval(atom.rhs, assignment),
                        atom.rel);
}

bool eval_predicate(const BranchPredicate& p, const Assignment& assignment) {
  for (const auto& atom : p.atoms)
    if (!eval_atom(atom, assignment)) return false;
  return true;
}

std::uint64_t structural_hash(const BranchPredicate& p) {
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  };
  std::uint64_t h = p.atoms.size();
  for (const auto& atom : p.atoms) {
    h = mix(h, structural_hash(*atom.lhs));
    h = mix(h, static_cast<std::uint64_t>(atom.rel) + 17);
    h = mix(h, structural_hash(*atom.rhs));
  }
  return h;
}

bool structural_equal(const BranchPredicate& a, const BranchPredicate& b) {
  if (a.atoms.size() != b.atoms.size()) return false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    if (a.atoms[i].rel != b.atoms[i].rel) return false;
    if (!structural_equal(*a.atoms[i].lhs, *b.atoms[i].lhs)) return false;
    if (!structural_equal(*a.atoms[i].rhs, *b.atoms[i].rhs)) return false;
  }
  return true;
}

std::string to_string(const PredicateAtom& atom) {
  std::ostringstream os;
  os << to_string(*atom.lhs) << " " << relation_symbol(atom.rel) << " "
     << to_string(*atom.rhs);
  return os.str();
}

std::string to_string(const BranchPredicate& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.atoms.size(); ++i) {
    if (i) os << " && ";
    os << to_string(p.atoms[i]);
  }
  os << " [taken=" << (p.taken ? "true" : "false") << "]";
  return os.str();
}

}  // namespace nnc
