#include "nnconcolic/sym_expr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "nnconcolic/errors.hpp"

namespace nnc {

namespace {

ExprPtr node(ExprKind kind, double value, int var, ExprPtr lhs, ExprPtr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->value = value;
  n->var = var;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool both_const(const ExprPtr& a, const ExprPtr& b) {
  return a->kind == ExprKind::Const && b->kind == ExprKind::Const;
}

}  // namespace

ExprPtr make_const(double value) {
  return node(ExprKind::Const, value, -1, nullptr, nullptr);
}

ExprPtr make_var(int id) { return node(ExprKind::Var, 0.0, id, nullptr, nullptr); }

ExprPtr make_add(ExprPtr a, ExprPtr b) {
  if (both_const(a, b)) return make_const(a->value + b->value);
  if (is_const_value(a, 0.0)) return b;
  if (is_const_value(b, 0.0)) return a;
  return node(ExprKind::Add, 0.0, -1, std::move(a), std::move(b));
}

ExprPtr make_sub(ExprPtr a, ExprPtr b) {
  if (both_const(a, b)) return make_const(a->value - b->value);
  if (is_const_value(b, 0.0)) return a;
  return node(ExprKind::Sub, 0.0, -1, std::move(a), std::move(b));
}

ExprPtr make_mul(ExprPtr a, ExprPtr b) {
  if (both_const(a, b)) return make_const(a->value * b->value);
  if (is_const_value(a, 0.0) || is_const_value(b, 0.0)) return make_const(0.0);
  if (is_const_value(a, 1.0)) return b;
  if (is_const_value(b, 1.0)) return a;
  return node(ExprKind::Mul, 0.0, -1, std::move(a), std::move(b));
}

ExprPtr make_div(ExprPtr a, ExprPtr b) {
  if (is_const_value(b, 0.0))
    throw EngineError(ErrorKind::DivByZero, "division by constant zero");
  if (both_const(a, b)) return make_const(a->value / b->value);
  return node(ExprKind::Div, 0.0, -1, std::move(a), std::move(b));
}

ExprPtr make_neg(ExprPtr a) {
  if (a->kind == ExprKind::Const) return make_const(-a->value);
  return node(ExprKind::Neg, 0.0, -1, std::move(a), nullptr);
}

double eval(const ExprNode& expr, const Assignment& assignment) {
  switch (expr.kind) {
    case ExprKind::Const:
      return expr.value;
    case ExprKind::Var: {
      auto it = assignment.find(expr.var);
      if (it == assignment.end())
        throw EngineError(ErrorKind::UnboundVar,
                          "unbound variable x" + std::to_string(expr.var));
      return it->second;
    }
    case ExprKind::Add:
      return eval(*expr.lhs, assignment) + eval(*expr.rhs, assignment);
    case ExprKind::Sub:
      return eval(*expr.lhs, assignment) - eval(*expr.rhs, assignment);
    case ExprKind::Mul:
      return eval(*expr.lhs, assignment) * eval(*expr.rhs, assignment);
    case ExprKind::Div: {
      double denom = eval(*expr.rhs, assignment);
      if (denom == 0.0)
        throw EngineError(ErrorKind::DivByZero, "division by zero in eval");
      return eval(*expr.lhs, assignment) / denom;
    }
    case ExprKind::Neg:
      return -eval(*expr.lhs, assignment);
  }
  throw EngineError(ErrorKind::ParseError, "corrupt expression node");
}

double eval(const ExprPtr& expr, const Assignment& assignment) {
  return eval(*expr, assignment);
}

bool is_const(const ExprPtr& expr) {
  return expr && expr->kind == ExprKind::Const;
}

bool is_const_value(const ExprPtr& expr, double value) {
  return is_const(expr) && expr->value == value;
}

bool contains_var(const ExprNode& expr) {
  switch (expr.kind) {
    case ExprKind::Const: return false;
    case ExprKind::Var: return true;
    case ExprKind::Neg: return contains_var(*expr.lhs);
    default: return contains_var(*expr.lhs) || contains_var(*expr.rhs);
  }
}

void collect_vars(const ExprNode& expr, std::vector<int>& out) {
  switch (expr.kind) {
    case ExprKind::Const:
      return;
    case ExprKind::Var:
      out.push_back(expr.var);
      return;
    case ExprKind::Neg:
      collect_vars(*expr.lhs, out);
      return;
    default:
      collect_vars(*expr.lhs, out);
      collect_vars(*expr.rhs, out);
  }
}

std::vector<int> sorted_vars(const ExprNode& expr) {
  std::vector<int> vars;
  collect_vars(expr, vars);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::uint64_t structural_hash(const ExprNode& expr) {
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  };
  std::uint64_t h = static_cast<std::uint64_t>(expr.kind) + 1;
  switch (expr.kind) {
    case ExprKind::Const:
      return mix(h, std::bit_cast<std::uint64_t>(expr.value));
    case ExprKind::Var:
      return mix(h, static_cast<std::uint64_t>(expr.var) * 0x100000001b3ull);
    case ExprKind::Neg:
      return mix(h, structural_hash(*expr.lhs));
    default:
      h = mix(h, structural_hash(*expr.lhs));
      return mix(h, structural_hash(*expr.rhs));
  }
}

bool structural_equal(const ExprNode& a, const ExprNode& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Const:
      // bit comparison so that -0.0 and 0.0 stay distinct keys
      return std::bit_cast<std::uint64_t>(a.value) ==
             std::bit_cast<std::uint64_t>(b.value);
    case ExprKind::Var:
      return a.var == b.var;
    case ExprKind::Neg:
      return structural_equal(*a.lhs, *b.lhs);
    default:
      return structural_equal(*a.lhs, *b.lhs) && structural_equal(*a.rhs, *b.rhs);
  }
}

std::string to_string(const ExprNode& expr) {
  std::ostringstream os;
  switch (expr.kind) {
    case ExprKind::Const:
      os << expr.value;
      break;
    case ExprKind::Var:
      os << "x" << expr.var;
      break;
    case ExprKind::Add:
      os << "(" << to_string(*expr.lhs) << " + " << to_string(*expr.rhs) << ")";
      break;
    case ExprKind::Sub:
      os << "(" << to_string(*expr.lhs) << " - " << to_string(*expr.rhs) << ")";
      break;
    case ExprKind::Mul:
      os << "(" << to_string(*expr.lhs) << " * " << to_string(*expr.rhs) << ")";
      break;
    case ExprKind::Div:
      os << "(" << to_string(*expr.lhs) << " / " << to_string(*expr.rhs) << ")";
      break;
    case ExprKind::Neg:
      os << "(-" << to_string(*expr.lhs) << ")";
      break;
  }
  return os.str();
}

std::string to_string(const ExprPtr& expr) {
  return expr ? to_string(*expr) : std::string("<absent>");
}

}  // namespace nnc
