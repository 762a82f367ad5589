#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace nnc {

enum class ExprKind { Const, Var, Add, Sub, Mul, Div, Neg };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

// Immutable arithmetic expression tree over attack variables. Nodes are
// never mutated after construction, so subtrees can be shared freely
// across values and across threads.
struct ExprNode {
  ExprKind kind;
  double value = 0.0;  // Const
  int var = -1;        // Var
  ExprPtr lhs;         // binary ops; Neg uses lhs only
  ExprPtr rhs;
};

ExprPtr make_const(double value);
ExprPtr make_var(int id);

// The binary factories fold constant operands and drop additive and
// multiplicative identities (x+0, x*1, x*0). Nothing else is rewritten,
// so emitted constraints stay textually close to the recorded arithmetic.
ExprPtr make_add(ExprPtr a, ExprPtr b);
ExprPtr make_sub(ExprPtr a, ExprPtr b);
ExprPtr make_mul(ExprPtr a, ExprPtr b);
ExprPtr make_div(ExprPtr a, ExprPtr b);
ExprPtr make_neg(ExprPtr a);

using Assignment = std::unordered_map<int, double>;

// Recursive 64-bit float evaluation. Throws UnboundVar for variables
// missing from the assignment and DivByZero on a zero denominator.
double eval(const ExprNode& expr, const Assignment& assignment);
double eval(const ExprPtr& expr, const Assignment& assignment);

bool is_const(const ExprPtr& expr);
bool is_const_value(const ExprPtr& expr, double value);
bool contains_var(const ExprNode& expr);

void collect_vars(const ExprNode& expr, std::vector<int>& out);
std::vector<int> sorted_vars(const ExprNode& expr);

std::uint64_t structural_hash(const ExprNode& expr);
bool structural_equal(const ExprNode& a, const ExprNode& b);

// Infix rendering for logs and error messages (not the SMT form).
std::string to_string(const ExprNode& expr);
std::string to_string(const ExprPtr& expr);

}  // namespace nnc
