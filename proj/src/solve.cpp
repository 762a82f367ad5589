#include "nnconcolic/solve.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nnconcolic/errors.hpp"
#include "subprocess.hpp"

namespace nnc {

namespace {

void render_expr(std::ostringstream& os, const ExprNode& e) {
  switch (e.kind) {
    case ExprKind::Const:
      os << smt_literal(e.value);
      return;
    case ExprKind::Var:
      os << "x" << e.var;
      return;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      const char* op = e.kind == ExprKind::Add   ? "+"
                       : e.kind == ExprKind::Sub ? "-"
                       : e.kind == ExprKind::Mul ? "*"
                                                 : "/";
      os << "(" << op << " ";
      render_expr(os, *e.lhs);
      os << " ";
      render_expr(os, *e.rhs);
      os << ")";
      return;
    }
    case ExprKind::Neg:
      os << "(- ";
      render_expr(os, *e.lhs);
      os << ")";
      return;
  }
}

void render_atom(std::ostringstream& os, const PredicateAtom& atom) {
  // != has no SMT-LIB operator; rewrite as (not (= ...)).
  if (atom.rel == Relation::Ne) os << "(not ";
  const char* op = nullptr;
  switch (atom.rel) {
    case Relation::Eq:
    case Relation::Ne: op = "="; break;
    case Relation::Lt: op = "<"; break;
    case Relation::Le: op = "<="; break;
    case Relation::Gt: op = ">"; break;
    case Relation::Ge: op = ">="; break;
  }
  os << "(" << op << " ";
  render_expr(os, *atom.lhs);
  os << " ";
  render_expr(os, *atom.rhs);
  os << ")";
  if (atom.rel == Relation::Ne) os << ")";
}

void render_predicate(std::ostringstream& os, const BranchPredicate& pred,
                      bool asserted) {
  if (!asserted) os << "(not ";
  if (pred.atoms.size() > 1) {
    os << "(and";
    for (const auto& atom : pred.atoms) {
      os << " ";
      render_atom(os, atom);
    }
    os << ")";
  } else {
    render_atom(os, pred.atoms.at(0));
  }
  if (!asserted) os << ")";
}

struct Token {
  enum Kind { Open, Close, Atom } kind;
  std::string text;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      tokens.push_back({Token::Open, "("});
      ++i;
    } else if (c == ')') {
      tokens.push_back({Token::Close, ")"});
      ++i;
    } else if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"') ++j;
      tokens.push_back({Token::Atom, text.substr(i, j - i + 1)});
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) &&
             text[j] != '(' && text[j] != ')')
        ++j;
      tokens.push_back({Token::Atom, text.substr(i, j - i)});
      i = j;
    }
  }
  return tokens;
}

[[noreturn]] void model_error(const std::string& what) {
  throw EngineError(ErrorKind::ParseError, "model: " + what);
}

double parse_decimal(std::string text) {
  // z3's decimal pretty printer marks truncated algebraic numbers with a
  // trailing '?'.
  if (!text.empty() && text.back() == '?') text.pop_back();
  if (text.empty()) model_error("empty numeral");
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) model_error("bad numeral '" + text + "'");
  return v;
}

// VALUE := decimal | (- VALUE) | (/ VALUE VALUE)
double parse_value(const std::vector<Token>& tokens, std::size_t& pos) {
  if (pos >= tokens.size()) model_error("unexpected end of model");
  const Token& t = tokens[pos];
  if (t.kind == Token::Atom) {
    ++pos;
    return parse_decimal(t.text);
  }
  if (t.kind != Token::Open) model_error("expected a value");
  ++pos;
  if (pos >= tokens.size() || tokens[pos].kind != Token::Atom)
    model_error("expected an operator");
  std::string op = tokens[pos].text;
  ++pos;
  double result = 0.0;
  if (op == "-") {
    result = -parse_value(tokens, pos);
  } else if (op == "/") {
    double num = parse_value(tokens, pos);
    double den = parse_value(tokens, pos);
    if (den == 0.0) model_error("rational with zero denominator");
    result = num / den;
  } else {
    model_error("unsupported value form '" + op + "'");
  }
  if (pos >= tokens.size() || tokens[pos].kind != Token::Close)
    model_error("missing ')'");
  ++pos;
  return result;
}

void skip_sexpr(const std::vector<Token>& tokens, std::size_t& pos) {
  if (pos >= tokens.size()) return;
  if (tokens[pos].kind != Token::Open) {
    ++pos;
    return;
  }
  int depth = 0;
  while (pos < tokens.size()) {
    if (tokens[pos].kind == Token::Open) ++depth;
    if (tokens[pos].kind == Token::Close) --depth;
    ++pos;
    if (depth == 0) return;
  }
}

std::string substitute_timeout(const std::string& arg, double timeout_seconds) {
  const std::string key = "{timeout_ms}";
  auto at = arg.find(key);
  if (at == std::string::npos) return arg;
  long ms = std::lround(std::max(timeout_seconds, 0.001) * 1000.0);
  std::string out = arg;
  out.replace(at, key.size(), std::to_string(ms));
  return out;
}

}  // namespace

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::Sat: return "sat";
    case SolverStatus::Unsat: return "unsat";
    case SolverStatus::Unknown: return "unknown";
    case SolverStatus::Error: return "error";
  }
  return "?";
}

std::string smt_literal(double value) {
  if (!std::isfinite(value))
    throw EngineError(ErrorKind::NumericOverflow,
                      "cannot render non-finite literal");
  bool negative = std::signbit(value);
  double magnitude = negative ? -value : value;
  char buf[400];
  auto res = std::to_chars(buf, buf + sizeof(buf), magnitude,
                           std::chars_format::fixed);
  std::string body(buf, res.ptr);
  if (body.find('.') == std::string::npos) body += ".0";
  if (negative) return "(- " + body + ")";
  return body;
}

std::string render(const ConstraintSystem& system) {
  std::ostringstream os;
  os << "(set-logic " << system.logic << ")\n";
  for (int var : system.variables)
    os << "(declare-const x" << var << " Real)\n";
  for (const auto& assertion : system.assertions) {
    os << "(assert ";
    render_predicate(os, assertion.predicate, assertion.asserted);
    os << ")\n";
  }
  os << "(check-sat)\n(get-model)\n";
  return os.str();
}

std::map<int, double> parse_model_sexpr(const std::string& text) {
  std::map<int, double> model;
  auto tokens = tokenize(text);
  std::size_t pos = 0;
  while (pos < tokens.size()) {
    if (tokens[pos].kind == Token::Atom && tokens[pos].text == "define-fun") {
      ++pos;
      if (pos >= tokens.size() || tokens[pos].kind != Token::Atom)
        model_error("define-fun without a name");
      std::string name = tokens[pos].text;
      ++pos;
      // argument list ()
      if (pos + 1 < tokens.size() && tokens[pos].kind == Token::Open &&
          tokens[pos + 1].kind == Token::Close) {
        pos += 2;
      } else {
        skip_sexpr(tokens, pos);
      }
      if (pos < tokens.size() && tokens[pos].kind == Token::Atom &&
          tokens[pos].text == "Real")
        ++pos;
      double value = parse_value(tokens, pos);
      if (name.size() > 1 && name[0] == 'x') {
        int id = 0;
        auto [p, ec] = std::from_chars(name.data() + 1,
                                       name.data() + name.size(), id);
        if (ec == std::errc{} && p == name.data() + name.size())
          model[id] = value;
      }
    } else {
      ++pos;
    }
  }
  return model;
}

std::vector<std::string> split_command(const std::string& command_line) {
  std::vector<std::string> out;
  std::istringstream is(command_line);
  std::string word;
  while (is >> word) out.push_back(word);
  return out;
}

SolverClient::SolverClient(SolverConfig config) : config_(std::move(config)) {}

SolverResult SolverClient::solve(const ConstraintSystem& system,
                                 double timeout_seconds) {
  return solve_text(render(system), timeout_seconds);
}

SolverResult SolverClient::solve_text(const std::string& smt2,
                                      double timeout_seconds) {
  SolverResult result;
  result.query_bytes = smt2.size();

  if (config_.command.empty()) {
    result.status = SolverStatus::Error;
    result.diagnostic = "no solver configured";
    return result;
  }

  if (!config_.dump_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config_.dump_dir, ec);
    char name[32];
    std::snprintf(name, sizeof(name), "%06llu.smt2", ++dump_counter_);
    std::ofstream out(std::filesystem::path(config_.dump_dir) / name,
                      std::ios::binary);
    if (out) out << smt2;
  }

  std::vector<std::string> argv;
  argv.reserve(config_.command.size());
  for (const auto& arg : config_.command)
    argv.push_back(substitute_timeout(arg, timeout_seconds));

  auto start = std::chrono::steady_clock::now();
  // The solver gets the soft limit via {timeout_ms}; the hard backstop
  // kills the process at twice that.
  ProcessResult proc = run_process(argv, smt2, 2.0 * timeout_seconds);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  if (!proc.spawned) {
    result.status = SolverStatus::Error;
    result.diagnostic = "solver spawn failed: " + proc.error;
    return result;
  }
  if (proc.timed_out) {
    result.status = SolverStatus::Unknown;
    result.diagnostic = "solver killed after hard timeout";
    return result;
  }

  std::istringstream is(proc.output);
  std::string status_token;
  is >> status_token;
  if (status_token == "sat") {
    result.status = SolverStatus::Sat;
    try {
      std::string rest((std::istreambuf_iterator<char>(is)),
                       std::istreambuf_iterator<char>());
      result.model = parse_model_sexpr(rest);
    } catch (const EngineError& e) {
      result.status = SolverStatus::Error;
      result.diagnostic = e.what();
      result.model.clear();
    }
  } else if (status_token == "unsat") {
    result.status = SolverStatus::Unsat;
  } else if (status_token == "unknown") {
    result.status = SolverStatus::Unknown;
  } else {
    result.status = SolverStatus::Error;
    result.diagnostic =
        "unrecognized solver output: " + proc.output.substr(0, 200);
  }
  return result;
}

}  // namespace nnc
