#pragma once

#include <stdexcept>
#include <string>

namespace nnc {

enum class ErrorKind {
  DivByZero,
  UnboundVar,
  NumericOverflow,
  ShapeError,
  ParseError,
  SolverConfig,
  IoError,
};

// Any failure that aborts the current forward pass or rejects an input
// file. The attack loop treats forward-pass failures as discarded
// worklist entries; the CLI maps kinds to exit codes.
class EngineError : public std::runtime_error {
public:
  EngineError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivByZero: return "DivByZero";
    case ErrorKind::UnboundVar: return "UnboundVar";
    case ErrorKind::NumericOverflow: return "NumericOverflow";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SolverConfig: return "SolverConfig";
    case ErrorKind::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace nnc
