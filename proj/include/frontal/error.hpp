#pragma once

#include <stdexcept>
#include <string>

namespace frontal {

enum class ErrorKind {
  DivisionByZeroValue,
  QuadratureNonConvergent,
  SyntaxError,
  UnknownIdentifier,
  DomainError,
  NotAFrontal,
  DegenerateBasis,
  NotTransversal,
  InsufficientJetOrder,
  SingularPoint,
  NotExtendable,
  Indeterminate,
  KVanishes,
  SingularIIOmega,
  DivisionByZero,
  ConditionFailed,
  CompatibilityViolated,
  FrameDegenerate,
  IntegrabilityViolated,
  DegenerateMetric,
  RankDeficient,
  InputError,
};

const char* to_string(ErrorKind k);

// Process exit code for an error: 2 input, 3 mathematical precondition, 4 verification.
int exit_code(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures carry the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t pos, const std::string& what)
      : Error(kind, what), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + ": " + what);
}

}  // namespace frontal
