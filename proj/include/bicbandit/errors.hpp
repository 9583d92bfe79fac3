#pragma once

#include <stdexcept>
#include <string>

namespace bic {

enum class ErrorKind {
  Validation,            // malformed input, precondition violation
  ImpossibleObservation, // conditioning event has probability zero
  NotExplorable,         // a prior-dependent parameter degenerates to zero
  TooLarge,              // exact computation exceeds the configured cap
  AuditFailure,          // a margin fell below the configured floor
  Internal,              // postcondition broke; a defect, not a user error
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

}  // namespace bic
