#pragma once

#include <stdexcept>
#include <string>

namespace absorb {

enum class ErrorKind {
  parameter,
  parse,
  capacity,
  budget,
  precondition,
  construction,
  unsupported,
  reliability,
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::parse: return "parse";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::budget: return "budget";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::construction: return "construction";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::reliability: return "reliability";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define ABSORB_DEFINE_ERROR(Name, Kind)                                        \
  class Name : public Error {                                                  \
   public:                                                                     \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {}   \
  };

ABSORB_DEFINE_ERROR(ParameterError, parameter)
ABSORB_DEFINE_ERROR(ParseError, parse)
ABSORB_DEFINE_ERROR(CapacityError, capacity)
ABSORB_DEFINE_ERROR(BudgetError, budget)
ABSORB_DEFINE_ERROR(PreconditionError, precondition)
ABSORB_DEFINE_ERROR(ConstructionError, construction)
ABSORB_DEFINE_ERROR(UnsupportedError, unsupported)
ABSORB_DEFINE_ERROR(ReliabilityError, reliability)

#undef ABSORB_DEFINE_ERROR

// Internal invariant check; failure is a bug, reported as a construction error.
inline void ensure(bool cond, const char* what) {
  if (!cond) throw ConstructionError(what);
}

}  // namespace absorb
