#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ldorb {

enum class ErrorKind {
  NotMonic,
  Reducible,
  RootIsolationFailed,
  DivisionByZero,
  BadWitness,
  NotAUnit,
  NeedSuppliedUnits,
  DegenerateLattice,
  InconclusivePrecision,
  HypothesisViolated,
  NoSplitFound,
  Singular,
  InternalError,
  NotAdmissible,
  SearchBudgetExceeded,
  SpecViolatesHypotheses,
  BudgetExceeded,
  NoWitness,
  TrialsExhausted,
  NotUnimodularizable,
  NotOverF,
  ConfigInvalid,
  DomainError,
};

std::string_view to_string(ErrorKind kind);

// Ordinary failure: bad input, exhausted budget, unsupported case.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when a computation contradicts a proven statement. These are never
// absorbed; the CLI maps them to exit status 2.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace ldorb
