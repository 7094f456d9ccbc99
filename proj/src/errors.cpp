#include "ldorb/errors.hpp"

namespace ldorb {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotMonic: return "NotMonic";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::RootIsolationFailed: return "RootIsolationFailed";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::BadWitness: return "BadWitness";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::NeedSuppliedUnits: return "NeedSuppliedUnits";
    case ErrorKind::DegenerateLattice: return "DegenerateLattice";
    case ErrorKind::InconclusivePrecision: return "InconclusivePrecision";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::NoSplitFound: return "NoSplitFound";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::InternalError: return "InternalError";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorKind::SpecViolatesHypotheses: return "SpecViolatesHypotheses";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NoWitness: return "NoWitness";
    case ErrorKind::TrialsExhausted: return "TrialsExhausted";
    case ErrorKind::NotUnimodularizable: return "NotUnimodularizable";
    case ErrorKind::NotOverF: return "NotOverF";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::DomainError: return "DomainError";
  }
  return "Unknown";
}

}  // namespace ldorb
