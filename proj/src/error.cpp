#include "frontal/error.hpp"

namespace frontal {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DivisionByZeroValue: return "DivisionByZeroValue";
    case ErrorKind::QuadratureNonConvergent: return "QuadratureNonConvergent";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NotAFrontal: return "NotAFrontal";
    case ErrorKind::DegenerateBasis: return "DegenerateBasis";
    case ErrorKind::NotTransversal: return "NotTransversal";
    case ErrorKind::InsufficientJetOrder: return "InsufficientJetOrder";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::NotExtendable: return "NotExtendable";
    case ErrorKind::Indeterminate: return "Indeterminate";
    case ErrorKind::KVanishes: return "KVanishes";
    case ErrorKind::SingularIIOmega: return "SingularIIOmega";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ConditionFailed: return "ConditionFailed";
    case ErrorKind::CompatibilityViolated: return "CompatibilityViolated";
    case ErrorKind::FrameDegenerate: return "FrameDegenerate";
    case ErrorKind::IntegrabilityViolated: return "IntegrabilityViolated";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::InputError: return "InputError";
  }
  return "Unknown";
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::InputError:
      return 2;
    case ErrorKind::CompatibilityViolated:
    case ErrorKind::IntegrabilityViolated:
    case ErrorKind::FrameDegenerate:
    case ErrorKind::NotExtendable:
    case ErrorKind::Indeterminate:
    case ErrorKind::ConditionFailed:
      return 4;
    default:
      return 3;
  }
}

}  // namespace frontal
