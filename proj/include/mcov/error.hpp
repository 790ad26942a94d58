#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcov {

enum class Errc {
  NotPrime,
  FieldTooLarge,
  InvalidDegree,
  DivisionByZero,
  ElementOutOfRange,
  GroundSetTooLarge,
  OverlappingSets,
  UnknownCatalog,
  LatticeTooLarge,
  WeightOverflow,
  EmptySet,
  PreconditionViolated,
  SearchBudgetExceeded,
  AllLoops,
  SizeCapExceeded,
  InvalidIndices,
  MemberNotInFamily,
  ConstructionFailed,
  ParseError,
};

inline std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::FieldTooLarge: return "FieldTooLarge";
    case Errc::InvalidDegree: return "InvalidDegree";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::ElementOutOfRange: return "ElementOutOfRange";
    case Errc::GroundSetTooLarge: return "GroundSetTooLarge";
    case Errc::OverlappingSets: return "OverlappingSets";
    case Errc::UnknownCatalog: return "UnknownCatalog";
    case Errc::LatticeTooLarge: return "LatticeTooLarge";
    case Errc::WeightOverflow: return "WeightOverflow";
    case Errc::EmptySet: return "EmptySet";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case Errc::AllLoops: return "AllLoops";
    case Errc::SizeCapExceeded: return "SizeCapExceeded";
    case Errc::InvalidIndices: return "InvalidIndices";
    case Errc::MemberNotInFamily: return "MemberNotInFamily";
    case Errc::ConstructionFailed: return "ConstructionFailed";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `what()` is prefixed with the code
/// name; `detail()` holds the bare message (often a serialized witness).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace mcov
