#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mat2seq {

enum class ErrorCode {
  InvalidCrystal,
  IndexOutOfRange,
  DegenerateLattice,
  UnrealizableAngles,
  NonConvergence,
  InconsistentSupercell,
  MissingField,
  PartialOccupancy,
  MalformedLoop,
  UnknownElement,
  MalformedTriplet,
  GroupClosureFailure,
  OrbitInconsistency,
  SpeciesClash,
  DuplicateAtom,
  UnsupportedElement,
  ValueOutOfRange,
  ParseError,
  MultiplicityMismatch,
  UnknownToken,
  NegativeValue,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCrystal: return "InvalidCrystal";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateLattice: return "DegenerateLattice";
    case ErrorCode::UnrealizableAngles: return "UnrealizableAngles";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InconsistentSupercell: return "InconsistentSupercell";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::PartialOccupancy: return "PartialOccupancy";
    case ErrorCode::MalformedLoop: return "MalformedLoop";
    case ErrorCode::UnknownElement: return "UnknownElement";
    case ErrorCode::MalformedTriplet: return "MalformedTriplet";
    case ErrorCode::GroupClosureFailure: return "GroupClosureFailure";
    case ErrorCode::OrbitInconsistency: return "OrbitInconsistency";
    case ErrorCode::SpeciesClash: return "SpeciesClash";
    case ErrorCode::DuplicateAtom: return "DuplicateAtom";
    case ErrorCode::UnsupportedElement: return "UnsupportedElement";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MultiplicityMismatch: return "MultiplicityMismatch";
    case ErrorCode::UnknownToken: return "UnknownToken";
    case ErrorCode::NegativeValue: return "NegativeValue";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying a code;
/// what() is "<Code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// ParseError with a 1-based line/column.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& detail)
      : Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + detail),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mat2seq
