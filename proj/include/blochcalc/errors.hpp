#pragma once

#include <stdexcept>
#include <string>

namespace blochcalc {

enum class ErrorKind {
  PointOutsideDisc,
  DomainViolation,
  NotSelfMap,
  BadRadius,
  NotNormalized,
  DuplicatePoints,
  DictionaryTooCoarse,
  DimensionMismatch,
  RankZero,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PointOutsideDisc: return "PointOutsideDisc";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NotSelfMap: return "NotSelfMap";
    case ErrorKind::BadRadius: return "BadRadius";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::DictionaryTooCoarse: return "DictionaryTooCoarse";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::RankZero: return "RankZero";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Unknown";
}

}  // namespace blochcalc
