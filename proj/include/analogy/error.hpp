#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace analogy {

/// Machine-readable failure category. The CLI maps these onto exit codes.
enum class ErrorKind {
  EmptyInput,
  DimensionMismatch,
  MalformedLine,
  TruncatedFile,
  HeaderParseError,
  TokenTooLong,
  InvalidSpace,
  InvalidToken,
  NonFiniteValue,
  MissingToken,
  ZeroVector,
  ZeroDifference,
  ExcludedCandidate,
  InvalidPair,
  InvalidArgument,
  MalformedRow,
  InsufficientPairs,
  RequestExceedsPopulation,
  RatingOutOfRange,
  NoRatings,
  ConstantInput,
  LengthMismatch,
  TooFewObservations,
  DegenerateGroup,
  DegenerateGroups,
  UnsupportedAlpha,
  UnsupportedDesign,
  DegenerateData,
  InsufficientRatings,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// All library failures are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string detail, std::string subject = {});

  ErrorKind kind() const noexcept { return kind_; }
  /// Offending token, id, or line reference, when the failure has one.
  const std::string& subject() const noexcept { return subject_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
  std::string subject_;
};

}  // namespace analogy
