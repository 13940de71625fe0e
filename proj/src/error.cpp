#include "analogy/error.hpp"

namespace analogy {

namespace {

std::string compose(ErrorKind kind, const std::string& detail, const std::string& subject) {
  std::string msg(to_string(kind));
  if (!subject.empty()) {
    msg += "(" + subject + ")";
  }
  if (!detail.empty()) {
    msg += ": " + detail;
  }
  return msg;
}

}  // namespace

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::HeaderParseError: return "HeaderParseError";
    case ErrorKind::TokenTooLong: return "TokenTooLong";
    case ErrorKind::InvalidSpace: return "InvalidSpace";
    case ErrorKind::InvalidToken: return "InvalidToken";
    case ErrorKind::NonFiniteValue: return "NonFiniteValue";
    case ErrorKind::MissingToken: return "MissingToken";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::ZeroDifference: return "ZeroDifference";
    case ErrorKind::ExcludedCandidate: return "ExcludedCandidate";
    case ErrorKind::InvalidPair: return "InvalidPair";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::InsufficientPairs: return "InsufficientPairs";
    case ErrorKind::RequestExceedsPopulation: return "RequestExceedsPopulation";
    case ErrorKind::RatingOutOfRange: return "RatingOutOfRange";
    case ErrorKind::NoRatings: return "NoRatings";
    case ErrorKind::ConstantInput: return "ConstantInput";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::TooFewObservations: return "TooFewObservations";
    case ErrorKind::DegenerateGroup: return "DegenerateGroup";
    case ErrorKind::DegenerateGroups: return "DegenerateGroups";
    case ErrorKind::UnsupportedAlpha: return "UnsupportedAlpha";
    case ErrorKind::UnsupportedDesign: return "UnsupportedDesign";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::InsufficientRatings: return "InsufficientRatings";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, std::string detail, std::string subject)
    : std::runtime_error(compose(kind, detail, subject)),
      kind_(kind),
      detail_(std::move(detail)),
      subject_(std::move(subject)) {}

}  // namespace analogy
