#include "fsd/error.hpp"

namespace fsd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kClusterIdGap: return "ClusterIdGap";
    case ErrorCode::kUnsortedCorpus: return "UnsortedCorpus";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInvalidCorpus: return "InvalidCorpus";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooFewItems: return "TooFewItems";
    case ErrorCode::kNoGoldLabels: return "NoGoldLabels";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kAmbiguousTimestamp: return "AmbiguousTimestamp";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kVersionUnsupported: return "VersionUnsupported";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams:
      return ErrorClass::kArgument;
    case ErrorCode::kZeroVector:
    case ErrorCode::kUnsortedCorpus:
    case ErrorCode::kInvalidCorpus:
    case ErrorCode::kNoGoldLabels:
    case ErrorCode::kParseError:
    case ErrorCode::kMissingField:
    case ErrorCode::kAmbiguousTimestamp:
    case ErrorCode::kBadMagic:
    case ErrorCode::kTruncatedFile:
    case ErrorCode::kVersionUnsupported:
    case ErrorCode::kIdMismatch:
    case ErrorCode::kIoError:
    case ErrorCode::kLengthMismatch:
      return ErrorClass::kIngest;
    default:
      return ErrorClass::kRuntime;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace fsd
