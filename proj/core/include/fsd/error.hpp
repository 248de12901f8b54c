#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fsd {

enum class ErrorCode {
  // Vector math.
  kZeroVector,
  kDimMismatch,
  kEmptySet,
  // Window / detector.
  kClusterIdGap,
  kUnsortedCorpus,
  kInvalidParams,
  kInvalidCorpus,
  // Metrics.
  kLengthMismatch,
  kTooFewItems,
  kNoGoldLabels,
  // Ingest.
  kParseError,
  kMissingField,
  kAmbiguousTimestamp,
  kBadMagic,
  kTruncatedFile,
  kVersionUnsupported,
  kIdMismatch,
  kIoError,
};

// Broad class of an error; the CLI maps each class to one exit code.
enum class ErrorClass {
  kArgument,
  kIngest,
  kRuntime,
};

std::string_view to_string(ErrorCode code);
ErrorClass error_class(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fsd
