#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace signpipe {

enum class ErrorCode {
  // ingestion
  MalformedDocument,
  OutOfRangeConfidence,
  NonFinite,
  IoError,
  SchemaVersionMismatch,
  MalformedRecord,
  DuplicateIds,
  EmptyInput,
  // retrieval
  DimensionMismatch,
  ZeroNormVector,
  MissingEmbeddings,
  EmptyKnowledgeBase,
  BackendError,
  UnresolvedToken,
  // perturbation
  MissingLandmarks,
  TooShort,
  ShapeMismatch,
  InvalidWeights,
  InvalidConfig,
  ValueOutOfRange,
  // losses
  InvalidDistribution,
  LengthMismatch,
  IndexOutOfRange,
  // corruption
  EmptyVocab,
  InvalidEdit,
  // metrics
  EmptyReference,
  DegenerateAgreement,
  LineCountMismatch,
  // configuration
  UnknownKey,
  TypeError,
  StaleInput,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the toolkit. The code is the
/// machine-readable part; the message carries context (line, symbol, term).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// MalformedRecord / LineCountMismatch carry the 1-based line they refer to.
class LineError : public Error {
 public:
  LineError(ErrorCode code, std::size_t line, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace signpipe
