#include "signpipe/error.hpp"

namespace signpipe {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::OutOfRangeConfidence: return "OutOfRangeConfidence";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::DuplicateIds: return "DuplicateIds";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroNormVector: return "ZeroNormVector";
    case ErrorCode::MissingEmbeddings: return "MissingEmbeddings";
    case ErrorCode::EmptyKnowledgeBase: return "EmptyKnowledgeBase";
    case ErrorCode::BackendError: return "BackendError";
    case ErrorCode::UnresolvedToken: return "UnresolvedToken";
    case ErrorCode::MissingLandmarks: return "MissingLandmarks";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyVocab: return "EmptyVocab";
    case ErrorCode::InvalidEdit: return "InvalidEdit";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::DegenerateAgreement: return "DegenerateAgreement";
    case ErrorCode::LineCountMismatch: return "LineCountMismatch";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::StaleInput: return "StaleInput";
  }
  return "Unknown";
}

}  // namespace signpipe
