#include "req2tc/error.hpp"

namespace req2tc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHex: return "NotHex";
    case ErrorCode::MissingSection: return "MissingSection";
    case ErrorCode::DuplicateSection: return "DuplicateSection";
    case ErrorCode::UnknownSection: return "UnknownSection";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedTable: return "MalformedTable";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::AmbiguousSignal: return "AmbiguousSignal";
    case ErrorCode::MalformedRequirement: return "MalformedRequirement";
    case ErrorCode::NoSignalFound: return "NoSignalFound";
    case ErrorCode::NoValueFound: return "NoValueFound";
    case ErrorCode::MixedConjunction: return "MixedConjunction";
    case ErrorCode::UnknownSignal: return "UnknownSignal";
    case ErrorCode::DuplicateSignal: return "DuplicateSignal";
    case ErrorCode::ConflictingBindings: return "ConflictingBindings";
    case ErrorCode::SpanAlignmentError: return "SpanAlignmentError";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::SpanCountMismatch: return "SpanCountMismatch";
    case ErrorCode::NoEntities: return "NoEntities";
    case ErrorCode::ModelFormatError: return "ModelFormatError";
    case ErrorCode::UnparseableAction: return "UnparseableAction";
    case ErrorCode::NoActiveValue: return "NoActiveValue";
    case ErrorCode::NoInactiveValue: return "NoInactiveValue";
    case ErrorCode::IncompleteBindings: return "IncompleteBindings";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::TooFewItems: return "TooFewItems";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::NoSignals: return "NoSignals";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace req2tc
