#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace req2tc {

enum class ErrorCode {
  // doc_model
  NotHex,
  MissingSection,
  DuplicateSection,
  UnknownSection,
  MalformedHeader,
  MalformedTable,
  RangeViolation,
  AmbiguousSignal,
  // req_parser
  MalformedRequirement,
  // rule_extractor
  NoSignalFound,
  NoValueFound,
  MixedConjunction,
  UnknownSignal,
  DuplicateSignal,
  ConflictingBindings,
  // ner
  SpanAlignmentError,
  EmptyDataset,
  SpanCountMismatch,
  NoEntities,
  ModelFormatError,
  // tc_gen
  UnparseableAction,
  NoActiveValue,
  NoInactiveValue,
  IncompleteBindings,
  // eval
  LengthMismatch,
  EmptyMatrix,
  TooFewItems,
  EmptySample,
  NoSignals,
  // corpus / io
  InvalidConfig,
  IoError,
  FormatError,
  // contract violations that are not data errors
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a stable code so callers
/// (the CLI, evaluation reports) can classify it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace req2tc
