#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "req2tc/classifiers.hpp"
#include "req2tc/features.hpp"
#include "req2tc/parallel.hpp"
#include "req2tc/req_parser.hpp"
#include "req2tc/rule_extractor.hpp"

namespace req2tc::ner {

/// Only SIGNAL and VALUE appear in annotations; OTHER is the implicit label.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
  Label label = Label::SIGNAL;
  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

struct AnnotatedSentence {
  std::string text;
  std::vector<EntitySpan> spans;
  friend bool operator==(const AnnotatedSentence&, const AnnotatedSentence&) = default;
};

/// Checks ordering, bounds, non-overlap and whitespace-free edges.
/// Throws FormatError.
void validate(const AnnotatedSentence& sentence);

/// Per-token labels for a sentence. Throws SpanAlignmentError when a span
/// boundary does not coincide with a token boundary.
std::vector<Label> token_labels(const AnnotatedSentence& sentence, std::span<const req::Token> tokens);

/// Maximal runs of equal non-OTHER labels become spans.
std::vector<EntitySpan> merge_spans(std::span<const req::Token> tokens, std::span<const Label> labels);

struct ClassifierModel {
  Backend backend = Backend::SVM;
  Hyperparams hyperparams;
  std::map<std::string, std::uint32_t> vocabulary;
  Parameters parameters;

  /// Maps known features to indices; unknown ones are dropped.
  SparseRow encode(const FeatureVector& features) const;

  friend bool operator==(const ClassifierModel&, const ClassifierModel&) = default;
};

/// Builds the token-level dataset and trains `backend`. `exec` only affects
/// the forest, whose trees are independent; the result is identical either way.
ClassifierModel train(Backend backend, std::span<const AnnotatedSentence> data, std::uint64_t seed,
                      const Hyperparams& hyperparams = {}, Execution exec = Execution::Parallel);

/// A token none of whose features are in the vocabulary is labelled OTHER.
Label predict_token(const ClassifierModel& model, const FeatureVector& features);
std::vector<Label> predict_labels(const ClassifierModel& model, std::span<const req::Token> tokens);
std::vector<EntitySpan> predict_spans(const ClassifierModel& model, std::string_view sentence);

/// Labels many sentences; the OpenMP path must match the serial reference.
std::vector<std::vector<Label>> predict_labels_batch(const ClassifierModel& model,
                                                     std::span<const std::string> sentences,
                                                     Execution exec = Execution::Parallel);

/// k-th SIGNAL span pairs with the k-th VALUE span.
/// Throws NoEntities, SpanCountMismatch, NoValueFound, MixedConjunction, DuplicateSignal.
rules::SignalBinding extract_binding_ner(const req::ConditionActionPair& pair, const ClassifierModel& model);

// Annotation JSON-lines: {"text": ..., "entities": [{"start", "end", "label"}]}
std::string to_jsonl(std::span<const AnnotatedSentence> sentences);
/// Throws FormatError naming the 1-based line.
std::vector<AnnotatedSentence> parse_jsonl(std::string_view content);

/// Versioned text dump; doubles are written as hex floats so the dump is
/// exact and byte-stable.
std::string serialize_model(const ClassifierModel& model);
ClassifierModel parse_model(std::string_view content);

}  // namespace req2tc::ner
