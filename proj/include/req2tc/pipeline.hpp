#pragma once

#include <optional>
#include <string>
#include <vector>

#include "req2tc/doc_model.hpp"
#include "req2tc/error.hpp"
#include "req2tc/ner.hpp"
#include "req2tc/req_parser.hpp"
#include "req2tc/rule_extractor.hpp"
#include "req2tc/tc_gen.hpp"

namespace req2tc::pipeline {

enum class Method { RULE, NER };

/// What happened to one requirement sentence in stages 1 and 2.
struct SentenceOutcome {
  std::size_t index = 0;
  std::optional<req::ConditionActionPair> pair;
  std::optional<rules::SignalBinding> binding;
  std::optional<ErrorCode> error;
  std::string message;
};

/// A signal for which no (or only a partial) suite could be produced.
struct SuiteIssue {
  std::string signal;
  ErrorCode code = ErrorCode::InvalidArgument;
  std::string message;
};

struct DocumentResult {
  std::string document_id;
  std::vector<SentenceOutcome> sentences;
  std::vector<tc::TestSuite> suites;
  std::vector<SuiteIssue> issues;
};

/// Stage 3. One suite per CAN input referenced by the bindings, in table
/// order. A multi-signal AND binding feeds the suite of signal S when S
/// sits off its first table value and every other signal sits on its first
/// value; those other signals are held at their first value and listed in
/// the precondition.
std::vector<tc::TestSuite> generate_suites(const doc::FeatureElementDocument& document,
                                           const std::vector<rules::SignalBinding>& bindings,
                                           std::vector<SuiteIssue>* issues = nullptr);

DocumentResult run_rule(const doc::FeatureElementDocument& document);
DocumentResult run_ner(const doc::FeatureElementDocument& document, const ner::ClassifierModel& model);

std::vector<rules::SignalBinding> bindings_of(const DocumentResult& result);

}  // namespace req2tc::pipeline
