#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "req2tc/doc_model.hpp"
#include "req2tc/req_parser.hpp"

namespace req2tc::rules {

enum class Conjunction { NONE, AND, OR };

std::string_view to_string(Conjunction c) noexcept;
Conjunction conjunction_from_string(std::string_view s);

/// Signal name -> value assignments of one condition, in sentence order,
/// plus the action the condition leads to.
struct SignalBinding {
  std::vector<std::pair<std::string, doc::HexValue>> assignments;
  std::string expected_output;
  Conjunction conjunction = Conjunction::NONE;

  const doc::HexValue* find(std::string_view name) const;

  friend bool operator==(const SignalBinding&, const SignalBinding&) = default;
};

/// Which rule a clause matched; exposed for diagnostics and tests.
enum class Pattern { SignalHasValue, HasValue, IsSetTo, Equals };

struct ClauseMatch {
  std::string signal;
  doc::HexValue value;
  Pattern pattern = Pattern::HasValue;
};

/// Matches one conjunction-free clause against the rule set:
///   (a) [article] signal <ID> has [article] value [of] <HEX>
///   (b) [article] <ID> has [article] value [of] <HEX>
///   (c) [article] <ID> is set to <HEX>
///   (d) [article] <ID> equals <HEX>
/// Throws NoSignalFound or NoValueFound.
ClauseMatch match_clause(std::span<const req::Token> clause);

/// Splits the condition on top-level "and"/"or", matches every clause and
/// validates names against the document's CAN inputs when it declares any.
SignalBinding extract_binding(const req::ConditionActionPair& pair,
                              const doc::FeatureElementDocument& document);

/// Expands single-signal bindings of one signal to one binding per value
/// table entry, in table order. Unstated values take the most frequent
/// stated output (ties: the output of the lowest stated value).
/// Throws ConflictingBindings.
std::vector<SignalBinding> complete_value_table(const std::vector<SignalBinding>& bindings,
                                                const doc::CanSignalSpec& spec);

}  // namespace req2tc::rules
