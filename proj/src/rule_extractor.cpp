#include "req2tc/rule_extractor.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "req2tc/error.hpp"
#include "req2tc/text.hpp"

namespace req2tc::rules {
namespace {

using req::Tag;
using req::Token;

bool word_is(const Token& t, std::string_view w) { return t.tag != Tag::PUNCT && text::iequals(t.text, w); }

bool is_article(const Token& t) { return word_is(t, "a") || word_is(t, "an") || word_is(t, "the"); }

std::string clause_text(std::span<const Token> clause) {
  std::string out;
  for (const auto& t : clause) {
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

// Cursor over a clause that tolerates articles in the optional slots.
struct Cursor {
  std::span<const Token> toks;
  std::size_t pos = 0;

  bool done() const { return pos >= toks.size(); }
  const Token& peek() const { return toks[pos]; }
  void skip_articles() {
    while (!done() && is_article(peek())) ++pos;
  }
  bool accept(std::string_view w) {
    if (!done() && word_is(peek(), w)) {
      ++pos;
      return true;
    }
    return false;
  }
  bool only_punct_left() const {
    for (std::size_t k = pos; k < toks.size(); ++k) {
      if (toks[k].tag != Tag::PUNCT) return false;
    }
    return true;
  }
};

std::optional<doc::HexValue> match_tail(Cursor& c, Pattern& pattern) {
  const std::size_t save = c.pos;
  auto hex_at_end = [&]() -> std::optional<doc::HexValue> {
    if (c.done() || c.peek().tag != Tag::HEX) return std::nullopt;
    const auto value = doc::parse_hex_value(c.peek().text);
    ++c.pos;
    if (!c.only_punct_left()) return std::nullopt;
    return value;
  };

  if (c.accept("has")) {
    c.skip_articles();
    if (c.accept("value")) {
      c.accept("of");
      if (auto v = hex_at_end()) return v;
    }
  }
  c.pos = save;
  if (c.accept("is") && c.accept("set") && c.accept("to")) {
    if (auto v = hex_at_end()) {
      pattern = Pattern::IsSetTo;
      return v;
    }
  }
  c.pos = save;
  if (c.accept("equals")) {
    if (auto v = hex_at_end()) {
      pattern = Pattern::Equals;
      return v;
    }
  }
  c.pos = save;
  return std::nullopt;
}

[[noreturn]] void classify_failure(std::span<const Token> clause) {
  bool has_hex = false;
  bool has_name = false;
  bool has_cue = false;
  for (const auto& t : clause) {
    has_hex = has_hex || t.tag == Tag::HEX;
    has_name = has_name || t.tag == Tag::IDENT || t.tag == Tag::NOUN;
    has_cue = has_cue || word_is(t, "has") || word_is(t, "value") || word_is(t, "set") ||
              word_is(t, "equals");
  }
  if (!has_hex && has_name && has_cue) {
    throw Error(ErrorCode::NoValueFound, "no hex value in '" + clause_text(clause) + "'");
  }
  throw Error(ErrorCode::NoSignalFound, "no rule matches '" + clause_text(clause) + "'");
}

}  // namespace

std::string_view to_string(Conjunction c) noexcept {
  switch (c) {
    case Conjunction::NONE: return "NONE";
    case Conjunction::AND: return "AND";
    case Conjunction::OR: return "OR";
  }
  return "NONE";
}

Conjunction conjunction_from_string(std::string_view s) {
  if (s == "NONE") return Conjunction::NONE;
  if (s == "AND") return Conjunction::AND;
  if (s == "OR") return Conjunction::OR;
  throw Error(ErrorCode::FormatError, "unknown conjunction '" + std::string(s) + "'");
}

const doc::HexValue* SignalBinding::find(std::string_view name) const {
  for (const auto& [n, v] : assignments) {
    if (n == name) return &v;
  }
  return nullptr;
}

ClauseMatch match_clause(std::span<const Token> clause) {
  Cursor c{clause};
  c.skip_articles();
  Pattern pattern = Pattern::HasValue;
  // "signal" is a cue word only when another name follows it.
  if (c.pos + 1 < clause.size() && word_is(c.peek(), "signal") &&
      (clause[c.pos + 1].tag == Tag::IDENT || clause[c.pos + 1].tag == Tag::NOUN)) {
    ++c.pos;
    pattern = Pattern::SignalHasValue;
  }
  if (c.done() || (c.peek().tag != Tag::IDENT && c.peek().tag != Tag::NOUN)) classify_failure(clause);
  std::string signal = c.peek().text;
  ++c.pos;

  if (auto value = match_tail(c, pattern)) return {std::move(signal), *value, pattern};
  classify_failure(clause);
}

SignalBinding extract_binding(const req::ConditionActionPair& pair,
                              const doc::FeatureElementDocument& document) {
  const auto tokens = req::tokenize(pair.condition);
  const std::span<const Token> all(tokens);

  bool saw_and = false;
  bool saw_or = false;
  std::vector<std::span<const Token>> clauses;
  std::size_t begin = 0;
  for (std::size_t i = 0; i <= tokens.size(); ++i) {
    const bool at_end = i == tokens.size();
    const bool is_and = !at_end && word_is(tokens[i], "and");
    const bool is_or = !at_end && word_is(tokens[i], "or");
    if (!(at_end || is_and || is_or)) continue;
    saw_and = saw_and || is_and;
    saw_or = saw_or || is_or;
    clauses.push_back(all.subspan(begin, i - begin));
    begin = i + 1;
  }
  if (saw_and && saw_or) {
    throw Error(ErrorCode::MixedConjunction, "both 'and' and 'or' in '" + pair.condition + "'");
  }

  SignalBinding binding;
  binding.expected_output = pair.action;
  for (const auto& clause : clauses) {
    if (clause.empty()) throw Error(ErrorCode::NoSignalFound, "empty clause in '" + pair.condition + "'");
    auto match = match_clause(clause);
    if (!document.can_inputs.empty() && !doc::resolve_signal(document, match.signal)) {
      throw Error(ErrorCode::UnknownSignal, "'" + match.signal + "' is not a declared CAN input");
    }
    if (binding.find(match.signal)) {
      throw Error(ErrorCode::DuplicateSignal, "'" + match.signal + "' assigned twice");
    }
    binding.assignments.emplace_back(std::move(match.signal), match.value);
  }
  if (binding.assignments.size() > 1) binding.conjunction = saw_and ? Conjunction::AND : Conjunction::OR;
  return binding;
}

std::vector<SignalBinding> complete_value_table(const std::vector<SignalBinding>& bindings,
                                                const doc::CanSignalSpec& spec) {
  if (bindings.empty()) {
    throw Error(ErrorCode::IncompleteBindings, "no stated values for signal " + spec.name);
  }
  std::map<std::uint64_t, std::string> stated;
  for (const auto& b : bindings) {
    if (b.conjunction != Conjunction::NONE || b.assignments.size() != 1) {
      throw Error(ErrorCode::InvalidArgument, "complete_value_table expects single-signal bindings");
    }
    const auto& value = b.assignments.front().second;
    const bool in_table = std::find(spec.value_table.begin(), spec.value_table.end(), value) !=
                          spec.value_table.end();
    if (!in_table) {
      throw Error(ErrorCode::RangeViolation,
                  "value " + value.canonical() + " is not in the value table of " + spec.name);
    }
    auto [it, inserted] = stated.emplace(value.numeric(), b.expected_output);
    if (!inserted && it->second != b.expected_output) {
      throw Error(ErrorCode::ConflictingBindings, spec.name + "=" + value.canonical() + " maps to both '" +
                                                      it->second + "' and '" + b.expected_output + "'");
    }
  }

  // Majority output; a tie goes to the output of the lowest stated value
  // (std::map iterates values in ascending order).
  std::map<std::string, std::size_t> frequency;
  for (const auto& [value, output] : stated) ++frequency[output];
  std::string fallback;
  std::size_t best = 0;
  for (const auto& [value, output] : stated) {
    if (frequency[output] > best) {
      best = frequency[output];
      fallback = output;
    }
  }

  const std::string& name = bindings.front().assignments.front().first;
  std::vector<SignalBinding> out;
  out.reserve(spec.value_table.size());
  for (const auto& value : spec.value_table) {
    const auto it = stated.find(value.numeric());
    out.push_back({{{name, value}}, it != stated.end() ? it->second : fallback, Conjunction::NONE});
  }
  return out;
}

}  // namespace req2tc::rules
