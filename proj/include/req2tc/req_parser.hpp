#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace req2tc::req {

enum class Tag { NOUN, VERB, ADJ, NUM, HEX, IDENT, PUNCT, OTHER };

std::string_view to_string(Tag tag) noexcept;

/// A token with byte offsets into its sentence: sentence[start, end) == text.
struct Token {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
  Tag tag = Tag::OTHER;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Splits on whitespace and punctuation. Dotted identifiers
/// ("T.DYN2.VehicleSpeedCheck") and hex literals stay whole; a '.' is only
/// kept inside a word when it sits between two word characters. Returned
/// tokens are already tagged.
std::vector<Token> tokenize(std::string_view sentence);

/// Closed-class lexicon first, then shape rules. Idempotent.
std::vector<Token> pos_tag(std::vector<Token> tokens);
Tag tag_for(std::string_view word) noexcept;

struct ConditionActionPair {
  std::string condition;
  std::string action;
  std::size_t source_index = 0;

  friend bool operator==(const ConditionActionPair&, const ConditionActionPair&) = default;
};

/// "If <condition>[,] then <action>[.]" -> (condition, action).
/// The first "then" after the leading "if" is the split point.
/// Throws MalformedRequirement.
ConditionActionPair split_condition_action(std::string_view sentence, std::size_t source_index);

}  // namespace req2tc::req
