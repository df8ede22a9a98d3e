#include "req2tc/req_parser.hpp"

#include <array>
#include <cctype>

#include "req2tc/doc_model.hpp"
#include "req2tc/error.hpp"
#include "req2tc/text.hpp"

namespace req2tc::req {
namespace {

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || c == '_' || u >= 0x80;
}

struct LexiconEntry {
  std::string_view word;
  Tag tag;
};

constexpr std::array<LexiconEntry, 24> kLexicon = {{
    {"is", Tag::VERB},     {"has", Tag::VERB},      {"set", Tag::VERB},      {"send", Tag::VERB},
    {"equals", Tag::VERB}, {"are", Tag::VERB},      {"have", Tag::VERB},     {"shall", Tag::VERB},
    {"takes", Tag::VERB},  {"reads", Tag::VERB},    {"the", Tag::OTHER},     {"a", Tag::OTHER},
    {"an", Tag::OTHER},    {"of", Tag::OTHER},      {"then", Tag::OTHER},    {"if", Tag::OTHER},
    {"and", Tag::OTHER},   {"or", Tag::OTHER},      {"to", Tag::OTHER},      {"with", Tag::OTHER},
    {"active", Tag::ADJ},  {"inactive", Tag::ADJ},  {"enabled", Tag::ADJ},   {"disabled", Tag::ADJ},
}};

bool has_interior_capital(std::string_view w) {
  bool lower_seen = false;
  bool interior_upper = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto u = static_cast<unsigned char>(w[i]);
    if (std::islower(u)) lower_seen = true;
    if (i > 0 && std::isupper(u)) interior_upper = true;
  }
  return lower_seen && interior_upper;
}

// Index just past the keyword token if `tokens[i]` is the (case-insensitive) word.
bool is_keyword(const Token& t, std::string_view word) {
  return t.tag != Tag::PUNCT && text::iequals(t.text, word);
}

std::string_view strip_edges(std::string_view s, std::string_view junk) {
  while (!s.empty() && (text::is_space(s.front()) || junk.find(s.front()) != std::string_view::npos)) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (text::is_space(s.back()) || junk.find(s.back()) != std::string_view::npos)) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

std::string_view to_string(Tag tag) noexcept {
  switch (tag) {
    case Tag::NOUN: return "NOUN";
    case Tag::VERB: return "VERB";
    case Tag::ADJ: return "ADJ";
    case Tag::NUM: return "NUM";
    case Tag::HEX: return "HEX";
    case Tag::IDENT: return "IDENT";
    case Tag::PUNCT: return "PUNCT";
    case Tag::OTHER: return "OTHER";
  }
  return "OTHER";
}

Tag tag_for(std::string_view word) noexcept {
  if (word.empty()) return Tag::OTHER;
  if (!is_word_char(word.front())) return Tag::PUNCT;
  if (doc::looks_like_hex(word)) return Tag::HEX;
  bool all_digits = true;
  for (char c : word) all_digits = all_digits && std::isdigit(static_cast<unsigned char>(c));
  if (all_digits) return Tag::NUM;
  for (const auto& entry : kLexicon) {
    if (text::iequals(word, entry.word)) return entry.tag;
  }
  if (word.find('.') != std::string_view::npos || has_interior_capital(word)) return Tag::IDENT;
  return Tag::NOUN;
}

std::vector<Token> pos_tag(std::vector<Token> tokens) {
  for (auto& t : tokens) t.tag = tag_for(t.text);
  return tokens;
}

std::vector<Token> tokenize(std::string_view sentence) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = sentence.size();
  while (i < n) {
    if (text::is_space(sentence[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_word_char(sentence[i])) {
      while (i < n) {
        if (is_word_char(sentence[i])) {
          ++i;
        } else if (sentence[i] == '.' && i + 1 < n && is_word_char(sentence[i + 1])) {
          ++i;
        } else {
          break;
        }
      }
    } else {
      ++i;
    }
    tokens.push_back({std::string(sentence.substr(start, i - start)), start, i, Tag::OTHER});
  }
  return pos_tag(std::move(tokens));
}

ConditionActionPair split_condition_action(std::string_view sentence, std::size_t source_index) {
  const auto tokens = tokenize(sentence);
  auto fail = [&](std::string_view why) {
    return Error(ErrorCode::MalformedRequirement, std::string(why) + ": '" + std::string(sentence) + "'");
  };
  // Leading bullet punctuation ("- If ...") is tolerated.
  std::size_t first = 0;
  while (first < tokens.size() && tokens[first].tag == Tag::PUNCT) ++first;
  if (first == tokens.size() || !is_keyword(tokens[first], "if")) throw fail("no leading 'if'");

  std::size_t then_at = tokens.size();
  for (std::size_t k = first + 1; k < tokens.size(); ++k) {
    if (is_keyword(tokens[k], "then")) {
      then_at = k;
      break;
    }
  }
  if (then_at == tokens.size()) throw fail("no 'then'");

  const std::size_t cond_begin = tokens[first].end;
  const std::size_t cond_end = tokens[then_at].start;
  const auto condition = strip_edges(sentence.substr(cond_begin, cond_end - cond_begin), ",");
  auto action = text::trim(sentence.substr(tokens[then_at].end));
  while (!action.empty() && action.back() == '.') action = text::trim(action.substr(0, action.size() - 1));
  action = strip_edges(action, ",");

  if (condition.empty()) throw fail("empty condition");
  if (action.empty()) throw fail("empty action");
  return {std::string(condition), std::string(action), source_index};
}

}  // namespace req2tc::req
