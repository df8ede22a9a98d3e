#include "req2tc/features.hpp"

#include <cctype>

#include "req2tc/doc_model.hpp"
#include "req2tc/text.hpp"

namespace req2tc::ner {

std::string word_shape(std::string_view word) {
  std::string shape;
  for (char c : word) {
    const auto u = static_cast<unsigned char>(c);
    char cls = c;
    if (std::isupper(u)) {
      cls = 'X';
    } else if (std::islower(u)) {
      cls = 'x';
    } else if (std::isdigit(u)) {
      cls = 'd';
    }
    if (shape.empty() || shape.back() != cls) shape += cls;
  }
  return shape;
}

FeatureVector featurize_token(std::span<const req::Token> tokens, std::size_t i) {
  const auto& tok = tokens[i];
  const std::string word = text::lower(tok.text);
  FeatureVector f;
  auto flag = [&f](std::string key) { f[std::move(key)] = 1.0; };

  flag("w=" + word);
  flag("shape=" + word_shape(tok.text));
  if (doc::looks_like_hex(tok.text)) flag("is_hex");
  if (tok.text.find('.') != std::string::npos) flag("has_dot");
  for (char c : tok.text) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      flag("has_digit");
      break;
    }
  }
  flag("pre3=" + word.substr(0, 3));
  flag("suf3=" + word.substr(word.size() > 3 ? word.size() - 3 : 0));
  flag("pos=" + std::string(req::to_string(tok.tag)));

  if (i == 0) {
    flag("prev_w=" + std::string(kSentenceStart));
    flag("prev_shape=" + std::string(kSentenceStart));
  } else {
    flag("prev_w=" + text::lower(tokens[i - 1].text));
    flag("prev_shape=" + word_shape(tokens[i - 1].text));
  }
  if (i + 1 == tokens.size()) {
    flag("next_w=" + std::string(kSentenceEnd));
    flag("next_shape=" + std::string(kSentenceEnd));
  } else {
    flag("next_w=" + text::lower(tokens[i + 1].text));
    flag("next_shape=" + word_shape(tokens[i + 1].text));
  }

  if (i == 0) {
    flag("position=first");
  } else if (i + 1 == tokens.size()) {
    flag("position=last");
  } else {
    flag("position=middle");
  }
  return f;
}

}  // namespace req2tc::ner
