#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "req2tc/req_parser.hpp"

namespace req2tc::ner {

/// Sparse feature map. std::map keeps identifiers sorted, which makes
/// vocabulary construction and model dumps deterministic.
using FeatureVector = std::map<std::string, double>;

inline constexpr std::string_view kSentenceStart = "<s>";
inline constexpr std::string_view kSentenceEnd = "</s>";

/// X for capitals, x for lowercase, d for digits, other characters kept
/// verbatim; runs of the same class collapse ("0X1" -> "dXd").
std::string word_shape(std::string_view word);

FeatureVector featurize_token(std::span<const req::Token> tokens, std::size_t i);

struct SparseEntry {
  std::uint32_t index;
  double value;
};
using SparseRow = std::vector<SparseEntry>;  // sorted by index

}  // namespace req2tc::ner
