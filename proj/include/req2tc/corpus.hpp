#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "req2tc/doc_model.hpp"
#include "req2tc/ner.hpp"
#include "req2tc/rule_extractor.hpp"
#include "req2tc/tc_gen.hpp"

namespace req2tc::corpus {

struct CorpusConfig {
  std::size_t n_documents = 60;
  std::array<double, 3> category_mix{0.6, 0.3, 0.1};
  double noise_level = 0.3;
  std::uint64_t seed = 42;
  std::size_t sentences_target = 200;

  /// Throws InvalidConfig.
  void validate() const;
};

/// How a clause was phrased. Canonical phrasings are the two rule-set forms
/// the noise-free corpus uses; OutOfRuleset phrasings match no extraction rule.
enum class Phrasing { Canonical, IsSetTo, Equals, ArticleVariant, OutOfRuleset };

struct DocumentGold {
  int category = 1;
  /// Parallel to the document's requirement sentences.
  std::vector<rules::SignalBinding> bindings;
  /// Condition-text annotations, parallel to the requirement sentences.
  std::vector<ner::AnnotatedSentence> conditions;
  std::vector<tc::TestSuite> suites;

  friend bool operator==(const DocumentGold&, const DocumentGold&) = default;
};

struct Corpus {
  std::vector<doc::FeatureElementDocument> documents;
  std::vector<DocumentGold> gold;
  /// NER training set: up to sentences_target condition annotations.
  std::vector<ner::AnnotatedSentence> annotations;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Deterministic in `config` (single sequential random stream).
Corpus generate_corpus(const CorpusConfig& config);

/// Writes documents/<id>.txt, annotations.jsonl, gold_bindings.jsonl and
/// manifest.json under `dir`. Throws IoError.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

/// Gold suites are regenerated from the saved gold bindings.
/// Throws IoError, FormatError.
Corpus load_corpus(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace req2tc::corpus
