#include <doctest.h>

#include <filesystem>
#include <regex>
#include <set>

#include "req2tc/corpus.hpp"
#include "req2tc/error.hpp"
#include "req2tc/eval.hpp"
#include "req2tc/pipeline.hpp"

using namespace req2tc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("req2tc_corpus_" + name);
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> files_under(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), dir).string()] = corpus::read_file(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("configuration checks") {
  corpus::CorpusConfig c;
  c.validate();
  auto bad = c;
  bad.n_documents = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = c;
  bad.category_mix = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = c;
  bad.category_mix = {1.2, -0.2, 0.0};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = c;
  bad.noise_level = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = c;
  bad.sentences_target = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("single noise-free document is ground truth for the rule path") {
  corpus::CorpusConfig config;
  config.n_documents = 1;
  config.category_mix = {1.0, 0.0, 0.0};
  config.noise_level = 0.0;
  config.seed = 7;
  const auto c = corpus::generate_corpus(config);
  REQUIRE(c.documents.size() == 1);
  CHECK(c.gold[0].category == 1);
  const auto result = pipeline::run_rule(c.documents[0]);
  CHECK(pipeline::bindings_of(result) == c.gold[0].bindings);
  CHECK(result.suites == c.gold[0].suites);
}

TEST_CASE("generated documents follow the grammar") {
  corpus::CorpusConfig config;
  config.n_documents = 30;
  config.noise_level = 0.0;
  const auto c = corpus::generate_corpus(config);
  const std::regex name(R"(T\.[A-Z]+\d\.([A-Z][a-z]+)+)");
  const std::regex label(R"([A-Z]{3}\d{3} - [A-Z][a-z]+( [A-Z][a-z]+)*)");
  const std::regex canonical(R"((the signal \S+ has a value of|\S+ has value) 0[xX][0-9a-f]+)");
  const std::set<std::string> states = {"Active", "Not Active", "Inactive", "On", "Off"};
  std::set<int> categories;
  for (std::size_t i = 0; i < c.documents.size(); ++i) {
    const auto& d = c.documents[i];
    const auto& g = c.gold[i];
    categories.insert(g.category);
    CHECK(g.bindings.size() == d.requirement_sentences.size());
    CHECK(g.conditions.size() == d.requirement_sentences.size());
    for (const auto& s : d.can_inputs) {
      CHECK(s.value_table.size() >= 2);
      CHECK(s.value_table.size() <= 4);
      CHECK(s.range_min == 0);
      CHECK(s.range_max + 1 == s.value_table.size());
      for (std::size_t v = 0; v < s.value_table.size(); ++v) CHECK(s.value_table[v].numeric() == v);
    }
    for (std::size_t s = 0; s < g.bindings.size(); ++s) {
      for (const auto& [n, v] : g.bindings[s].assignments) CHECK(std::regex_match(n, name));
      const auto& out = g.bindings[s].expected_output;
      const auto is = out.rfind(" is ");
      CHECK(std::regex_match(out.substr(0, is), label));
      CHECK(states.count(out.substr(is + 4)));
      // Noise-free conditions are built only from the canonical clause forms.
      const auto& cond = g.conditions[s].text;
      std::size_t from = 0;
      while (from < cond.size()) {
        auto to = cond.find(" and ", from);
        if (to == std::string::npos) to = cond.size();
        CHECK_MESSAGE(std::regex_match(cond.substr(from, to - from), canonical), cond);
        from = to + 5;
      }
      ner::validate(g.conditions[s]);
      const auto tokens = req::tokenize(cond);
      ner::token_labels(g.conditions[s], tokens);  // aligned spans
    }
  }
  CHECK(categories == std::set<int>{1, 2, 3});
}

TEST_CASE("category mix is apportioned and labels match the categorizer") {
  corpus::CorpusConfig config;
  const auto c = corpus::generate_corpus(config);
  std::array<int, 4> counts{};
  for (std::size_t i = 0; i < c.documents.size(); ++i) {
    ++counts[static_cast<std::size_t>(c.gold[i].category)];
    CHECK(eval::categorize_document(c.documents[i]) == c.gold[i].category);
  }
  CHECK(counts[1] == 36);
  CHECK(counts[2] == 18);
  CHECK(counts[3] == 6);
  CHECK(c.annotations.size() == 200);
}

TEST_CASE("generation is deterministic and seed-sensitive") {
  corpus::CorpusConfig config;
  config.n_documents = 12;
  const auto a = corpus::generate_corpus(config);
  CHECK(corpus::generate_corpus(config) == a);
  config.seed = 43;
  CHECK_FALSE(corpus::generate_corpus(config) == a);
}

TEST_CASE("save and load") {
  corpus::CorpusConfig config;
  const auto c = corpus::generate_corpus(config);
  const auto dir = scratch("roundtrip");
  corpus::save_corpus(c, dir);
  CHECK(corpus::load_corpus(dir) == c);

  const auto again = scratch("roundtrip2");
  corpus::save_corpus(c, again);
  CHECK(files_under(dir) == files_under(again));

  const auto empty_dir = scratch("empty");
  corpus::save_corpus(corpus::Corpus{}, empty_dir);
  CHECK(corpus::read_file(empty_dir / "annotations.jsonl").empty());
  CHECK(corpus::read_file(empty_dir / "gold_bindings.jsonl").empty());
  CHECK(corpus::load_corpus(empty_dir) == corpus::Corpus{});

  auto gold = corpus::read_file(dir / "gold_bindings.jsonl");
  gold = gold.substr(0, gold.find('\n') + 1) + gold.substr(gold.find('\n') + 1, 30) + "\n";
  corpus::write_file(dir / "gold_bindings.jsonl", gold);
  try {
    corpus::load_corpus(dir);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FormatError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(corpus::load_corpus(scratch("missing")), Error);
  for (const auto& p : {dir, again, empty_dir}) fs::remove_all(p);
}
