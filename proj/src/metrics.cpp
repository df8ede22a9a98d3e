#include "req2tc/eval.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <tuple>

#include "req2tc/error.hpp"
#include "req2tc/req_parser.hpp"
#include "req2tc/rule_extractor.hpp"

namespace req2tc::eval {

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

ConfusionMatrix confusion(std::span<const std::size_t> gold, std::span<const std::size_t> pred,
                          std::vector<std::string> labels) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(gold.size()) + " gold vs " +
                                               std::to_string(pred.size()) + " predicted labels");
  }
  if (gold.empty()) throw Error(ErrorCode::EmptyMatrix, "no labels to compare");
  ConfusionMatrix cm;
  const std::size_t k = labels.size();
  cm.labels = std::move(labels);
  cm.counts.assign(k, std::vector<std::uint64_t>(k, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] >= k || pred[i] >= k) throw Error(ErrorCode::InvalidArgument, "label index out of range");
    ++cm.counts[gold[i]][pred[i]];
  }
  return cm;
}

ConfusionMatrix confusion(std::span<const ner::Label> gold, std::span<const ner::Label> pred) {
  std::vector<std::size_t> g(gold.size()), p(pred.size());
  std::transform(gold.begin(), gold.end(), g.begin(), [](ner::Label l) { return static_cast<std::size_t>(l); });
  std::transform(pred.begin(), pred.end(), p.begin(), [](ner::Label l) { return static_cast<std::size_t>(l); });
  std::vector<std::string> names;
  for (auto l : ner::kLabels) names.emplace_back(ner::to_string(l));
  return confusion(g, p, std::move(names));
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw Error(ErrorCode::EmptyMatrix, "confusion matrix is empty");
  const std::size_t k = cm.labels.size();
  const double n = static_cast<double>(total);

  MetricsReport r;
  std::uint64_t trace = 0;
  for (std::size_t i = 0; i < k; ++i) trace += cm.counts[i][i];
  r.accuracy = static_cast<double>(trace) / n;

  for (std::size_t l = 0; l < k; ++l) {
    std::uint64_t row = 0, col = 0;
    for (std::size_t j = 0; j < k; ++j) {
      row += cm.counts[l][j];
      col += cm.counts[j][l];
    }
    const auto tp = static_cast<double>(cm.counts[l][l]);
    LabelMetrics m;
    m.support = row;
    m.precision = col ? tp / static_cast<double>(col) : 0.0;
    m.recall = row ? tp / static_cast<double>(row) : 0.0;
    m.f1 = (m.precision + m.recall) > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    r.precision += static_cast<double>(row) * m.precision;
    r.f1 += static_cast<double>(row) * m.f1;
    r.per_label[cm.labels[l]] = m;
  }
  r.precision /= n;
  r.f1 /= n;
  // sum_l support_l * (tp_l / support_l) / total collapses to trace / total;
  // evaluating it in integers keeps the identity exact.
  r.recall = r.accuracy;
  return r;
}

double majority_baseline(std::span<const ner::AnnotatedSentence> data) {
  std::array<std::uint64_t, ner::kLabelCount> freq{};
  std::uint64_t total = 0;
  for (const auto& s : data) {
    const auto tokens = req::tokenize(s.text);
    for (auto l : ner::token_labels(s, tokens)) {
      ++freq[static_cast<std::size_t>(l)];
      ++total;
    }
  }
  if (total == 0) throw Error(ErrorCode::EmptyDataset, "no tokens");
  return static_cast<double>(*std::max_element(freq.begin(), freq.end())) / static_cast<double>(total);
}

std::size_t category_for_signal_count(std::size_t distinct_signals) {
  if (distinct_signals == 0) throw Error(ErrorCode::NoSignals, "zero signals");
  if (distinct_signals == 1) return 1;
  if (distinct_signals <= 4) return 2;
  return 3;
}

int categorize_document(const doc::FeatureElementDocument& document) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < document.requirement_sentences.size(); ++i) {
    const auto& sentence = document.requirement_sentences[i];
    std::optional<req::ConditionActionPair> pair;
    try {
      pair = req::split_condition_action(sentence, i);
    } catch (const Error&) {
    }
    if (document.can_inputs.empty()) {
      if (!pair) continue;
      try {
        for (const auto& [name, value] : rules::extract_binding(*pair, document).assignments) names.insert(name);
      } catch (const Error&) {
      }
      continue;
    }
    // With a signal table, any condition token naming a declared input
    // counts, whatever the phrasing around it.
    for (const auto& tok : req::tokenize(pair ? std::string_view(pair->condition) : std::string_view(sentence))) {
      if (tok.tag != req::Tag::IDENT && tok.tag != req::Tag::NOUN) continue;
      try {
        if (auto spec = doc::resolve_signal(document, tok.text)) names.insert(spec->name);
      } catch (const Error&) {
      }
    }
  }
  if (names.empty()) throw Error(ErrorCode::NoSignals, "document " + document.id + " mentions no signal");
  return static_cast<int>(category_for_signal_count(names.size()));
}

double suite_accuracy(const tc::TestSuite& generated, const tc::TestSuite& gold) {
  if (gold.rows.empty()) return 1.0;
  std::multiset<std::tuple<int, std::string, std::string, std::string>> pool;
  for (const auto& r : generated.rows) pool.emplace(r.test_case_id, r.precondition, r.step, r.expected_output);
  std::size_t hits = 0;
  for (const auto& r : gold.rows) {
    const auto it = pool.find({r.test_case_id, r.precondition, r.step, r.expected_output});
    if (it != pool.end()) {
      pool.erase(it);
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(gold.rows.size());
}

double document_accuracy(std::span<const tc::TestSuite> generated, std::span<const tc::TestSuite> gold) {
  if (gold.empty()) return generated.empty() ? 1.0 : 0.0;
  double sum = 0.0;
  for (const auto& g : gold) {
    const auto it = std::find_if(generated.begin(), generated.end(),
                                 [&](const tc::TestSuite& s) { return s.signal_column == g.signal_column; });
    if (it != generated.end()) sum += suite_accuracy(*it, g);
  }
  return sum / static_cast<double>(gold.size());
}

}  // namespace req2tc::eval
