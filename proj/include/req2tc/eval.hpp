#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "req2tc/classifiers.hpp"
#include "req2tc/doc_model.hpp"
#include "req2tc/ner.hpp"
#include "req2tc/parallel.hpp"
#include "req2tc/tc_gen.hpp"

namespace req2tc::eval {

/// Rows are gold labels, columns predictions.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint64_t>> counts;

  std::uint64_t total() const;
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Label lists hold indices into `labels`. Throws LengthMismatch, EmptyMatrix.
ConfusionMatrix confusion(std::span<const std::size_t> gold, std::span<const std::size_t> pred,
                          std::vector<std::string> labels);
ConfusionMatrix confusion(std::span<const ner::Label> gold, std::span<const ner::Label> pred);

struct LabelMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
  friend bool operator==(const LabelMetrics&, const LabelMetrics&) = default;
};

struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;  // support-weighted over labels
  double recall = 0.0;
  double f1 = 0.0;
  std::map<std::string, LabelMetrics> per_label;
  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Accuracy, then one-vs-rest precision/recall/F1 per label (0 for an empty
/// denominator) and their support-weighted averages. Throws EmptyMatrix.
MetricsReport metrics(const ConfusionMatrix& cm);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  friend bool operator==(const Fold&, const Fold&) = default;
};

/// (SIGNAL tokens capped at 2, VALUE tokens capped at 2).
std::pair<int, int> stratum_key(const ner::AnnotatedSentence& sentence);

/// Strata are visited in key order; inside each, a seeded shuffle is dealt
/// round-robin with the fold pointer carried across strata, so fold sizes
/// differ by at most one and every stratum is split within ±1 of k-way
/// proportional. Throws TooFewItems, InvalidArgument.
std::vector<Fold> stratified_kfold(std::span<const ner::AnnotatedSentence> data, int k, std::uint64_t seed);

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  friend bool operator==(const Summary&, const Summary&) = default;
};

struct CvReport {
  ner::Backend backend = ner::Backend::SVM;
  int folds = 0;
  std::uint64_t seed = 0;
  std::vector<MetricsReport> per_fold;
  std::vector<ConfusionMatrix> fold_confusions;
  ConfusionMatrix pooled;  // summed over folds
  Summary accuracy, precision, recall, f1;
  friend bool operator==(const CvReport&, const CvReport&) = default;
};

Summary summarize(std::span<const double> values);

/// Trains on each training split and scores tokens on the held-out split.
/// Fold i trains with derive_seed(seed, i). Folds run concurrently under
/// Execution::Parallel; results are merged by fold index.
CvReport cross_validate(ner::Backend backend, std::span<const ner::AnnotatedSentence> data, int k,
                        std::uint64_t seed, const ner::Hyperparams& hyperparams = {},
                        Execution exec = Execution::Parallel);

/// Share of tokens carrying the most frequent gold label.
double majority_baseline(std::span<const ner::AnnotatedSentence> data);

/// Distinct CAN inputs mentioned by the requirement conditions:
/// 1 -> 1, 2..4 -> 2, >4 -> 3. Throws NoSignals.
int categorize_document(const doc::FeatureElementDocument& document);
std::size_t category_for_signal_count(std::size_t distinct_signals);

/// Fraction of gold rows found in `generated` with all four fields equal,
/// matched as a multiset within each test case id.
double suite_accuracy(const tc::TestSuite& generated, const tc::TestSuite& gold);

/// Mean suite_accuracy over the gold suites; a gold suite with no
/// generated counterpart (same signal column) scores 0.
double document_accuracy(std::span<const tc::TestSuite> generated, std::span<const tc::TestSuite> gold);

}  // namespace req2tc::eval
