#include <algorithm>
#include <cmath>
#include <exception>
#include <map>

#include "req2tc/error.hpp"
#include "req2tc/eval.hpp"
#include "req2tc/rng.hpp"

namespace req2tc::eval {

std::pair<int, int> stratum_key(const ner::AnnotatedSentence& sentence) {
  const auto tokens = req::tokenize(sentence.text);
  int signals = 0, values = 0;
  for (auto l : ner::token_labels(sentence, tokens)) {
    signals += l == ner::Label::SIGNAL;
    values += l == ner::Label::VALUE;
  }
  return {std::min(signals, 2), std::min(values, 2)};
}

std::vector<Fold> stratified_kfold(std::span<const ner::AnnotatedSentence> data, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be at least 2");
  if (data.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::TooFewItems, std::to_string(data.size()) + " items for " + std::to_string(k) + " folds");
  }
  std::map<std::pair<int, int>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < data.size(); ++i) strata[stratum_key(data[i])].push_back(i);

  const auto folds = static_cast<std::size_t>(k);
  std::vector<std::size_t> assignment(data.size());
  Rng rng(seed);
  std::size_t next = 0;
  for (auto& [key, members] : strata) {
    rng.shuffle(members);
    for (auto i : members) {
      assignment[i] = next;
      next = (next + 1) % folds;
    }
  }

  std::vector<Fold> out(folds);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t f = 0; f < folds; ++f) (assignment[i] == f ? out[f].test : out[f].train).push_back(i);
  }
  return out;
}

Summary summarize(std::span<const double> values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

CvReport cross_validate(ner::Backend backend, std::span<const ner::AnnotatedSentence> data, int k,
                        std::uint64_t seed, const ner::Hyperparams& hyperparams, Execution exec) {
  const auto splits = stratified_kfold(data, k, seed);
  CvReport report;
  report.backend = backend;
  report.folds = k;
  report.seed = seed;
  report.per_fold.resize(splits.size());
  report.fold_confusions.resize(splits.size());

  auto run_fold = [&](std::size_t f) {
    std::vector<ner::AnnotatedSentence> train;
    for (auto i : splits[f].train) train.push_back(data[i]);
    // Folds already run concurrently; the forest stays serial inside.
    const auto model = ner::train(backend, train, derive_seed(seed, f), hyperparams, Execution::Serial);

    std::vector<ner::Label> gold, pred;
    for (auto i : splits[f].test) {
      const auto tokens = req::tokenize(data[i].text);
      const auto g = ner::token_labels(data[i], tokens);
      const auto p = ner::predict_labels(model, tokens);
      gold.insert(gold.end(), g.begin(), g.end());
      pred.insert(pred.end(), p.begin(), p.end());
    }
    report.fold_confusions[f] = confusion(gold, pred);
    report.per_fold[f] = metrics(report.fold_confusions[f]);
  };

  const auto n = static_cast<std::int64_t>(splits.size());
  if (exec == Execution::Parallel) {
    // Errors cannot cross the OpenMP region boundary; collect and rethrow.
    std::vector<std::exception_ptr> errors(splits.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t f = 0; f < n; ++f) {
      try {
        run_fold(static_cast<std::size_t>(f));
      } catch (...) {
        errors[static_cast<std::size_t>(f)] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::int64_t f = 0; f < n; ++f) run_fold(static_cast<std::size_t>(f));
  }

  report.pooled = report.fold_confusions.front();
  for (std::size_t f = 1; f < report.fold_confusions.size(); ++f) {
    for (std::size_t i = 0; i < report.pooled.counts.size(); ++i) {
      for (std::size_t j = 0; j < report.pooled.counts.size(); ++j) {
        report.pooled.counts[i][j] += report.fold_confusions[f].counts[i][j];
      }
    }
  }
  std::vector<double> acc, prec, rec, f1;
  for (const auto& m : report.per_fold) {
    acc.push_back(m.accuracy);
    prec.push_back(m.precision);
    rec.push_back(m.recall);
    f1.push_back(m.f1);
  }
  report.accuracy = summarize(acc);
  report.precision = summarize(prec);
  report.recall = summarize(rec);
  report.f1 = summarize(f1);
  return report;
}

}  // namespace req2tc::eval
