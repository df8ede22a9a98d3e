#include "req2tc/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "req2tc/error.hpp"
#include "req2tc/rng.hpp"
#include "req2tc/text.hpp"

namespace req2tc::ner {
namespace {

constexpr std::size_t idx(Label l) { return static_cast<std::size_t>(l); }

bool row_has(const SparseRow& row, std::uint32_t feature) {
  const auto it = std::lower_bound(row.begin(), row.end(), feature,
                                   [](const SparseEntry& e, std::uint32_t f) { return e.index < f; });
  return it != row.end() && it->index == feature;
}

double gini(const std::array<std::uint32_t, kLabelCount>& counts, double n) {
  if (n <= 0) return 0.0;
  double sum_sq = 0.0;
  for (auto c : counts) sum_sq += (c / n) * (c / n);
  return 1.0 - sum_sq;
}

Label majority(const std::array<std::uint32_t, kLabelCount>& counts) {
  std::array<double, kLabelCount> as_scores{};
  for (std::size_t k = 0; k < kLabelCount; ++k) as_scores[k] = counts[k];
  return argmax_label(as_scores);
}

Label predict_tree(const Tree& tree, const SparseRow& row) {
  std::int32_t at = 0;
  while (true) {
    const auto& node = tree.nodes[static_cast<std::size_t>(at)];
    if (node.feature < 0) return node.label;
    at = row_has(row, static_cast<std::uint32_t>(node.feature)) ? node.present : node.absent;
  }
}

}  // namespace

std::string_view to_string(Label label) noexcept {
  switch (label) {
    case Label::SIGNAL: return "SIGNAL";
    case Label::VALUE: return "VALUE";
    case Label::OTHER: return "OTHER";
  }
  return "OTHER";
}

Label label_from_string(std::string_view s) {
  if (s == "SIGNAL") return Label::SIGNAL;
  if (s == "VALUE") return Label::VALUE;
  if (s == "OTHER") return Label::OTHER;
  throw Error(ErrorCode::FormatError, "unknown label '" + std::string(s) + "'");
}

std::string_view to_string(Backend backend) noexcept {
  switch (backend) {
    case Backend::SVM: return "SVM";
    case Backend::RANDOM_FOREST: return "RANDOM_FOREST";
    case Backend::DECISION_TREE: return "DECISION_TREE";
    case Backend::GRADIENT_BOOSTING: return "GRADIENT_BOOSTING";
  }
  return "SVM";
}

std::string_view display_name(Backend backend) noexcept {
  switch (backend) {
    case Backend::SVM: return "SVM";
    case Backend::RANDOM_FOREST: return "Random Forest";
    case Backend::DECISION_TREE: return "Decision Tree Classifier";
    case Backend::GRADIENT_BOOSTING: return "Gradient Boosting Classifier";
  }
  return "SVM";
}

Backend backend_from_string(std::string_view s) {
  const auto l = text::lower(s);
  if (l == "svm") return Backend::SVM;
  if (l == "rf" || l == "random_forest") return Backend::RANDOM_FOREST;
  if (l == "dt" || l == "decision_tree") return Backend::DECISION_TREE;
  if (l == "gb" || l == "gradient_boosting") return Backend::GRADIENT_BOOSTING;
  throw Error(ErrorCode::InvalidArgument, "unknown backend '" + std::string(s) + "'");
}

Label argmax_label(const std::array<double, kLabelCount>& scores) noexcept {
  std::size_t best = 0;
  for (std::size_t k = 1; k < kLabelCount; ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return static_cast<Label>(best);
}

// Pegasos-style subgradient descent on the L2-regularized hinge loss,
// one binary problem per label. w is stored as scale * v so the shrink step
// is O(1).
LinearOvr train_svm(const Dataset& data, std::uint64_t seed, const Hyperparams& hp) {
  const std::size_t n = data.rows.size();
  const std::size_t bias = data.dim;
  const double lambda = hp.svm_lambda;

  std::array<std::vector<double>, kLabelCount> v;
  std::array<double, kLabelCount> scale{};
  for (std::size_t c = 0; c < kLabelCount; ++c) {
    v[c].assign(data.dim + 1, 0.0);
    scale[c] = 1.0;
  }

  Rng rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  std::uint64_t t = 0;
  for (int epoch = 0; epoch < hp.svm_epochs; ++epoch) {
    rng.shuffle(order);
    for (const std::size_t i : order) {
      ++t;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double shrink = 1.0 - 1.0 / static_cast<double>(t);
      const auto& row = data.rows[i];
      for (std::size_t c = 0; c < kLabelCount; ++c) {
        auto& w = v[c];
        const double y = idx(data.labels[i]) == c ? 1.0 : -1.0;
        double dot = w[bias];
        for (const auto& e : row) dot += w[e.index] * e.value;
        const double margin = y * scale[c] * dot;

        scale[c] *= shrink;
        if (scale[c] == 0.0) {
          std::fill(w.begin(), w.end(), 0.0);
          scale[c] = 1.0;
        }
        if (margin < 1.0) {
          const double step = eta * y / scale[c];
          for (const auto& e : row) w[e.index] += step * e.value;
          w[bias] += step;
        }
        if (scale[c] < 1e-9) {
          for (auto& x : w) x *= scale[c];
          scale[c] = 1.0;
        }
      }
    }
  }

  LinearOvr model;
  for (std::size_t c = 0; c < kLabelCount; ++c) {
    model.weights[c] = std::move(v[c]);
    for (auto& x : model.weights[c]) x *= scale[c];
  }
  return model;
}

Tree train_tree(const Dataset& data, const std::vector<std::uint32_t>& sample,
                std::optional<int> max_depth, std::size_t features_per_split, std::uint64_t seed) {
  Rng rng(seed);
  Tree tree;
  struct Work {
    std::size_t node;
    std::vector<std::uint32_t> rows;
    int depth;
  };
  std::vector<Work> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, sample, 0});

  std::vector<std::array<std::uint32_t, kLabelCount>> counts(data.dim);
  std::vector<std::uint32_t> touched;

  while (!stack.empty()) {
    Work work = std::move(stack.back());
    stack.pop_back();

    std::array<std::uint32_t, kLabelCount> total{};
    for (auto r : work.rows) ++total[idx(data.labels[r])];
    const double n = static_cast<double>(work.rows.size());
    tree.nodes[work.node].label = majority(total);

    const bool pure = std::count_if(total.begin(), total.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || (max_depth && work.depth >= *max_depth)) continue;

    touched.clear();
    for (auto r : work.rows) {
      for (const auto& e : data.rows[r]) {
        auto& c = counts[e.index];
        if (c[0] == 0 && c[1] == 0 && c[2] == 0) touched.push_back(e.index);
        ++c[idx(data.labels[r])];
      }
    }
    std::vector<std::uint32_t> candidates;
    for (auto f : touched) {
      const auto& c = counts[f];
      const std::uint32_t present = c[0] + c[1] + c[2];
      if (present < work.rows.size()) candidates.push_back(f);
    }
    if (features_per_split > 0 && candidates.size() > features_per_split) {
      std::sort(candidates.begin(), candidates.end());
      for (std::size_t k = 0; k < features_per_split; ++k) {
        const std::size_t j = k + static_cast<std::size_t>(rng.below(candidates.size() - k));
        std::swap(candidates[k], candidates[j]);
      }
      candidates.resize(features_per_split);
    }
    std::sort(candidates.begin(), candidates.end());

    const double parent = gini(total, n);
    double best_gain = -std::numeric_limits<double>::infinity();
    std::int32_t best = -1;
    for (auto f : candidates) {
      const auto& p = counts[f];
      std::array<std::uint32_t, kLabelCount> a{};
      for (std::size_t k = 0; k < kLabelCount; ++k) a[k] = total[k] - p[k];
      const double np = p[0] + p[1] + p[2];
      const double na = n - np;
      const double gain = parent - (np / n) * gini(p, np) - (na / n) * gini(a, na);
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<std::int32_t>(f);
      }
    }
    for (auto f : touched) counts[f] = {};
    if (best < 0) continue;

    Work absent{tree.nodes.size(), {}, work.depth + 1};
    Work present{tree.nodes.size() + 1, {}, work.depth + 1};
    for (auto r : work.rows) {
      (row_has(data.rows[r], static_cast<std::uint32_t>(best)) ? present : absent).rows.push_back(r);
    }
    auto& node = tree.nodes[work.node];
    node.feature = best;
    node.absent = static_cast<std::int32_t>(absent.node);
    node.present = static_cast<std::int32_t>(present.node);
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    stack.push_back(std::move(present));
    stack.push_back(std::move(absent));
  }
  return tree;
}

Forest train_forest(const Dataset& data, std::uint64_t seed, const Hyperparams& hp, Execution exec) {
  const auto n = data.rows.size();
  const std::size_t per_split =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(data.dim)))));
  Forest forest;
  forest.trees.resize(static_cast<std::size_t>(hp.forest_trees));

  auto build = [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::vector<std::uint32_t> sample(n);
    for (auto& s : sample) s = static_cast<std::uint32_t>(rng.below(n));
    forest.trees[t] = train_tree(data, sample, hp.max_depth, per_split, rng.next());
  };

  const auto trees = static_cast<std::int64_t>(forest.trees.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t t = 0; t < trees; ++t) build(static_cast<std::size_t>(t));
  } else {
    for (std::int64_t t = 0; t < trees; ++t) build(static_cast<std::size_t>(t));
  }
  return forest;
}

// One-vs-rest logistic boosting with Newton-step stumps.
BoostedStumps train_boosting(const Dataset& data, const Hyperparams& hp) {
  const std::size_t n = data.rows.size();
  BoostedStumps model;
  std::vector<double> score(n), grad(n), hess(n);
  std::vector<double> g_present(data.dim), h_present(data.dim);
  std::vector<std::uint32_t> n_present(data.dim, 0);
  std::vector<std::uint32_t> touched;

  auto newton = [](double g, double h) { return h > 1e-12 ? g / h : 0.0; };

  for (std::size_t c = 0; c < kLabelCount; ++c) {
    std::size_t positives = 0;
    for (auto l : data.labels) positives += idx(l) == c;
    const double prior = std::clamp(static_cast<double>(positives) / static_cast<double>(n), 1e-6, 1.0 - 1e-6);
    model.base[c] = std::log(prior / (1.0 - prior));
    std::fill(score.begin(), score.end(), model.base[c]);

    for (int round = 0; round < hp.boost_rounds; ++round) {
      double g_total = 0.0, h_total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double p = 1.0 / (1.0 + std::exp(-score[i]));
        grad[i] = (idx(data.labels[i]) == c ? 1.0 : 0.0) - p;
        hess[i] = p * (1.0 - p);
        g_total += grad[i];
        h_total += hess[i];
      }
      touched.clear();
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& e : data.rows[i]) {
          if (n_present[e.index] == 0) touched.push_back(e.index);
          ++n_present[e.index];
          g_present[e.index] += grad[i];
          h_present[e.index] += hess[i];
        }
      }
      std::sort(touched.begin(), touched.end());

      Stump stump;
      double best = -std::numeric_limits<double>::infinity();
      auto gain = [](double g, double h) { return h > 1e-12 ? g * g / h : 0.0; };
      for (auto f : touched) {
        if (n_present[f] >= n) continue;
        const double gp = g_present[f], hp_ = h_present[f];
        const double s = gain(gp, hp_) + gain(g_total - gp, h_total - hp_);
        if (s > best) {
          best = s;
          stump.feature = static_cast<std::int32_t>(f);
          stump.present = hp.shrinkage * newton(gp, hp_);
          stump.absent = hp.shrinkage * newton(g_total - gp, h_total - hp_);
        }
      }
      if (stump.feature < 0) {
        stump.absent = stump.present = hp.shrinkage * newton(g_total, h_total);
      }
      for (auto f : touched) {
        n_present[f] = 0;
        g_present[f] = h_present[f] = 0.0;
      }
      for (std::size_t i = 0; i < n; ++i) {
        const bool has = stump.feature >= 0 && row_has(data.rows[i], static_cast<std::uint32_t>(stump.feature));
        score[i] += has ? stump.present : stump.absent;
      }
      model.stumps[c].push_back(stump);
    }
  }
  return model;
}

Label predict(const Parameters& params, const SparseRow& row) {
  struct Visitor {
    const SparseRow& row;
    Label operator()(const LinearOvr& m) const {
      std::array<double, kLabelCount> s{};
      for (std::size_t c = 0; c < kLabelCount; ++c) {
        const auto& w = m.weights[c];
        double dot = w.back();
        for (const auto& e : row) {
          if (e.index + 1 < w.size()) dot += w[e.index] * e.value;
        }
        s[c] = dot;
      }
      return argmax_label(s);
    }
    Label operator()(const Tree& t) const { return predict_tree(t, row); }
    Label operator()(const Forest& f) const {
      std::array<double, kLabelCount> votes{};
      for (const auto& t : f.trees) votes[idx(predict_tree(t, row))] += 1.0;
      return argmax_label(votes);
    }
    Label operator()(const BoostedStumps& b) const {
      std::array<double, kLabelCount> s = b.base;
      for (std::size_t c = 0; c < kLabelCount; ++c) {
        for (const auto& st : b.stumps[c]) {
          const bool has = st.feature >= 0 && row_has(row, static_cast<std::uint32_t>(st.feature));
          s[c] += has ? st.present : st.absent;
        }
      }
      return argmax_label(s);
    }
  };
  return std::visit(Visitor{row}, params);
}

}  // namespace req2tc::ner
