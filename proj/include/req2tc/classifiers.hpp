#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "req2tc/features.hpp"
#include "req2tc/parallel.hpp"

namespace req2tc::ner {

/// Ordinal order doubles as the tie-break order: SIGNAL < VALUE < OTHER.
enum class Label : std::uint8_t { SIGNAL = 0, VALUE = 1, OTHER = 2 };
inline constexpr std::size_t kLabelCount = 3;
inline constexpr std::array<Label, kLabelCount> kLabels = {Label::SIGNAL, Label::VALUE, Label::OTHER};

std::string_view to_string(Label label) noexcept;
Label label_from_string(std::string_view s);

enum class Backend { SVM, RANDOM_FOREST, DECISION_TREE, GRADIENT_BOOSTING };

std::string_view to_string(Backend backend) noexcept;
/// Accepts the enum names and the short forms svm/rf/dt/gb, case-insensitive.
Backend backend_from_string(std::string_view s);
std::string_view display_name(Backend backend) noexcept;

struct Hyperparams {
  int svm_epochs = 50;
  double svm_lambda = 1e-3;
  int forest_trees = 50;
  std::optional<int> max_depth;  // unbounded when empty
  int boost_rounds = 100;
  double shrinkage = 0.1;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

/// Token-level training matrix: one sparse row per token.
struct Dataset {
  std::vector<SparseRow> rows;
  std::vector<Label> labels;
  std::size_t dim = 0;
};

/// One-vs-rest linear scorers; index `dim` of each weight vector is the bias.
struct LinearOvr {
  std::array<std::vector<double>, kLabelCount> weights;
  friend bool operator==(const LinearOvr&, const LinearOvr&) = default;
};

/// Binary-feature CART tree. `feature < 0` marks a leaf. `absent`/`present`
/// index the child taken when the feature is missing/present.
struct Tree {
  struct Node {
    std::int32_t feature = -1;
    std::int32_t absent = -1;
    std::int32_t present = -1;
    Label label = Label::OTHER;
    friend bool operator==(const Node&, const Node&) = default;
  };
  std::vector<Node> nodes;
  friend bool operator==(const Tree&, const Tree&) = default;
};

struct Forest {
  std::vector<Tree> trees;
  friend bool operator==(const Forest&, const Forest&) = default;
};

/// Depth-1 regression tree on a binary feature. feature < 0: constant update.
struct Stump {
  std::int32_t feature = -1;
  double absent = 0.0;
  double present = 0.0;
  friend bool operator==(const Stump&, const Stump&) = default;
};

struct BoostedStumps {
  std::array<double, kLabelCount> base{};
  std::array<std::vector<Stump>, kLabelCount> stumps;
  friend bool operator==(const BoostedStumps&, const BoostedStumps&) = default;
};

using Parameters = std::variant<LinearOvr, Tree, Forest, BoostedStumps>;

LinearOvr train_svm(const Dataset& data, std::uint64_t seed, const Hyperparams& hp);
Tree train_tree(const Dataset& data, const std::vector<std::uint32_t>& sample,
                std::optional<int> max_depth, std::size_t features_per_split, std::uint64_t seed);
/// The OpenMP and serial paths build identical forests: each tree draws
/// from its own derived seed.
Forest train_forest(const Dataset& data, std::uint64_t seed, const Hyperparams& hp,
                    Execution exec = Execution::Parallel);
BoostedStumps train_boosting(const Dataset& data, const Hyperparams& hp);

Label predict(const Parameters& params, const SparseRow& row);

/// argmax with ties resolved towards the lowest label ordinal.
Label argmax_label(const std::array<double, kLabelCount>& scores) noexcept;

}  // namespace req2tc::ner
