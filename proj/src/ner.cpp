#include "req2tc/ner.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include <json.hpp>

#include "req2tc/error.hpp"
#include "req2tc/text.hpp"

namespace req2tc::ner {
namespace {

constexpr std::string_view kModelMagic = "req2tc-model 1";

std::string hexfloat(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::string_view content) : in_(std::string(content)) {}

  std::string word(std::string_view what) {
    std::string w;
    if (!(in_ >> w)) fail("expected " + std::string(what));
    return w;
  }
  void expect(std::string_view keyword) {
    const auto w = word(keyword);
    if (w != keyword) fail("expected '" + std::string(keyword) + "', got '" + w + "'");
  }
  long long integer(std::string_view what) {
    const auto w = word(what);
    char* end = nullptr;
    const long long v = std::strtoll(w.c_str(), &end, 10);
    if (end == w.c_str() || *end != '\0') fail("bad integer for " + std::string(what));
    return v;
  }
  std::size_t count(std::string_view what) {
    const auto v = integer(what);
    if (v < 0) fail("negative count for " + std::string(what));
    return static_cast<std::size_t>(v);
  }
  double real(std::string_view what) {
    const auto w = word(what);
    char* end = nullptr;
    const double v = std::strtod(w.c_str(), &end);
    if (end == w.c_str() || *end != '\0') fail("bad real for " + std::string(what));
    return v;
  }
  std::string line(std::string_view what) {
    std::string l;
    if (!std::getline(in_, l)) fail("expected " + std::string(what));
    return l;
  }
  [[noreturn]] void fail(const std::string& why) { throw Error(ErrorCode::ModelFormatError, why); }

 private:
  std::istringstream in_;
};

void write_tree(std::ostringstream& out, const Tree& tree) {
  out << "tree " << tree.nodes.size() << '\n';
  for (const auto& n : tree.nodes) {
    out << n.feature << ' ' << n.absent << ' ' << n.present << ' ' << to_string(n.label) << '\n';
  }
}

Tree read_tree(Reader& r) {
  r.expect("tree");
  Tree tree;
  tree.nodes.resize(r.count("node count"));
  for (auto& n : tree.nodes) {
    n.feature = static_cast<std::int32_t>(r.integer("feature"));
    n.absent = static_cast<std::int32_t>(r.integer("absent child"));
    n.present = static_cast<std::int32_t>(r.integer("present child"));
    n.label = label_from_string(r.word("label"));
  }
  const auto size = static_cast<std::int32_t>(tree.nodes.size());
  for (const auto& n : tree.nodes) {
    if (n.feature >= 0 && (n.absent <= 0 || n.absent >= size || n.present <= 0 || n.present >= size)) {
      r.fail("tree child index out of range");
    }
  }
  if (tree.nodes.empty()) r.fail("empty tree");
  return tree;
}

}  // namespace

void validate(const AnnotatedSentence& s) {
  std::size_t prev_end = 0;
  for (std::size_t k = 0; k < s.spans.size(); ++k) {
    const auto& span = s.spans[k];
    if (span.label == Label::OTHER) throw Error(ErrorCode::FormatError, "span label must be SIGNAL or VALUE");
    if (span.start >= span.end || span.end > s.text.size()) {
      throw Error(ErrorCode::FormatError, "span [" + std::to_string(span.start) + "," +
                                              std::to_string(span.end) + ") out of bounds");
    }
    if (k > 0 && span.start < prev_end) throw Error(ErrorCode::FormatError, "spans overlap or are unsorted");
    if (text::is_space(s.text[span.start]) || text::is_space(s.text[span.end - 1])) {
      throw Error(ErrorCode::FormatError, "span has leading or trailing whitespace");
    }
    prev_end = span.end;
  }
}

std::vector<Label> token_labels(const AnnotatedSentence& sentence, std::span<const req::Token> tokens) {
  std::vector<Label> labels(tokens.size(), Label::OTHER);
  for (const auto& span : sentence.spans) {
    bool covered = false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      if (t.end <= span.start || t.start >= span.end) continue;
      if (t.start < span.start || t.end > span.end) {
        throw Error(ErrorCode::SpanAlignmentError,
                    "span [" + std::to_string(span.start) + "," + std::to_string(span.end) +
                        ") cuts token '" + t.text + "' in '" + sentence.text + "'");
      }
      labels[i] = span.label;
      covered = true;
    }
    if (!covered) {
      throw Error(ErrorCode::SpanAlignmentError, "span covers no token in '" + sentence.text + "'");
    }
  }
  return labels;
}

std::vector<EntitySpan> merge_spans(std::span<const req::Token> tokens, std::span<const Label> labels) {
  std::vector<EntitySpan> spans;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (labels[i] == Label::OTHER) continue;
    if (i > 0 && labels[i - 1] == labels[i]) {
      spans.back().end = tokens[i].end;
    } else {
      spans.push_back({tokens[i].start, tokens[i].end, labels[i]});
    }
  }
  return spans;
}

SparseRow ClassifierModel::encode(const FeatureVector& features) const {
  SparseRow row;
  for (const auto& [name, weight] : features) {
    if (weight == 0.0) continue;
    const auto it = vocabulary.find(name);
    if (it != vocabulary.end()) row.push_back({it->second, weight});
  }
  std::sort(row.begin(), row.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
  return row;
}

ClassifierModel train(Backend backend, std::span<const AnnotatedSentence> data, std::uint64_t seed,
                      const Hyperparams& hyperparams, Execution exec) {
  if (data.empty()) throw Error(ErrorCode::EmptyDataset, "no training sentences");

  std::vector<FeatureVector> features;
  std::vector<Label> labels;
  for (const auto& sentence : data) {
    const auto tokens = req::tokenize(sentence.text);
    const auto gold = token_labels(sentence, tokens);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      features.push_back(featurize_token(tokens, i));
      labels.push_back(gold[i]);
    }
  }
  if (features.empty()) throw Error(ErrorCode::EmptyDataset, "training sentences contain no tokens");

  ClassifierModel model;
  model.backend = backend;
  model.hyperparams = hyperparams;
  std::set<std::string> names;
  for (const auto& f : features) {
    for (const auto& [name, weight] : f) names.insert(name);
  }
  std::uint32_t next = 0;
  for (const auto& name : names) model.vocabulary.emplace(name, next++);

  Dataset dataset;
  dataset.dim = model.vocabulary.size();
  dataset.labels = std::move(labels);
  dataset.rows.reserve(features.size());
  for (const auto& f : features) dataset.rows.push_back(model.encode(f));

  switch (backend) {
    case Backend::SVM:
      model.parameters = train_svm(dataset, seed, hyperparams);
      break;
    case Backend::DECISION_TREE: {
      std::vector<std::uint32_t> all(dataset.rows.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
      model.parameters = train_tree(dataset, all, hyperparams.max_depth, 0, seed);
      break;
    }
    case Backend::RANDOM_FOREST:
      model.parameters = train_forest(dataset, seed, hyperparams, exec);
      break;
    case Backend::GRADIENT_BOOSTING:
      model.parameters = train_boosting(dataset, hyperparams);
      break;
  }
  return model;
}

Label predict_token(const ClassifierModel& model, const FeatureVector& features) {
  const auto row = model.encode(features);
  if (row.empty()) return Label::OTHER;
  return predict(model.parameters, row);
}

std::vector<Label> predict_labels(const ClassifierModel& model, std::span<const req::Token> tokens) {
  std::vector<Label> labels(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) labels[i] = predict_token(model, featurize_token(tokens, i));
  return labels;
}

std::vector<EntitySpan> predict_spans(const ClassifierModel& model, std::string_view sentence) {
  const auto tokens = req::tokenize(sentence);
  const auto labels = predict_labels(model, tokens);
  return merge_spans(tokens, labels);
}

std::vector<std::vector<Label>> predict_labels_batch(const ClassifierModel& model,
                                                     std::span<const std::string> sentences, Execution exec) {
  std::vector<std::vector<Label>> out(sentences.size());
  const auto n = static_cast<std::int64_t>(sentences.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) {
      const auto tokens = req::tokenize(sentences[static_cast<std::size_t>(i)]);
      out[static_cast<std::size_t>(i)] = predict_labels(model, tokens);
    }
  } else {
    for (std::int64_t i = 0; i < n; ++i) {
      const auto tokens = req::tokenize(sentences[static_cast<std::size_t>(i)]);
      out[static_cast<std::size_t>(i)] = predict_labels(model, tokens);
    }
  }
  return out;
}

rules::SignalBinding extract_binding_ner(const req::ConditionActionPair& pair, const ClassifierModel& model) {
  const auto spans = predict_spans(model, pair.condition);
  if (spans.empty()) throw Error(ErrorCode::NoEntities, "no entities in '" + pair.condition + "'");

  std::vector<std::string> signals;
  std::vector<std::string> values;
  for (const auto& s : spans) {
    auto slice = pair.condition.substr(s.start, s.end - s.start);
    (s.label == Label::SIGNAL ? signals : values).push_back(std::move(slice));
  }
  if (signals.size() != values.size()) {
    throw Error(ErrorCode::SpanCountMismatch, std::to_string(signals.size()) + " SIGNAL vs " +
                                                  std::to_string(values.size()) + " VALUE spans in '" +
                                                  pair.condition + "'");
  }

  bool saw_and = false;
  bool saw_or = false;
  for (const auto& t : req::tokenize(pair.condition)) {
    if (t.tag == req::Tag::PUNCT) continue;
    saw_and = saw_and || text::iequals(t.text, "and");
    saw_or = saw_or || text::iequals(t.text, "or");
  }

  rules::SignalBinding binding;
  binding.expected_output = pair.action;
  for (std::size_t k = 0; k < signals.size(); ++k) {
    if (!doc::looks_like_hex(values[k])) {
      throw Error(ErrorCode::NoValueFound, "VALUE span '" + values[k] + "' is not a hex literal");
    }
    if (binding.find(signals[k])) throw Error(ErrorCode::DuplicateSignal, "'" + signals[k] + "' assigned twice");
    binding.assignments.emplace_back(signals[k], doc::parse_hex_value(values[k]));
  }
  if (binding.assignments.size() > 1) {
    if (saw_and && saw_or) {
      throw Error(ErrorCode::MixedConjunction, "both 'and' and 'or' in '" + pair.condition + "'");
    }
    binding.conjunction = saw_or ? rules::Conjunction::OR : rules::Conjunction::AND;
  }
  return binding;
}

std::string to_jsonl(std::span<const AnnotatedSentence> sentences) {
  std::string out;
  for (const auto& s : sentences) {
    nlohmann::ordered_json obj;
    obj["text"] = s.text;
    obj["entities"] = nlohmann::ordered_json::array();
    for (const auto& span : s.spans) {
      nlohmann::ordered_json e;
      e["start"] = span.start;
      e["end"] = span.end;
      e["label"] = std::string(to_string(span.label));
      obj["entities"].push_back(std::move(e));
    }
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<AnnotatedSentence> parse_jsonl(std::string_view content) {
  std::vector<AnnotatedSentence> out;
  const auto all = text::lines(content);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto line = text::trim(all[i]);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(i + 1) + ": ";
    try {
      const auto obj = nlohmann::json::parse(line);
      AnnotatedSentence s;
      s.text = obj.at("text").get<std::string>();
      for (const auto& e : obj.at("entities")) {
        const auto start = e.at("start").get<std::int64_t>();
        const auto end = e.at("end").get<std::int64_t>();
        if (start < 0 || end < 0) throw Error(ErrorCode::FormatError, "negative offset");
        const auto label = label_from_string(e.at("label").get<std::string>());
        s.spans.push_back({static_cast<std::size_t>(start), static_cast<std::size_t>(end), label});
      }
      validate(s);
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::FormatError, where + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::FormatError, where + e.what());
    }
  }
  return out;
}

std::string serialize_model(const ClassifierModel& model) {
  std::ostringstream out;
  const auto& hp = model.hyperparams;
  out << kModelMagic << '\n';
  out << "backend " << to_string(model.backend) << '\n';
  out << "hyper " << hp.svm_epochs << ' ' << hexfloat(hp.svm_lambda) << ' ' << hp.forest_trees << ' '
      << hp.max_depth.value_or(-1) << ' ' << hp.boost_rounds << ' ' << hexfloat(hp.shrinkage) << '\n';
  out << "vocab " << model.vocabulary.size() << '\n';
  // Indices are assigned in identifier order, so the listing order is the index order.
  std::vector<const std::string*> by_index(model.vocabulary.size());
  for (const auto& [name, index] : model.vocabulary) by_index.at(index) = &name;
  for (const auto* name : by_index) out << *name << '\n';

  struct Writer {
    std::ostringstream& out;
    void operator()(const LinearOvr& m) const {
      out << "linear " << m.weights[0].size() << '\n';
      for (const auto& w : m.weights) {
        for (std::size_t i = 0; i < w.size(); ++i) out << (i ? " " : "") << hexfloat(w[i]);
        out << '\n';
      }
    }
    void operator()(const Tree& t) const { write_tree(out, t); }
    void operator()(const Forest& f) const {
      out << "forest " << f.trees.size() << '\n';
      for (const auto& t : f.trees) write_tree(out, t);
    }
    void operator()(const BoostedStumps& b) const {
      out << "boost " << hexfloat(b.base[0]) << ' ' << hexfloat(b.base[1]) << ' ' << hexfloat(b.base[2]) << '\n';
      for (const auto& stumps : b.stumps) {
        out << "stumps " << stumps.size() << '\n';
        for (const auto& s : stumps) out << s.feature << ' ' << hexfloat(s.absent) << ' ' << hexfloat(s.present) << '\n';
      }
    }
  };
  std::visit(Writer{out}, model.parameters);
  return out.str();
}

ClassifierModel parse_model(std::string_view content) {
  Reader r(content);
  if (r.line("header") != kModelMagic) r.fail("not a req2tc model file (version 1)");
  ClassifierModel model;
  r.expect("backend");
  try {
    model.backend = backend_from_string(r.word("backend name"));
  } catch (const Error&) {
    r.fail("unknown backend");
  }
  r.expect("hyper");
  auto& hp = model.hyperparams;
  hp.svm_epochs = static_cast<int>(r.integer("svm_epochs"));
  hp.svm_lambda = r.real("svm_lambda");
  hp.forest_trees = static_cast<int>(r.integer("forest_trees"));
  const auto depth = r.integer("max_depth");
  if (depth >= 0) hp.max_depth = static_cast<int>(depth);
  hp.boost_rounds = static_cast<int>(r.integer("boost_rounds"));
  hp.shrinkage = r.real("shrinkage");
  r.expect("vocab");
  const auto vocab = r.count("vocabulary size");
  r.line("end of vocab header");
  for (std::size_t i = 0; i < vocab; ++i) {
    auto name = r.line("feature identifier");
    if (!model.vocabulary.emplace(std::move(name), static_cast<std::uint32_t>(i)).second) {
      r.fail("duplicate feature identifier");
    }
  }
  const std::size_t dim = vocab;

  auto check_feature = [&](std::int32_t f) {
    if (f >= 0 && static_cast<std::size_t>(f) >= dim) r.fail("feature index out of range");
  };

  switch (model.backend) {
    case Backend::SVM: {
      r.expect("linear");
      const auto width = r.count("weight count");
      if (width != dim + 1) r.fail("weight vector width does not match vocabulary");
      LinearOvr m;
      for (auto& w : m.weights) {
        w.resize(width);
        for (auto& x : w) x = r.real("weight");
      }
      model.parameters = std::move(m);
      break;
    }
    case Backend::DECISION_TREE: {
      auto t = read_tree(r);
      for (const auto& n : t.nodes) check_feature(n.feature);
      model.parameters = std::move(t);
      break;
    }
    case Backend::RANDOM_FOREST: {
      r.expect("forest");
      Forest f;
      f.trees.resize(r.count("tree count"));
      for (auto& t : f.trees) {
        t = read_tree(r);
        for (const auto& n : t.nodes) check_feature(n.feature);
      }
      model.parameters = std::move(f);
      break;
    }
    case Backend::GRADIENT_BOOSTING: {
      r.expect("boost");
      BoostedStumps b;
      for (auto& x : b.base) x = r.real("base score");
      for (auto& stumps : b.stumps) {
        r.expect("stumps");
        stumps.resize(r.count("stump count"));
        for (auto& s : stumps) {
          s.feature = static_cast<std::int32_t>(r.integer("stump feature"));
          check_feature(s.feature);
          s.absent = r.real("absent value");
          s.present = r.real("present value");
        }
      }
      model.parameters = std::move(b);
      break;
    }
  }
  return model;
}

}  // namespace req2tc::ner
