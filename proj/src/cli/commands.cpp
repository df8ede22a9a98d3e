#include "req2tc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "req2tc/corpus.hpp"
#include "req2tc/error.hpp"
#include "req2tc/eval.hpp"
#include "req2tc/ner.hpp"
#include "req2tc/pipeline.hpp"
#include "req2tc/stats.hpp"
#include "req2tc/tc_gen.hpp"
#include "req2tc/text.hpp"

namespace req2tc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr double kAlpha = 0.05;

// Thrown for problems the user must fix on the command line.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t parse_seed_text(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw UsageError("seed must be a non-negative integer, got '" + s + "'");
  }
  errno = 0;
  const auto v = std::strtoull(s.c_str(), nullptr, 10);
  if (errno == ERANGE) throw UsageError("seed out of range: " + s);
  return v;
}

std::uint64_t effective_seed(std::uint64_t flag) {
  if (const char* env = std::getenv("REQ2TC_SEED"); env && *env) return parse_seed_text(env);
  return flag;
}

struct HyperOptions {
  ner::Hyperparams hp;
  int max_depth = -1;

  void add(CLI::App* cmd) {
    cmd->add_option("--epochs", hp.svm_epochs, "SVM epochs")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", hp.svm_lambda, "SVM L2 strength")->check(CLI::PositiveNumber);
    cmd->add_option("--trees", hp.forest_trees, "Random forest size")->check(CLI::PositiveNumber);
    cmd->add_option("--max-depth", max_depth, "Tree depth limit (-1 = unbounded)");
    cmd->add_option("--rounds", hp.boost_rounds, "Boosting rounds")->check(CLI::PositiveNumber);
    cmd->add_option("--shrinkage", hp.shrinkage, "Boosting shrinkage")->check(CLI::PositiveNumber);
  }
  ner::Hyperparams resolve() const {
    auto out = hp;
    if (max_depth >= 0) out.max_depth = max_depth;
    return out;
  }
};

std::vector<ner::AnnotatedSentence> load_annotations(const std::string& annotations, const std::string& corpus_dir,
                                                     std::optional<corpus::Corpus>* loaded = nullptr) {
  if (annotations.empty() == corpus_dir.empty()) throw UsageError("give exactly one of --annotations or --corpus");
  if (!annotations.empty()) return ner::parse_jsonl(corpus::read_file(annotations));
  auto c = corpus::load_corpus(corpus_dir);
  auto data = c.annotations;
  if (loaded) *loaded = std::move(c);
  return data;
}

ordered_json metrics_json(const eval::MetricsReport& m) {
  ordered_json j;
  j["accuracy"] = m.accuracy;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["per_label"] = ordered_json::object();
  for (const auto& [label, lm] : m.per_label) {
    j["per_label"][label] = {{"precision", lm.precision}, {"recall", lm.recall}, {"f1", lm.f1}, {"support", lm.support}};
  }
  return j;
}

ordered_json confusion_json(const eval::ConfusionMatrix& cm) {
  return {{"labels", cm.labels}, {"counts", cm.counts}};
}

ordered_json summary_json(const eval::Summary& s) { return {{"mean", s.mean}, {"stddev", s.stddev}}; }

ordered_json cv_json(const eval::CvReport& r) {
  ordered_json j;
  j["backend"] = std::string(ner::to_string(r.backend));
  j["algorithm"] = std::string(ner::display_name(r.backend));
  j["folds"] = r.folds;
  j["seed"] = r.seed;
  j["accuracy"] = summary_json(r.accuracy);
  j["precision"] = summary_json(r.precision);
  j["recall"] = summary_json(r.recall);
  j["f1"] = summary_json(r.f1);
  j["per_fold"] = ordered_json::array();
  for (const auto& m : r.per_fold) j["per_fold"].push_back(metrics_json(m));
  j["fold_confusions"] = ordered_json::array();
  for (const auto& cm : r.fold_confusions) j["fold_confusions"].push_back(confusion_json(cm));
  j["pooled_confusion"] = confusion_json(r.pooled);
  return j;
}

std::string decision(double p) { return p < kAlpha ? "reject" : "fail to reject"; }

ordered_json test_json(const std::string& a, const std::string& b, const stats::StatTestResult& t) {
  ordered_json j;
  j["a"] = a;
  j["b"] = b;
  j["method"] = std::string(stats::to_string(t.method));
  j["alternative"] = std::string(stats::to_string(t.alternative));
  j["statistic"] = t.statistic;
  j["p_value"] = t.p_value;
  if (t.p_numerator) {
    j["p_numerator"] = *t.p_numerator;
    j["p_denominator"] = *t.p_denominator;
  }
  if (t.degenerate) j["degenerate"] = true;
  j["alpha"] = kAlpha;
  j["decision"] = decision(t.p_value);
  return j;
}

std::string fixed(double v, int digits = 3) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

std::string metrics_table(const std::vector<eval::CvReport>& reports) {
  std::ostringstream ss;
  ss << std::left << std::setw(30) << "Algorithm" << std::right << std::setw(10) << "Accuracy" << std::setw(11)
     << "Precision" << std::setw(8) << "Recall" << std::setw(10) << "F1 Score" << '\n';
  for (const auto& r : reports) {
    ss << std::left << std::setw(30) << ner::display_name(r.backend) << std::right << std::setw(10)
       << fixed(r.accuracy.mean) << std::setw(11) << fixed(r.precision.mean) << std::setw(8) << fixed(r.recall.mean)
       << std::setw(10) << fixed(r.f1.mean) << '\n';
  }
  return ss.str();
}

std::string test_line(const std::string& a, const std::string& b, const stats::StatTestResult& t) {
  std::ostringstream ss;
  ss << a << " vs " << b << ": " << stats::to_string(t.method) << " (" << stats::to_string(t.alternative)
     << ") statistic=" << fixed(t.statistic, 4) << " p=" << std::setprecision(6) << t.p_value;
  if (t.p_numerator) ss << " (" << *t.p_numerator << "/" << *t.p_denominator << ")";
  ss << " -> " << decision(t.p_value) << " H0 at alpha=" << kAlpha << '\n';
  return ss.str();
}

std::vector<double> fold_accuracies(const eval::CvReport& r) {
  std::vector<double> v;
  for (const auto& m : r.per_fold) v.push_back(m.accuracy);
  return v;
}

const char* kCategoryNames[] = {"", "Feature elements with a single signal", "Feature elements with up to four signals",
                                "Feature elements with more than four signals"};

struct CategoryRow {
  std::size_t documents = 0;
  double accuracy_sum = 0.0;
};

// Rule-path suite accuracy per category against the corpus gold suites.
std::array<CategoryRow, 4> category_table(const corpus::Corpus& c) {
  std::array<CategoryRow, 4> rows{};
  for (std::size_t i = 0; i < c.documents.size(); ++i) {
    const auto result = pipeline::run_rule(c.documents[i]);
    const int cat = eval::categorize_document(c.documents[i]);
    rows[static_cast<std::size_t>(cat)].documents += 1;
    rows[static_cast<std::size_t>(cat)].accuracy_sum += eval::document_accuracy(result.suites, c.gold[i].suites);
  }
  return rows;
}

// ---- synth ----------------------------------------------------------------

struct SynthOptions {
  std::size_t docs = 60;
  std::size_t sentences = 200;
  std::uint64_t seed = 42;
  double noise = 0.3;
  std::vector<double> mix{0.6, 0.3, 0.1};
  std::string out;
};

int cmd_synth(const SynthOptions& o, std::ostream& out) {
  corpus::CorpusConfig config;
  config.n_documents = o.docs;
  config.sentences_target = o.sentences;
  config.seed = effective_seed(o.seed);
  config.noise_level = o.noise;
  if (o.mix.size() != 3) throw UsageError("--mix takes three proportions");
  std::copy(o.mix.begin(), o.mix.end(), config.category_mix.begin());
  try {
    config.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto c = corpus::generate_corpus(config);
  corpus::save_corpus(c, o.out);
  std::size_t sentences = 0;
  for (const auto& d : c.documents) sentences += d.requirement_sentences.size();
  out << "wrote " << c.documents.size() << " documents, " << sentences << " requirement sentences, "
      << c.annotations.size() << " annotated conditions to " << o.out << '\n';
  return kOk;
}

// ---- train ----------------------------------------------------------------

struct TrainOptions {
  std::string annotations;
  std::string corpus_dir;
  std::string backend = "svm";
  std::uint64_t seed = 42;
  std::string out;
  HyperOptions hyper;
};

int cmd_train(const TrainOptions& o, std::ostream& out) {
  ner::Backend backend;
  try {
    backend = ner::backend_from_string(o.backend);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto data = load_annotations(o.annotations, o.corpus_dir);
  const auto model = ner::train(backend, data, effective_seed(o.seed), o.hyper.resolve());
  corpus::write_file(o.out, ner::serialize_model(model));
  out << "trained " << ner::display_name(backend) << " on " << data.size() << " sentences ("
      << model.vocabulary.size() << " features) -> " << o.out << '\n';
  return kOk;
}

// ---- generate -------------------------------------------------------------

struct GenerateOptions {
  std::vector<std::string> inputs;
  std::string method = "rule";
  std::string model;
  std::string out;
  std::string gold;
  bool emit_intermediate = false;
};

std::vector<fs::path> document_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      if (fs::is_directory(p / "documents")) p /= "documents";
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw Error(ErrorCode::IoError, "no such input: " + in);
    }
  }
  return files;
}

std::string safe_file_part(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_') ? c : '_';
  return out;
}

ordered_json binding_json(const rules::SignalBinding& b) {
  ordered_json j;
  j["assignments"] = ordered_json::array();
  for (const auto& [name, value] : b.assignments) j["assignments"].push_back({name, value.canonical()});
  j["conjunction"] = std::string(rules::to_string(b.conjunction));
  j["expected_output"] = b.expected_output;
  return j;
}

int cmd_generate(const GenerateOptions& o, std::ostream& out, std::ostream& err) {
  const bool use_ner = text::iequals(o.method, "ner");
  if (!use_ner && !text::iequals(o.method, "rule")) throw UsageError("--method must be rule or ner");
  if (use_ner && o.model.empty()) throw UsageError("--method ner needs --model");

  std::optional<ner::ClassifierModel> model;
  if (use_ner) model = ner::parse_model(corpus::read_file(o.model));

  std::map<std::string, std::size_t> gold_index;
  std::optional<corpus::Corpus> gold;
  if (!o.gold.empty()) {
    gold = corpus::load_corpus(o.gold);
    for (std::size_t i = 0; i < gold->documents.size(); ++i) gold_index[gold->documents[i].id] = i;
  }

  const auto files = document_files(o.inputs);
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + o.out + ": " + ec.message());

  ordered_json summary;
  summary["method"] = use_ner ? "NER" : "RULE";
  summary["documents"] = ordered_json::array();
  bool parse_failure = false;
  std::size_t suites_written = 0;
  std::array<CategoryRow, 4> categories{};

  for (const auto& file : files) {
    ordered_json entry;
    entry["path"] = file.filename().string();
    doc::FeatureElementDocument d;
    try {
      d = doc::parse_document(corpus::read_file(file));
    } catch (const Error& e) {
      parse_failure = true;
      entry["error"] = std::string(to_string(e.code()));
      entry["message"] = e.what();
      err << file.string() << ": " << e.what() << '\n';
      summary["documents"].push_back(std::move(entry));
      continue;
    }
    const auto result = use_ner ? pipeline::run_ner(d, *model) : pipeline::run_rule(d);
    entry["id"] = d.id;

    ordered_json sentences = ordered_json::array();
    for (const auto& s : result.sentences) {
      ordered_json sj;
      sj["index"] = s.index;
      if (s.pair) {
        sj["condition"] = s.pair->condition;
        sj["action"] = s.pair->action;
      }
      if (s.binding) sj["binding"] = binding_json(*s.binding);
      if (s.error) {
        sj["error"] = std::string(to_string(*s.error));
        sj["message"] = s.message;
      }
      sentences.push_back(std::move(sj));
    }
    ordered_json errors = ordered_json::array();
    for (const auto& s : result.sentences) {
      if (s.error) errors.push_back({{"sentence", s.index}, {"error", std::string(to_string(*s.error))}, {"message", s.message}});
    }
    entry["extraction_errors"] = std::move(errors);

    ordered_json suites = ordered_json::array();
    for (const auto& suite : result.suites) {
      const auto name = safe_file_part(d.id) + "__" + safe_file_part(suite.signal_column) + ".csv";
      tc::export_csv(suite, (fs::path(o.out) / name).string());
      ++suites_written;
      suites.push_back({{"signal", suite.signal_column}, {"file", name}, {"rows", suite.rows.size()}});
    }
    entry["suites"] = std::move(suites);
    ordered_json issues = ordered_json::array();
    for (const auto& i : result.issues) {
      issues.push_back({{"signal", i.signal}, {"error", std::string(to_string(i.code))}, {"message", i.message}});
    }
    entry["issues"] = std::move(issues);

    if (gold) {
      const auto it = gold_index.find(d.id);
      if (it != gold_index.end()) {
        const double acc = eval::document_accuracy(result.suites, gold->gold[it->second].suites);
        entry["suite_accuracy"] = acc;
        try {
          const int cat = eval::categorize_document(d);
          entry["category"] = cat;
          categories[static_cast<std::size_t>(cat)].documents += 1;
          categories[static_cast<std::size_t>(cat)].accuracy_sum += acc;
        } catch (const Error&) {
        }
      }
    }

    if (o.emit_intermediate) {
      ordered_json inter;
      inter["id"] = d.id;
      inter["sentences"] = sentences;
      corpus::write_file(fs::path(o.out) / (safe_file_part(d.id) + ".intermediate.json"), inter.dump(2) + "\n");
    }
    summary["documents"].push_back(std::move(entry));
  }

  if (gold) {
    ordered_json table = ordered_json::array();
    for (int c = 1; c <= 3; ++c) {
      const auto& row = categories[static_cast<std::size_t>(c)];
      table.push_back({{"category", c},
                       {"description", kCategoryNames[c]},
                       {"documents", row.documents},
                       {"accuracy", row.documents ? row.accuracy_sum / static_cast<double>(row.documents) : 0.0}});
    }
    summary["category_table"] = std::move(table);
  }
  corpus::write_file(fs::path(o.out) / "summary.json", summary.dump(2) + "\n");
  out << "processed " << files.size() << " documents, wrote " << suites_written << " suites to " << o.out << '\n';
  return parse_failure ? kDataError : kOk;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateOptions {
  std::string annotations;
  std::string corpus_dir;
  std::vector<std::string> backends{"svm", "rf", "dt", "gb"};
  int folds = 10;
  std::uint64_t seed = 42;
  std::string out;
  std::string table;
  HyperOptions hyper;
};

int cmd_evaluate(const EvaluateOptions& o, std::ostream& out) {
  if (o.folds < 2) throw UsageError("--folds must be at least 2");
  std::vector<ner::Backend> backends;
  for (const auto& b : o.backends) {
    try {
      backends.push_back(ner::backend_from_string(b));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (backends.empty()) throw UsageError("--backends is empty");
  const auto seed = effective_seed(o.seed);
  std::optional<corpus::Corpus> loaded;
  const auto data = load_annotations(o.annotations, o.corpus_dir, &loaded);

  std::vector<eval::CvReport> reports;
  for (auto b : backends) reports.push_back(eval::cross_validate(b, data, o.folds, seed, o.hyper.resolve()));

  ordered_json report;
  report["seed"] = seed;
  report["folds"] = o.folds;
  report["sentences"] = data.size();
  report["majority_baseline"] = eval::majority_baseline(data);
  report["cv"] = ordered_json::array();
  for (const auto& r : reports) report["cv"].push_back(cv_json(r));

  std::string text = metrics_table(reports);
  text += "majority baseline " + fixed(eval::majority_baseline(data)) + "\n";

  // One-sided tests of the first backend against every other one.
  report["tests"] = ordered_json::array();
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto a = fold_accuracies(reports[0]);
    const auto b = fold_accuracies(reports[i]);
    const auto t = stats::mann_whitney_u(a, b, stats::Alternative::GREATER);
    const std::string na(ner::to_string(reports[0].backend)), nb(ner::to_string(reports[i].backend));
    report["tests"].push_back(test_json(na, nb, t));
    text += test_line(na, nb, t);
  }

  if (loaded) {
    const auto rows = category_table(*loaded);
    ordered_json table = ordered_json::array();
    text += "\nCategory  Documents  Accuracy  Description\n";
    for (int c = 1; c <= 3; ++c) {
      const auto& row = rows[static_cast<std::size_t>(c)];
      const double acc = row.documents ? row.accuracy_sum / static_cast<double>(row.documents) : 0.0;
      table.push_back({{"category", c}, {"description", kCategoryNames[c]}, {"documents", row.documents}, {"accuracy", acc}});
      std::ostringstream line;
      line << std::left << std::setw(10) << c << std::right << std::setw(9) << row.documents << std::setw(10)
           << fixed(acc) << "  " << kCategoryNames[c] << '\n';
      text += line.str();
    }
    report["category_table"] = std::move(table);
  }

  if (!o.out.empty()) corpus::write_file(o.out, report.dump(2) + "\n");
  if (!o.table.empty()) corpus::write_file(o.table, text);
  out << text;
  return kOk;
}

// ---- compare --------------------------------------------------------------

struct CompareOptions {
  std::vector<std::string> reports;
  std::vector<std::string> proportions;
  std::string alternative = "greater";
  std::string out;
};

struct NamedFolds {
  std::string name;
  std::vector<double> accuracies;
};

std::vector<NamedFolds> read_reports(const std::vector<std::string>& files) {
  std::vector<NamedFolds> all;
  for (const auto& f : files) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(corpus::read_file(f));
      for (const auto& cv : j.at("cv")) {
        NamedFolds n;
        n.name = cv.at("backend").get<std::string>();
        for (const auto& m : cv.at("per_fold")) n.accuracies.push_back(m.at("accuracy").get<double>());
        all.push_back(std::move(n));
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::FormatError, f + ": " + e.what());
    }
  }
  return all;
}

std::pair<std::uint64_t, std::uint64_t> parse_proportion(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) throw UsageError("proportion must look like x/n, got '" + s + "'");
  try {
    return {parse_seed_text(s.substr(0, slash)), parse_seed_text(s.substr(slash + 1))};
  } catch (const UsageError&) {
    throw UsageError("proportion must look like x/n, got '" + s + "'");
  }
}

int cmd_compare(const CompareOptions& o, std::ostream& out) {
  if (o.reports.empty() == o.proportions.empty()) throw UsageError("give either --reports or --proportions");
  stats::Alternative alt;
  try {
    alt = stats::alternative_from_string(o.alternative);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  ordered_json result;
  result["tests"] = ordered_json::array();
  std::string text;
  if (!o.proportions.empty()) {
    if (o.proportions.size() != 2) throw UsageError("--proportions takes exactly two x/n values");
    const auto [xa, na] = parse_proportion(o.proportions[0]);
    const auto [xb, nb] = parse_proportion(o.proportions[1]);
    stats::StatTestResult t;
    try {
      t = stats::two_proportion_z_test(xa, na, xb, nb, alt);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    result["tests"].push_back(test_json(o.proportions[0], o.proportions[1], t));
    text += test_line(o.proportions[0], o.proportions[1], t);
  } else {
    const auto folds = read_reports(o.reports);
    if (folds.size() < 2) throw UsageError("need at least two cross-validation reports to compare");
    for (std::size_t i = 1; i < folds.size(); ++i) {
      if (folds[i].accuracies.size() != folds[0].accuracies.size()) {
        throw UsageError("reports have different fold counts");
      }
    }
    for (std::size_t i = 1; i < folds.size(); ++i) {
      const auto t = stats::mann_whitney_u(folds[0].accuracies, folds[i].accuracies, alt);
      result["tests"].push_back(test_json(folds[0].name, folds[i].name, t));
      text += test_line(folds[0].name, folds[i].name, t);
    }
  }
  if (!o.out.empty()) corpus::write_file(o.out, result.dump(2) + "\n");
  out << text;
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Requirement sentences to CAN test case specifications", "req2tc"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "Generate a seeded synthetic corpus");
  s->add_option("--docs", synth.docs, "Number of documents");
  s->add_option("--sentences", synth.sentences, "Annotated conditions to keep");
  s->add_option("--seed", synth.seed, "Random seed");
  s->add_option("--noise", synth.noise, "Paraphrase noise level in [0,1]");
  s->add_option("--mix", synth.mix, "Category proportions, three values")->delimiter(',')->expected(3);
  s->add_option("--out", synth.out, "Output directory")->required();

  TrainOptions train;
  auto* t = app.add_subcommand("train", "Train an NER model and write it to a file");
  t->add_option("--annotations", train.annotations, "Annotation JSON-lines file");
  t->add_option("--corpus", train.corpus_dir, "Corpus directory");
  t->add_option("--backend", train.backend, "svm, rf, dt or gb");
  t->add_option("--seed", train.seed, "Random seed");
  t->add_option("--out", train.out, "Model file")->required();
  train.hyper.add(t);

  GenerateOptions gen;
  auto* g = app.add_subcommand("generate", "Produce CSV test suites from feature element documents");
  g->add_option("--input", gen.inputs, "Document file, directory or corpus directory")->required();
  g->add_option("--method", gen.method, "rule or ner");
  g->add_option("--model", gen.model, "Model file for --method ner");
  g->add_option("--out", gen.out, "Output directory")->required();
  g->add_option("--gold", gen.gold, "Corpus directory with gold suites to score against");
  g->add_flag("--emit-intermediate", gen.emit_intermediate, "Dump parsed pairs and bindings per document");

  EvaluateOptions ev;
  auto* e = app.add_subcommand("evaluate", "Cross-validate NER backends");
  e->add_option("--annotations", ev.annotations, "Annotation JSON-lines file");
  e->add_option("--corpus", ev.corpus_dir, "Corpus directory (adds the category table)");
  e->add_option("--backends", ev.backends, "Backends, first is the reference")->delimiter(',');
  e->add_option("--folds", ev.folds, "Number of folds");
  e->add_option("--seed", ev.seed, "Random seed");
  e->add_option("--out", ev.out, "JSON report");
  e->add_option("--table", ev.table, "Plain-text summary table");
  ev.hyper.add(e);

  CompareOptions cmp;
  auto* c = app.add_subcommand("compare", "Significance tests over reports or proportions");
  c->add_option("--reports", cmp.reports, "evaluate JSON reports; the first backend is the reference");
  c->add_option("--proportions", cmp.proportions, "Two proportions x/n");
  c->add_option("--alternative", cmp.alternative, "greater, less or two-sided");
  c->add_option("--out", cmp.out, "JSON output");

  std::vector<std::string> argv_store{"req2tc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& pe) {
    const int code = app.exit(pe, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (s->parsed()) return cmd_synth(synth, out);
    if (t->parsed()) return cmd_train(train, out);
    if (g->parsed()) return cmd_generate(gen, out, err);
    if (e->parsed()) return cmd_evaluate(ev, out);
    if (c->parsed()) return cmd_compare(cmp, out);
  } catch (const UsageError& ue) {
    err << "usage error: " << ue.what() << '\n';
    return kUsageError;
  } catch (const Error& de) {
    err << "error: " << de.what() << '\n';
    return de.code() == ErrorCode::InvalidConfig ? kUsageError : kDataError;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace req2tc::cli
