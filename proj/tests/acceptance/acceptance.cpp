// Acceptance run: one PASS/FAIL line per criterion. Exit status 1 if any criterion fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "req2tc/cli.hpp"
#include "req2tc/corpus.hpp"
#include "req2tc/csv.hpp"
#include "req2tc/doc_model.hpp"
#include "req2tc/eval.hpp"
#include "req2tc/pipeline.hpp"
#include "req2tc/rng.hpp"
#include "req2tc/stats.hpp"

using namespace req2tc;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kRuntimeLimitSeconds = 10.0;
constexpr double kCategoryGap = 0.15;
constexpr double kBaselineMargin = 0.20;
constexpr double kMetricsTolerance = 1e-12;
constexpr double kZTolerance = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

corpus::CorpusConfig canonical_config() { return {}; }  // 60 docs, 0.6/0.3/0.1, seed 42, noise 0.3, 200 sentences

const corpus::Corpus& canonical() {
  static const corpus::Corpus c = corpus::generate_corpus(canonical_config());
  return c;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome rule_path_exactness() {
  const auto start = std::chrono::steady_clock::now();
  corpus::CorpusConfig config;
  config.n_documents = 200;
  config.category_mix = {1.0, 0.0, 0.0};
  config.noise_level = 0.0;
  const auto c = corpus::generate_corpus(config);
  std::size_t exact = 0;
  for (std::size_t i = 0; i < c.documents.size(); ++i) {
    const auto result = pipeline::run_rule(c.documents[i]);
    exact += eval::document_accuracy(result.suites, c.gold[i].suites) == 1.0;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {exact == c.documents.size() && secs < kRuntimeLimitSeconds,
          std::to_string(exact) + "/" + std::to_string(c.documents.size()) + " documents exact, " + fmt("%.2fs", secs)};
}

Outcome category_ordering() {
  const auto& c = canonical();
  std::array<double, 4> sum{}, n{};
  for (std::size_t i = 0; i < c.documents.size(); ++i) {
    const auto result = pipeline::run_rule(c.documents[i]);
    const auto cat = static_cast<std::size_t>(eval::categorize_document(c.documents[i]));
    sum[cat] += eval::document_accuracy(result.suites, c.gold[i].suites);
    n[cat] += 1;
  }
  std::array<double, 4> mean{};
  for (std::size_t k = 1; k <= 3; ++k) mean[k] = n[k] > 0 ? sum[k] / n[k] : 0.0;
  const bool pass = n[1] > 0 && n[2] > 0 && n[3] > 0 && mean[1] >= mean[2] && mean[2] >= mean[3] &&
                    mean[1] - mean[3] >= kCategoryGap;
  return {pass, fmt("cat1=%.3f cat2=%.3f cat3=%.3f (gap %.3f)", mean[1], mean[2], mean[3], mean[1] - mean[3])};
}

Outcome ner_ordering() {
  const auto& data = canonical().annotations;
  const double baseline = eval::majority_baseline(data);
  const auto svm = eval::cross_validate(ner::Backend::SVM, data, 10, 42);
  const auto gb = eval::cross_validate(ner::Backend::GRADIENT_BOOSTING, data, 10, 42);
  const double s = svm.accuracy.mean, g = gb.accuracy.mean;
  return {s >= baseline + kBaselineMargin && s > g,
          fmt("svm=%.4f gb=%.4f baseline=%.4f", s, g, baseline)};
}

Outcome metrics_oracle() {
  Rng rng(2024);
  const std::vector<std::string> names = {"A", "B", "C"};
  double worst = 0.0;
  bool recall_is_accuracy = true;
  for (int list = 0; list < 100; ++list) {
    const auto len = static_cast<std::size_t>(rng.between(1, 200));
    std::vector<std::size_t> g(len), p(len);
    for (std::size_t i = 0; i < len; ++i) {
      g[i] = rng.below(3);
      p[i] = rng.below(3);
    }
    const auto m = eval::metrics(eval::confusion(g, p, names));
    // Recount from the raw lists.
    const double total = static_cast<double>(len);
    double right = 0, wp = 0, wr = 0, wf = 0;
    for (std::size_t i = 0; i < len; ++i) right += g[i] == p[i];
    for (std::size_t l = 0; l < 3; ++l) {
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < len; ++i) {
        tp += g[i] == l && p[i] == l;
        fp += g[i] != l && p[i] == l;
        fn += g[i] == l && p[i] != l;
      }
      const double pr = tp + fp > 0 ? tp / (tp + fp) : 0.0;
      const double rc = tp + fn > 0 ? tp / (tp + fn) : 0.0;
      const double f1 = pr + rc > 0 ? 2 * pr * rc / (pr + rc) : 0.0;
      const auto& got = m.per_label.at(names[l]);
      worst = std::max({worst, std::abs(got.precision - pr), std::abs(got.recall - rc), std::abs(got.f1 - f1)});
      wp += pr * (tp + fn) / total;
      wr += rc * (tp + fn) / total;
      wf += f1 * (tp + fn) / total;
    }
    worst = std::max({worst, std::abs(m.accuracy - right / total), std::abs(m.precision - wp),
                      std::abs(m.recall - wr), std::abs(m.f1 - wf)});
    recall_is_accuracy = recall_is_accuracy && m.recall == m.accuracy;
  }
  return {worst <= kMetricsTolerance && recall_is_accuracy,
          fmt("max deviation %.3g, weighted recall == accuracy: ", worst) + (recall_is_accuracy ? "yes" : "no")};
}

Outcome mann_whitney_exactness() {
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(1.0 + 0.5 * i);
  std::size_t cases = 0, mismatches = 0;
  for (std::size_t m = 1; m <= 6; ++m) {
    for (std::size_t n = 1; n <= 6; ++n) {
      const std::size_t N = m + n;
      // Distribution of U over every rank assignment.
      std::map<double, std::uint64_t> dist;
      std::uint64_t total = 0;
      for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
        double rank_sum = 0;
        for (std::size_t r = 0; r < N; ++r) rank_sum += (mask >> r & 1u) ? static_cast<double>(r + 1) : 0.0;
        ++dist[rank_sum - static_cast<double>(m * (m + 1) / 2)];
        ++total;
      }
      for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
        std::vector<double> a, b;
        for (std::size_t r = 0; r < N; ++r) ((mask >> r & 1u) ? a : b).push_back(grid[r]);
        double u = 0;
        for (double x : a) {
          for (double y : b) u += x > y;
        }
        std::uint64_t ge = 0, le = 0;
        for (const auto& [v, count] : dist) {
          if (v >= u) ge += count;
          if (v <= u) le += count;
        }
        for (auto alt : {stats::Alternative::GREATER, stats::Alternative::LESS, stats::Alternative::TWO_SIDED}) {
          const auto t = stats::mann_whitney_u(a, b, alt);
          const std::uint64_t want = alt == stats::Alternative::GREATER ? ge
                                     : alt == stats::Alternative::LESS  ? le
                                                                        : std::min(total, 2 * std::min(ge, le));
          const bool ok = t.method == stats::Method::MANN_WHITNEY_EXACT && t.p_numerator && t.p_denominator &&
                          *t.p_numerator * total == want * *t.p_denominator;
          mismatches += !ok;
        }
        ++cases;
      }
    }
  }
  const std::vector<double> hi = {6, 7, 8, 9, 10}, lo = {1, 2, 3, 4, 5};
  const auto sep = stats::mann_whitney_u(hi, lo, stats::Alternative::GREATER);
  const bool separated = sep.p_numerator && sep.p_denominator && *sep.p_numerator * 252 == *sep.p_denominator;
  return {mismatches == 0 && separated, std::to_string(cases) + " sample pairs, " + std::to_string(mismatches) +
                                            " mismatches, separated 5v5 p=" + std::to_string(*sep.p_numerator) +
                                            "/" + std::to_string(*sep.p_denominator)};
}

Outcome z_test_sanity() {
  const auto eq = stats::two_proportion_z_test(50, 100, 50, 100, stats::Alternative::TWO_SIDED);
  const auto t = stats::two_proportion_z_test(90, 100, 60, 100, stats::Alternative::GREATER);
  const double pooled = 0.75;
  const double z = 0.3 / std::sqrt(pooled * (1 - pooled) * 0.02);
  const double p = 0.5 * std::erfc(z / std::sqrt(2.0));
  const bool pass = eq.statistic == 0.0 && eq.p_value == 1.0 && std::abs(t.statistic - z) <= kZTolerance &&
                    std::abs(t.p_value - p) <= kZTolerance;
  return {pass, fmt("equal: z=%.1f p=%.1f; 90/100 vs 60/100: z=%.4f p=%.3e", eq.statistic, eq.p_value, t.statistic,
                    t.p_value)};
}

Outcome fold_invariants() {
  const auto& data = canonical().annotations;
  constexpr int k = 10;
  const auto folds = eval::stratified_kfold(data, k, 42);
  std::vector<int> seen(data.size(), 0);
  std::size_t lo = data.size(), hi = 0;
  std::map<std::pair<int, int>, std::size_t> stratum;
  for (const auto& s : data) ++stratum[eval::stratum_key(s)];
  double worst = 0.0;
  for (const auto& f : folds) {
    std::map<std::pair<int, int>, std::size_t> in_fold;
    for (auto i : f.test) {
      ++seen[i];
      ++in_fold[eval::stratum_key(data[i])];
    }
    lo = std::min(lo, f.test.size());
    hi = std::max(hi, f.test.size());
    for (const auto& [key, count] : stratum) {
      const double got = in_fold.count(key) ? static_cast<double>(in_fold[key]) : 0.0;
      worst = std::max(worst, std::abs(got - static_cast<double>(count) / k));
    }
  }
  const bool partition = folds.size() == k && std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
  return {partition && hi - lo <= 1 && worst <= 1.0,
          std::string(partition ? "partition" : "not a partition") + ", sizes " + std::to_string(lo) + "-" +
              std::to_string(hi) + fmt(", worst stratum deviation %.2f", worst)};
}

Outcome figure_fidelity() {
  const auto d =
      doc::parse_document(corpus::read_file(fs::path(REQ2TC_TEST_DATA) / "vehicle_speed_check.txt"));
  const auto result = pipeline::run_rule(d);
  if (result.suites.size() != 1) return {false, "expected one suite"};
  const auto& rows = result.suites[0].rows;
  const std::string label = "\"MPG302 - Vehicle Speed Check\"";
  const std::vector<tc::TestCaseRow> want = {
      {1, "ECU is up and Running", "Send CAN signal with value 0x0", "DDU shall set notification " + label + " to \"Not Active\""},
      {1, "ECU is up and Running", "Send CAN signal with value 0x1", "DDU shall request to put " + label + " to \"Active\""},
      {1, "ECU is up and Running", "Send CAN signal with value 0x2", "DDU shall set notification " + label + " to \"Not Active\""},
  };
  const bool pass = rows.size() >= 3 && std::equal(want.begin(), want.end(), rows.begin());
  return {pass, pass ? "static rows verbatim" : "static rows differ"};
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str() + err.str()};
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = corpus::read_file(e.path());
  }
  return files;
}

Outcome determinism() {
  std::vector<std::map<std::string, std::string>> runs;
  std::vector<std::string> outputs;
  for (int r = 0; r < 2; ++r) {
    const auto root = fs::temp_directory_path() / ("req2tc_acceptance_" + std::to_string(r));
    fs::remove_all(root);
    fs::create_directories(root);
    const auto c = (root / "corpus").string(), rep = (root / "report.json").string();
    std::string log;
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"synth", "--seed", "42", "--out", c},
             {"evaluate", "--corpus", c, "--seed", "42", "--out", rep},
             {"compare", "--reports", rep, rep, "--out", (root / "compare.json").string()}}) {
      const auto run = cli_run(args);
      if (run.code != 0) return {false, args[0] + " exited " + std::to_string(run.code) + ": " + run.out};
      log += run.out;
    }
    auto files = snapshot(root);
    runs.push_back(std::move(files));
    // Paths differ between runs; blank them before comparing stdout.
    for (std::size_t at; (at = log.find(root.string())) != std::string::npos;) log.replace(at, root.string().size(), "ROOT");
    outputs.push_back(log);
    fs::remove_all(root);
  }
  const bool same = runs[0] == runs[1] && outputs[0] == outputs[1];
  return {same, std::to_string(runs[0].size()) + " files " + (same ? "byte-identical" : "differ")};
}

Outcome round_trips() {
  const auto& c = canonical();
  std::size_t docs = 0, csvs = 0;
  for (const auto& d : c.documents) docs += doc::parse_document(doc::serialize_document(d)) == d;
  const bool annotations = ner::parse_jsonl(ner::to_jsonl(c.annotations)) == c.annotations;
  std::size_t suites = 0;
  for (const auto& g : c.gold) {
    for (const auto& s : g.suites) {
      ++suites;
      std::vector<std::vector<std::string>> want = {{"Test case", "Pre condition", s.signal_column, "Expected Output"}};
      for (const auto& r : s.rows) want.push_back({std::to_string(r.test_case_id), r.precondition, r.step, r.expected_output});
      csvs += csv::parse(tc::to_csv(s)) == want;
    }
  }
  const auto dir = fs::temp_directory_path() / "req2tc_acceptance_roundtrip";
  fs::remove_all(dir);
  corpus::save_corpus(c, dir);
  const bool saved = corpus::load_corpus(dir) == c;
  fs::remove_all(dir);
  const bool pass = docs == c.documents.size() && annotations && csvs == suites && saved;
  return {pass, std::to_string(docs) + "/" + std::to_string(c.documents.size()) + " documents, annotations " +
                    (annotations ? "equal" : "differ") + ", " + std::to_string(csvs) + "/" + std::to_string(suites) +
                    " CSVs, corpus save/load " + (saved ? "equal" : "differs")};
}

}  // namespace

// --known-failure N (repeatable) keeps the exit status 0 when only the listed
// criteria fail. Their FAIL lines are still printed.
int main(int argc, char** argv) {
  std::set<std::size_t> known;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--known-failure" && i + 1 < argc) {
      known.insert(static_cast<std::size_t>(std::stoul(argv[++i])));
    } else {
      std::fprintf(stderr, "usage: acceptance [--known-failure N]...\n");
      return 2;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"rule-path exactness", rule_path_exactness},
      {"category degradation ordering", category_ordering},
      {"NER ordering", ner_ordering},
      {"metrics oracle", metrics_oracle},
      {"Mann-Whitney exactness", mann_whitney_exactness},
      {"z-test sanity", z_test_sanity},
      {"fold invariants", fold_invariants},
      {"static case fidelity", figure_fidelity},
      {"determinism", determinism},
      {"round-trips", round_trips},
  };
  int failed = 0, unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    unexpected += !o.pass && !known.count(i + 1);
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed", failed, criteria.size());
  if (!known.empty()) std::printf(", %d outside the known-failure list", unexpected);
  std::printf("\n");
  return unexpected == 0 ? 0 : 1;
}
