#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "req2tc/cli.hpp"
#include "req2tc/corpus.hpp"
#include "req2tc/csv.hpp"

using namespace req2tc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("req2tc_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string fold_report(const std::string& backend, double base) {
  nlohmann::ordered_json j;
  j["cv"] = nlohmann::ordered_json::array();
  nlohmann::ordered_json cv;
  cv["backend"] = backend;
  cv["per_fold"] = nlohmann::ordered_json::array();
  for (int f = 0; f < 10; ++f) cv["per_fold"].push_back({{"accuracy", base + 0.01 * f}});
  j["cv"].push_back(cv);
  return j.dump();
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"synth"}).code == 2);
  CHECK(run({"synth", "--out", scratch("x").string(), "--bogus"}).code == 2);
  CHECK(run({"synth", "--docs", "0", "--out", scratch("zero").string()}).code == 2);
  CHECK(run({"synth", "--noise", "2", "--out", scratch("noise").string()}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("synth is repeatable and honours REQ2TC_SEED") {
  const auto a = scratch("synth_a"), b = scratch("synth_b"), c = scratch("synth_c");
  REQUIRE(run({"synth", "--docs", "8", "--sentences", "20", "--seed", "5", "--out", a.string()}).code == 0);
  REQUIRE(run({"synth", "--docs", "8", "--sentences", "20", "--seed", "5", "--out", b.string()}).code == 0);
  for (const auto& name : {"manifest.json", "annotations.jsonl", "gold_bindings.jsonl"}) {
    CHECK(corpus::read_file(a / name) == corpus::read_file(b / name));
  }
  ::setenv("REQ2TC_SEED", "5", 1);
  const auto r = run({"synth", "--docs", "8", "--sentences", "20", "--seed", "99", "--out", c.string()});
  ::unsetenv("REQ2TC_SEED");
  REQUIRE(r.code == 0);
  CHECK(corpus::read_file(c / "annotations.jsonl") == corpus::read_file(a / "annotations.jsonl"));
  ::setenv("REQ2TC_SEED", "abc", 1);
  CHECK(run({"synth", "--out", c.string()}).code == 2);
  ::unsetenv("REQ2TC_SEED");
  for (const auto& p : {a, b, c}) fs::remove_all(p);
}

TEST_CASE("generate writes one CSV per signal and a summary") {
  const auto out = scratch("gen");
  const auto r = run({"generate", "--input", fixtures::data_path("vehicle_speed_check.txt"), "--out", out.string(),
                      "--emit-intermediate"});
  REQUIRE(r.code == 0);
  const auto table = csv::parse(corpus::read_file(out / "FE-VSC__T.DYN2.VehicleSpeedCheck.csv"));
  REQUIRE(table.size() == 11);
  CHECK(table[0][2] == "T.DYN2.VehicleSpeedCheck");
  CHECK(table[1] == std::vector<std::string>{"1", "ECU is up and Running", "Send CAN signal with value 0x0",
                                             "DDU shall set notification \"MPG302 - Vehicle Speed Check\" to \"Not Active\""});
  CHECK(table[2][3] == "DDU shall request to put \"MPG302 - Vehicle Speed Check\" to \"Active\"");
  const auto summary = nlohmann::json::parse(corpus::read_file(out / "summary.json"));
  CHECK(summary["method"] == "RULE");
  CHECK(summary["documents"][0]["id"] == "FE-VSC");
  CHECK(summary["documents"][0]["extraction_errors"].empty());
  CHECK(fs::exists(out / "FE-VSC.intermediate.json"));
  fs::remove_all(out);
}

TEST_CASE("generate exit codes") {
  const auto out = scratch("gen_codes");
  CHECK(run({"generate", "--input", fixtures::data_path("vehicle_speed_check.txt"), "--method", "ner", "--out",
             out.string()})
            .code == 2);
  const auto broken = scratch("broken_docs");
  fs::create_directories(broken);
  corpus::write_file(broken / "a.txt", corpus::read_file(fixtures::data_path("vehicle_speed_check.txt")));
  corpus::write_file(broken / "b.txt", "no header here\n");
  const auto r = run({"generate", "--input", broken.string(), "--out", out.string()});
  CHECK(r.code == 1);
  CHECK(fs::exists(out / "FE-VSC__T.DYN2.VehicleSpeedCheck.csv"));
  CHECK(run({"generate", "--input", (broken / "missing.txt").string(), "--out", out.string()}).code == 1);
  for (const auto& p : {out, broken}) fs::remove_all(p);
}

TEST_CASE("noise-free corpus scores 1 against its own gold") {
  const auto c = scratch("gen_gold"), out = scratch("gen_gold_out");
  REQUIRE(run({"synth", "--docs", "10", "--noise", "0", "--mix", "1,0,0", "--out", c.string()}).code == 0);
  REQUIRE(run({"generate", "--input", c.string(), "--gold", c.string(), "--out", out.string()}).code == 0);
  const auto summary = nlohmann::json::parse(corpus::read_file(out / "summary.json"));
  REQUIRE(summary["documents"].size() == 10);
  for (const auto& d : summary["documents"]) CHECK(d["suite_accuracy"].get<double>() == 1.0);
  for (const auto& p : {c, out}) fs::remove_all(p);
}

TEST_CASE("train, then generate with the NER model") {
  const auto c = scratch("ner_corpus"), out = scratch("ner_out"), model = scratch("model.txt");
  REQUIRE(run({"synth", "--docs", "20", "--sentences", "80", "--noise", "0", "--out", c.string()}).code == 0);
  CHECK(run({"train", "--corpus", c.string(), "--backend", "nope", "--out", model.string()}).code == 2);
  REQUIRE(run({"train", "--corpus", c.string(), "--backend", "dt", "--out", model.string()}).code == 0);
  const auto r = run({"generate", "--input", c.string(), "--method", "ner", "--model", model.string(), "--out",
                      out.string(), "--gold", c.string()});
  REQUIRE(r.code == 0);
  const auto summary = nlohmann::json::parse(corpus::read_file(out / "summary.json"));
  CHECK(summary["method"] == "NER");
  CHECK(summary["documents"].size() == 20);
  for (const auto& p : {c, out, model}) fs::remove_all(p);
}

TEST_CASE("evaluate prints a four-row table and repeats exactly") {
  const auto c = scratch("eval_corpus");
  const auto r1 = scratch("eval1.json"), r2 = scratch("eval2.json"), t1 = scratch("eval1.txt");
  REQUIRE(run({"synth", "--docs", "12", "--sentences", "40", "--out", c.string()}).code == 0);
  CHECK(run({"evaluate", "--corpus", c.string(), "--folds", "1"}).code == 2);
  CHECK(run({"evaluate", "--corpus", c.string(), "--backends", "svm,xgb"}).code == 2);
  CHECK(run({"evaluate"}).code == 2);
  const auto a = run({"evaluate", "--corpus", c.string(), "--folds", "4", "--out", r1.string(), "--table", t1.string()});
  REQUIRE(a.code == 0);
  const auto b = run({"evaluate", "--corpus", c.string(), "--folds", "4", "--out", r2.string()});
  CHECK(a.out == b.out);
  CHECK(corpus::read_file(r1) == corpus::read_file(r2));
  CHECK(corpus::read_file(t1) == a.out);
  for (const char* name : {"SVM", "Random Forest", "Decision Tree Classifier", "Gradient Boosting Classifier"}) {
    CHECK(a.out.find(name) != std::string::npos);
  }
  const auto report = nlohmann::json::parse(corpus::read_file(r1));
  CHECK(report["cv"].size() == 4);
  CHECK(report["cv"][0]["per_fold"].size() == 4);
  CHECK(report["tests"].size() == 3);
  CHECK(report["category_table"].size() == 3);
  for (const auto& p : {c, r1, r2, t1}) fs::remove_all(p);
}

TEST_CASE("compare") {
  const auto svm = scratch("svm.json"), dt = scratch("dt.json"), short_report = scratch("short.json");
  corpus::write_file(svm, fold_report("SVM", 0.90));
  corpus::write_file(dt, fold_report("DECISION_TREE", 0.10));

  auto r = run({"compare", "--reports", svm.string(), dt.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("MANN_WHITNEY_EXACT") != std::string::npos);
  CHECK(r.out.find("(1/184756)") != std::string::npos);
  CHECK(r.out.find("-> reject") != std::string::npos);

  r = run({"compare", "--reports", svm.string(), svm.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("fail to reject") != std::string::npos);

  r = run({"compare", "--proportions", "50/100", "50/100", "--alternative", "two-sided"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("statistic=0.0000 p=1 ") != std::string::npos);

  nlohmann::json s = nlohmann::json::parse(fold_report("RF", 0.5));
  s["cv"][0]["per_fold"].erase(0);
  corpus::write_file(short_report, s.dump());
  CHECK(run({"compare", "--reports", svm.string(), short_report.string()}).code == 2);
  CHECK(run({"compare", "--reports", svm.string()}).code == 2);
  CHECK(run({"compare"}).code == 2);
  CHECK(run({"compare", "--proportions", "5/10"}).code == 2);
  CHECK(run({"compare", "--proportions", "11/10", "5/10"}).code == 2);
  CHECK(run({"compare", "--proportions", "5/10", "5/10", "--alternative", "up"}).code == 2);
  for (const auto& p : {svm, dt, short_report}) fs::remove_all(p);
}
