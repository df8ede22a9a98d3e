#include <doctest.h>

#include "fixtures.hpp"
#include "req2tc/eval.hpp"
#include "req2tc/pipeline.hpp"

using namespace req2tc;
using doc::HexValue;

namespace {

doc::FeatureElementDocument two_signal_document() {
  doc::FeatureElementDocument d;
  d.id = "FE-2";
  d.can_inputs = {{"A", 0, 1, {HexValue(0), HexValue(1)}}, {"B", 0, 2, {HexValue(0), HexValue(1), HexValue(2)}}};
  d.requirement_sentences = {
      "if T.X.A has value 0x0 then L is Off",
      "if T.X.A has value 0x1 and T.X.B has value 0x0 then L is Active",
      "if T.X.B has value 0x0 then M is Off",
      "If T.X.B has value 0x1 and T.X.A has value 0x0, then M is Active.",
      "if T.X.B has value 0x2 and T.X.A has value 0x1 then M is On",
      "The lamp is red.",
  };
  return d;
}

std::vector<std::string> column(const tc::TestSuite& s, int which) {
  std::vector<std::string> out;
  for (const auto& r : s.rows) {
    if (r.test_case_id != 1) continue;
    out.push_back(which == 0 ? r.step : which == 1 ? r.expected_output : r.precondition);
  }
  return out;
}

}  // namespace

TEST_CASE("rule path on the single-signal example") {
  const auto d = fixtures::vehicle_speed_check();
  const auto result = pipeline::run_rule(d);
  CHECK(result.document_id == "FE-VSC");
  REQUIRE(result.sentences.size() == 3);
  for (const auto& s : result.sentences) CHECK_FALSE(s.error);
  CHECK(result.issues.empty());
  REQUIRE(result.suites.size() == 1);
  const auto& suite = result.suites[0];
  CHECK(suite.signal_column == "T.DYN2.VehicleSpeedCheck");
  CHECK(suite.source_document_id == "FE-VSC");
  CHECK(suite.rows.size() == 3 + 7);
  CHECK(eval::categorize_document(d) == 1);
}

TEST_CASE("multi-signal projection holds the other signals at their first value") {
  const auto d = two_signal_document();
  const auto result = pipeline::run_rule(d);
  REQUIRE(result.sentences.back().error);
  CHECK(*result.sentences.back().error == ErrorCode::MalformedRequirement);
  REQUIRE(result.suites.size() == 2);

  const auto& a = result.suites[0];
  CHECK(a.signal_column == "T.X.A");
  CHECK(column(a, 0) == std::vector<std::string>{"Send CAN signal with value 0x0", "Send CAN signal with value 0x1"});
  CHECK(column(a, 1) == std::vector<std::string>{"DDU shall set notification \"L\" to \"Off\"",
                                                 "DDU shall request to put \"L\" to \"Active\""});
  for (const auto& p : column(a, 2)) CHECK(p == "ECU is up and Running; T.X.B=0x0");

  const auto& b = result.suites[1];
  CHECK(b.signal_column == "T.X.B");
  // 0x2 is only stated with A off its first value, so it takes the default.
  CHECK(column(b, 1) == std::vector<std::string>{"DDU shall set notification \"M\" to \"Off\"",
                                                 "DDU shall request to put \"M\" to \"Active\"",
                                                 "DDU shall set notification \"M\" to \"Off\""});
  for (const auto& p : column(b, 2)) CHECK(p == "ECU is up and Running; T.X.A=0x0");
}

TEST_CASE("unresolvable and incomplete signals are reported, not fatal") {
  auto d = two_signal_document();
  d.requirement_sentences.push_back("if T.X.Z has value 0x1 then Q is On");
  const auto result = pipeline::run_rule(d);
  REQUIRE(result.sentences.back().error);
  CHECK(*result.sentences.back().error == ErrorCode::UnknownSignal);

  // A binding naming an undeclared signal is dropped as a whole.
  std::vector<pipeline::SuiteIssue> issues;
  const rules::SignalBinding b{{{"T.X.Q", HexValue(1)}}, "Q is On", rules::Conjunction::NONE};
  CHECK(pipeline::generate_suites(two_signal_document(), {b}, &issues).empty());
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].code == ErrorCode::UnknownSignal);

  // Only Off stated: no toggle case, the static case is still produced.
  issues.clear();
  const rules::SignalBinding off{{{"A", HexValue(0)}}, "L is Off", rules::Conjunction::NONE};
  const auto suites = pipeline::generate_suites(two_signal_document(), {off}, &issues);
  REQUIRE(suites.size() == 1);
  CHECK(suites[0].rows.size() == 2);
  REQUIRE(issues.size() == 1);
  CHECK(issues[0].code == ErrorCode::NoActiveValue);
}

TEST_CASE("NER path uses the model's spans") {
  ner::AnnotatedSentence a{"T.DYN2.VehicleSpeedCheck has value 0X0", {{0, 24, ner::Label::SIGNAL}, {35, 38, ner::Label::VALUE}}};
  ner::AnnotatedSentence b{"the signal T.X.Q has value 0x1", {{11, 16, ner::Label::SIGNAL}, {27, 30, ner::Label::VALUE}}};
  const auto model = ner::train(ner::Backend::DECISION_TREE, std::vector<ner::AnnotatedSentence>{a, b}, 1);
  const auto d = fixtures::vehicle_speed_check();
  const auto ner_result = pipeline::run_ner(d, model);
  const auto rule_result = pipeline::run_rule(d);
  CHECK(pipeline::bindings_of(ner_result) == pipeline::bindings_of(rule_result));
  CHECK(ner_result.suites == rule_result.suites);
}
