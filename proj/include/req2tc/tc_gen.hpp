#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "req2tc/doc_model.hpp"
#include "req2tc/rule_extractor.hpp"

namespace req2tc::tc {

inline constexpr std::string_view kDefaultPrecondition = "ECU is up and Running";

enum class Phrasing { REQUEST_ACTIVE, SET_NOTIFICATION };

struct RenderedExpected {
  std::string label;
  std::string state;
  Phrasing phrasing = Phrasing::SET_NOTIFICATION;
  std::string text;
};

/// "<label> is <state>" -> DDU phrasing. Splits at the last " is ".
/// Throws UnparseableAction.
RenderedExpected render_expected(std::string_view action);

struct TestCaseRow {
  int test_case_id = 1;
  std::string precondition;
  std::string step;
  std::string expected_output;

  friend bool operator==(const TestCaseRow&, const TestCaseRow&) = default;
};

struct TestSuite {
  std::string signal_column;
  std::vector<TestCaseRow> rows;
  std::string source_document_id;

  friend bool operator==(const TestSuite&, const TestSuite&) = default;
};

std::string step_for(const doc::HexValue& value);

/// Test case 1: one row per value-table entry. `bindings` must be the
/// complete_value_table output for `spec` (throws IncompleteBindings).
std::vector<TestCaseRow> generate_static_case(const std::vector<rules::SignalBinding>& bindings,
                                              const doc::CanSignalSpec& spec,
                                              std::string_view precondition = kDefaultPrecondition);

/// Test case 2: each non-Active value toggled against the first Active one,
/// then an out-of-range probe (range_max + 1), the Active value and the
/// lowest table value. Throws NoActiveValue / NoInactiveValue.
std::vector<TestCaseRow> generate_toggle_case(const std::vector<rules::SignalBinding>& bindings,
                                              const doc::CanSignalSpec& spec,
                                              std::string_view precondition = kDefaultPrecondition);

std::string to_csv(const TestSuite& suite);
/// Throws IoError.
void export_csv(const TestSuite& suite, const std::string& path);

}  // namespace req2tc::tc
