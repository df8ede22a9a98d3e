#include "req2tc/tc_gen.hpp"

#include <fstream>
#include <map>

#include "req2tc/csv.hpp"
#include "req2tc/error.hpp"

namespace req2tc::tc {
namespace {

void check_complete(const std::vector<rules::SignalBinding>& bindings, const doc::CanSignalSpec& spec) {
  bool ok = bindings.size() == spec.value_table.size();
  for (std::size_t i = 0; ok && i < bindings.size(); ++i) {
    ok = bindings[i].assignments.size() == 1 && bindings[i].assignments.front().second == spec.value_table[i];
  }
  if (!ok) {
    throw Error(ErrorCode::IncompleteBindings,
                "bindings do not cover the value table of " + spec.name + " in table order");
  }
}

TestCaseRow make_row(int id, std::string_view precondition, const doc::HexValue& value, std::string expected) {
  return {id, std::string(precondition), step_for(value), std::move(expected)};
}

}  // namespace

RenderedExpected render_expected(std::string_view action) {
  constexpr std::string_view sep = " is ";
  const auto at = action.rfind(sep);
  if (at == std::string_view::npos || at == 0 || at + sep.size() >= action.size()) {
    throw Error(ErrorCode::UnparseableAction, "no '<label> is <state>' in '" + std::string(action) + "'");
  }
  RenderedExpected r;
  r.label = std::string(action.substr(0, at));
  r.state = std::string(action.substr(at + sep.size()));
  if (r.state == "Active") {
    r.phrasing = Phrasing::REQUEST_ACTIVE;
    r.text = "DDU shall request to put \"" + r.label + "\" to \"Active\"";
  } else {
    r.phrasing = Phrasing::SET_NOTIFICATION;
    r.text = "DDU shall set notification \"" + r.label + "\" to \"" + r.state + "\"";
  }
  return r;
}

std::string step_for(const doc::HexValue& value) { return "Send CAN signal with value " + value.canonical(); }

std::vector<TestCaseRow> generate_static_case(const std::vector<rules::SignalBinding>& bindings,
                                              const doc::CanSignalSpec& spec, std::string_view precondition) {
  check_complete(bindings, spec);
  std::vector<TestCaseRow> rows;
  for (const auto& b : bindings) {
    rows.push_back(make_row(1, precondition, b.assignments.front().second, render_expected(b.expected_output).text));
  }
  return rows;
}

std::vector<TestCaseRow> generate_toggle_case(const std::vector<rules::SignalBinding>& bindings,
                                              const doc::CanSignalSpec& spec, std::string_view precondition) {
  check_complete(bindings, spec);
  std::vector<RenderedExpected> rendered;
  for (const auto& b : bindings) rendered.push_back(render_expected(b.expected_output));

  std::size_t active = bindings.size();
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    if (rendered[i].phrasing == Phrasing::REQUEST_ACTIVE) {
      active = i;
      break;
    }
  }
  if (active == bindings.size()) throw Error(ErrorCode::NoActiveValue, "no value of " + spec.name + " is Active");

  // The probe's output: most frequent non-Active rendering, ties to the lowest value.
  std::map<std::string, std::size_t> frequency;
  for (const auto& r : rendered) {
    if (r.phrasing != Phrasing::REQUEST_ACTIVE) ++frequency[r.text];
  }
  if (frequency.empty()) throw Error(ErrorCode::NoInactiveValue, "every value of " + spec.name + " is Active");
  std::string fallback;
  std::size_t best = 0;
  for (const auto& r : rendered) {
    if (r.phrasing == Phrasing::REQUEST_ACTIVE) continue;
    if (frequency[r.text] > best) {
      best = frequency[r.text];
      fallback = r.text;
    }
  }

  const auto& active_value = bindings[active].assignments.front().second;
  const auto& active_text = rendered[active].text;
  std::vector<TestCaseRow> rows;
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    if (rendered[i].phrasing == Phrasing::REQUEST_ACTIVE) continue;
    rows.push_back(make_row(2, precondition, bindings[i].assignments.front().second, rendered[i].text));
    rows.push_back(make_row(2, precondition, active_value, active_text));
  }
  rows.push_back(make_row(2, precondition, doc::HexValue(spec.range_max + 1), fallback));
  rows.push_back(make_row(2, precondition, active_value, active_text));

  std::size_t lowest = 0;
  for (std::size_t i = 1; i < bindings.size(); ++i) {
    if (spec.value_table[i] < spec.value_table[lowest]) lowest = i;
  }
  rows.push_back(make_row(2, precondition, spec.value_table[lowest], rendered[lowest].text));
  return rows;
}

std::string to_csv(const TestSuite& suite) {
  std::string out = csv::format_row({"Test case", "Pre condition", suite.signal_column, "Expected Output"});
  for (const auto& r : suite.rows) {
    out += csv::format_row({std::to_string(r.test_case_id), r.precondition, r.step, r.expected_output});
  }
  return out;
}

void export_csv(const TestSuite& suite, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  out << to_csv(suite);
  if (!out.flush()) throw Error(ErrorCode::IoError, "write to " + path + " failed");
}

}  // namespace req2tc::tc
