#include "req2tc/pipeline.hpp"

#include <map>

namespace req2tc::pipeline {
namespace {

template <typename Extract>
DocumentResult run(const doc::FeatureElementDocument& document, Extract extract) {
  DocumentResult result;
  result.document_id = document.id;
  for (std::size_t i = 0; i < document.requirement_sentences.size(); ++i) {
    SentenceOutcome outcome;
    outcome.index = i;
    try {
      outcome.pair = req::split_condition_action(document.requirement_sentences[i], i);
      outcome.binding = extract(*outcome.pair);
    } catch (const Error& e) {
      outcome.error = e.code();
      outcome.message = e.what();
    }
    result.sentences.push_back(std::move(outcome));
  }
  result.suites = generate_suites(document, bindings_of(result), &result.issues);
  return result;
}

}  // namespace

std::vector<rules::SignalBinding> bindings_of(const DocumentResult& result) {
  std::vector<rules::SignalBinding> out;
  for (const auto& s : result.sentences) {
    if (s.binding) out.push_back(*s.binding);
  }
  return out;
}

std::vector<tc::TestSuite> generate_suites(const doc::FeatureElementDocument& document,
                                           const std::vector<rules::SignalBinding>& bindings,
                                           std::vector<SuiteIssue>* issues) {
  auto report = [&](std::string signal, ErrorCode code, std::string message) {
    if (issues) issues->push_back({std::move(signal), code, std::move(message)});
  };

  // Resolve every assigned name to its table entry; bindings with an
  // unresolvable name are dropped as a whole.
  struct Resolved {
    const rules::SignalBinding* binding;
    std::vector<std::size_t> specs;  // parallel to binding->assignments
  };
  std::vector<Resolved> resolved;
  std::map<std::size_t, std::string> full_name;
  for (const auto& b : bindings) {
    Resolved r{&b, {}};
    bool ok = true;
    for (const auto& [name, value] : b.assignments) {
      std::optional<doc::CanSignalSpec> spec;
      try {
        spec = doc::resolve_signal(document, name);
      } catch (const Error& e) {
        report(name, e.code(), e.what());
        ok = false;
        break;
      }
      if (!spec) {
        report(name, ErrorCode::UnknownSignal, "'" + name + "' is not a declared CAN input");
        ok = false;
        break;
      }
      std::size_t at = 0;
      while (document.can_inputs[at].name != spec->name) ++at;
      r.specs.push_back(at);
    }
    if (!ok) continue;
    for (std::size_t k = 0; k < r.specs.size(); ++k) full_name.emplace(r.specs[k], b.assignments[k].first);
    resolved.push_back(std::move(r));
  }

  std::vector<tc::TestSuite> suites;
  for (std::size_t s = 0; s < document.can_inputs.size(); ++s) {
    const auto named = full_name.find(s);
    if (named == full_name.end()) continue;
    const auto& spec = document.can_inputs[s];
    const std::string& column = named->second;

    std::vector<rules::SignalBinding> single;
    for (const auto& r : resolved) {
      const auto& b = *r.binding;
      std::optional<doc::HexValue> own;
      bool others_at_first = true;
      for (std::size_t k = 0; k < r.specs.size(); ++k) {
        if (r.specs[k] == s) {
          own = b.assignments[k].second;
        } else {
          others_at_first = others_at_first &&
                            b.assignments[k].second == document.can_inputs[r.specs[k]].value_table.front();
        }
      }
      if (!own) continue;
      const bool projectable = r.specs.size() == 1 ||
                               (b.conjunction == rules::Conjunction::AND && others_at_first &&
                                *own != spec.value_table.front());
      if (projectable) single.push_back({{{column, *own}}, b.expected_output, rules::Conjunction::NONE});
    }
    if (single.empty()) {
      report(column, ErrorCode::IncompleteBindings, "no binding isolates " + column);
      continue;
    }

    std::string precondition(tc::kDefaultPrecondition);
    bool first_other = true;
    for (std::size_t o = 0; o < document.can_inputs.size(); ++o) {
      if (o == s) continue;
      const auto other = full_name.find(o);
      precondition += first_other ? "; " : ", ";
      precondition += (other != full_name.end() ? other->second : document.can_inputs[o].name) + "=" +
                      document.can_inputs[o].value_table.front().canonical();
      first_other = false;
    }

    tc::TestSuite suite;
    suite.signal_column = column;
    suite.source_document_id = document.id;
    try {
      const auto completed = rules::complete_value_table(single, spec);
      suite.rows = tc::generate_static_case(completed, spec, precondition);
      try {
        auto toggle = tc::generate_toggle_case(completed, spec, precondition);
        suite.rows.insert(suite.rows.end(), toggle.begin(), toggle.end());
      } catch (const Error& e) {
        report(column, e.code(), e.what());
      }
    } catch (const Error& e) {
      report(column, e.code(), e.what());
      continue;
    }
    suites.push_back(std::move(suite));
  }
  return suites;
}

DocumentResult run_rule(const doc::FeatureElementDocument& document) {
  return run(document, [&](const req::ConditionActionPair& p) { return rules::extract_binding(p, document); });
}

DocumentResult run_ner(const doc::FeatureElementDocument& document, const ner::ClassifierModel& model) {
  return run(document, [&](const req::ConditionActionPair& p) { return ner::extract_binding_ner(p, model); });
}

}  // namespace req2tc::pipeline
