#include "req2tc/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "req2tc/error.hpp"
#include "req2tc/eval.hpp"
#include "req2tc/pipeline.hpp"
#include "req2tc/rng.hpp"
#include "req2tc/text.hpp"

namespace req2tc::corpus {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const std::vector<std::string> kBlocks = {"DYN", "ENG", "BRK", "TRN", "CHS", "BDY", "INF", "PWR", "CAB", "EMS"};
const std::vector<std::string> kWords = {
    "Vehicle", "Speed", "Check", "Brake", "Pedal", "Position", "Engine", "Oil",    "Pressure", "Door",
    "Lock",    "Status", "Fuel",  "Level", "Warning", "Seat",   "Belt",   "Cabin", "Heater",   "Wiper",
    "Lamp",    "Coolant", "Temp",  "Gear",  "Retarder", "Axle",  "Load",   "Tyre",  "Mirror",   "Cruise"};
const std::vector<std::string> kInactiveStates = {"Not Active", "Inactive", "Off"};

struct SignalPlan {
  std::string full_name;
  std::string table_name;
  std::string title_words;
  std::string label;
  std::size_t table_size = 2;
  std::uint64_t active = 1;
  std::vector<std::string> states;  // per value
  std::vector<bool> stated;
};

struct Clause {
  std::size_t signal;
  doc::HexValue value;
};

std::string hex_literal(Rng& rng, const doc::HexValue& v) {
  auto s = v.canonical();
  if (rng.bernoulli(0.5)) s[1] = 'X';
  return s;
}

// Renders one clause and records where the signal and value landed.
std::string render_clause(Rng& rng, double noise, const std::string& name, const std::string& value,
                          const std::vector<doc::Parameter>& parameters, std::size_t offset,
                          std::vector<ner::EntitySpan>& spans) {
  Phrasing phrasing = Phrasing::Canonical;
  if (rng.bernoulli(noise)) phrasing = static_cast<Phrasing>(1 + rng.below(4));

  std::vector<std::string> parts;  // "\x01" = signal slot, "\x02" = value slot
  const std::string sig = "\x01", val = "\x02";
  switch (phrasing) {
    case Phrasing::Canonical:
      if (rng.bernoulli(0.6)) {
        parts = {sig, " has value ", val};
      } else {
        parts = {"the signal ", sig, " has a value of ", val};
      }
      break;
    case Phrasing::IsSetTo: parts = {sig, " is set to ", val}; break;
    case Phrasing::Equals: parts = {sig, " equals ", val}; break;
    case Phrasing::ArticleVariant:
      switch (rng.below(3)) {
        case 0: parts = {"the ", sig, " has the value of ", val}; break;
        case 1: parts = {"signal ", sig, " has the value ", val}; break;
        default: parts = {"the signal ", sig, " has an value ", val}; break;
      }
      break;
    case Phrasing::OutOfRuleset:
      switch (rng.below(parameters.empty() ? 4 : 5)) {
        case 0: parts = {sig, " takes value ", val}; break;
        case 1: parts = {"the value of ", sig, " is ", val}; break;
        case 2: parts = {sig, " reads ", val}; break;
        case 3: parts = {sig, " has a value equal to ", val}; break;
        default: {
          // Qualifier on an end-of-line parameter: identifier and hex that are not entities.
          const auto& p = rng.pick(parameters);
          parts = {sig, " has value ", val, " while " + p.name + " is " + p.value};
          break;
        }
      }
      break;
  }
  std::string out;
  for (const auto& p : parts) {
    if (p == sig) {
      spans.push_back({offset + out.size(), offset + out.size() + name.size(), ner::Label::SIGNAL});
      out += name;
    } else if (p == val) {
      spans.push_back({offset + out.size(), offset + out.size() + value.size(), ner::Label::VALUE});
      out += value;
    } else {
      out += p;
    }
  }
  return out;
}

std::string camel_name(Rng& rng, std::string& title_words) {
  const int words = rng.between(2, 3);
  std::string camel;
  title_words.clear();
  std::set<std::string> used;
  for (int w = 0; w < words; ++w) {
    std::string word = rng.pick(kWords);
    while (used.count(word)) word = rng.pick(kWords);
    used.insert(word);
    camel += word;
    if (!title_words.empty()) title_words += ' ';
    title_words += word;
  }
  return camel;
}

SignalPlan plan_signal(Rng& rng, std::set<std::string>& taken) {
  SignalPlan s;
  do {
    s.table_name = camel_name(rng, s.title_words);
  } while (taken.count(s.table_name));
  taken.insert(s.table_name);
  s.full_name = "T." + rng.pick(kBlocks) + std::to_string(rng.below(10)) + "." + s.table_name;

  std::string letters;
  for (int i = 0; i < 3; ++i) letters += static_cast<char>('A' + rng.below(26));
  s.label = letters + std::to_string(100 + rng.below(900)) + " - " + s.title_words;

  s.table_size = static_cast<std::size_t>(rng.between(2, 4));
  s.active = 1 + rng.below(s.table_size - 1);
  const std::string& inactive = rng.pick(kInactiveStates);
  s.states.assign(s.table_size, inactive);
  s.states[s.active] = "Active";
  if (s.table_size >= 3 && rng.bernoulli(0.2)) {
    std::vector<std::size_t> candidates;
    for (std::size_t v = 1; v < s.table_size; ++v) {
      if (v != s.active) candidates.push_back(v);
    }
    s.states[rng.pick(candidates)] = "On";
  }
  s.stated.assign(s.table_size, true);
  if (s.table_size >= 3 && rng.bernoulli(0.3)) {
    std::vector<std::size_t> candidates;
    for (std::size_t v = 1; v < s.table_size; ++v) {
      if (s.states[v] == inactive) candidates.push_back(v);
    }
    if (!candidates.empty()) s.stated[rng.pick(candidates)] = false;
  }
  return s;
}

std::vector<int> apportion_categories(const CorpusConfig& config, Rng& rng) {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < 3; ++c) {
    const double exact = config.category_mix[c] * static_cast<double>(config.n_documents);
    counts[c] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainder[c] = exact - static_cast<double>(counts[c]);
    assigned += counts[c];
  }
  while (assigned < config.n_documents) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < 3; ++c) {
      if (remainder[c] > remainder[best]) best = c;
    }
    ++counts[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  std::vector<int> categories;
  for (std::size_t c = 0; c < 3; ++c) categories.insert(categories.end(), counts[c], static_cast<int>(c + 1));
  categories.resize(config.n_documents, 1);
  rng.shuffle(categories);
  return categories;
}

struct GeneratedDocument {
  doc::FeatureElementDocument document;
  DocumentGold gold;
};

GeneratedDocument generate_document(Rng& rng, const CorpusConfig& config, std::size_t number, int category) {
  std::size_t k = 1;
  double conjunction_rate = 0.0;
  std::size_t min_extra = 1;
  std::size_t max_extra = 0;
  if (category == 2) {
    k = static_cast<std::size_t>(rng.between(2, 4));
    conjunction_rate = 0.5;
    max_extra = 2;
  } else if (category == 3) {
    k = static_cast<std::size_t>(rng.between(5, 6));
    conjunction_rate = 1.0;
    min_extra = 3;
    max_extra = 4;
  }

  std::set<std::string> taken;
  std::vector<SignalPlan> signals;
  for (std::size_t i = 0; i < k; ++i) signals.push_back(plan_signal(rng, taken));

  GeneratedDocument out;
  auto& d = out.document;
  char id[32];
  std::snprintf(id, sizeof id, "FE-%04zu", number + 1);
  d.id = id;
  d.title = signals.front().title_words + " monitoring";
  d.introduction = "This feature element evaluates " + std::to_string(k) + " CAN signal" + (k > 1 ? "s" : "") +
                   " and drives the corresponding driver notifications.";
  const int params = rng.between(0, 2);
  for (int p = 0; p < params; ++p) {
    d.parameters.push_back({"EOL_" + signals[static_cast<std::size_t>(p) % k].table_name + "Enable",
                            rng.bernoulli(0.5) ? "0x1" : "0x0"});
  }
  for (const auto& s : signals) {
    doc::CanSignalSpec spec;
    spec.name = s.table_name;
    spec.range_min = 0;
    spec.range_max = s.table_size - 1;
    for (std::size_t v = 0; v < s.table_size; ++v) spec.value_table.emplace_back(v);
    d.can_inputs.push_back(std::move(spec));
    d.can_outputs.push_back({"DDU_" + s.label.substr(0, 6), 0, 1, {doc::HexValue(0), doc::HexValue(1)}});
  }

  auto& gold = out.gold;
  gold.category = category;
  for (std::size_t si = 0; si < k; ++si) {
    const auto& s = signals[si];
    for (std::size_t v = 0; v < s.table_size; ++v) {
      if (!s.stated[v]) continue;
      std::vector<Clause> clauses{{si, doc::HexValue(v)}};
      if (k > 1 && v != 0 && rng.bernoulli(conjunction_rate)) {
        std::vector<std::size_t> others;
        for (std::size_t o = 0; o < k; ++o) {
          if (o != si) others.push_back(o);
        }
        rng.shuffle(others);
        const auto extra = static_cast<std::size_t>(
            rng.between(static_cast<int>(min_extra), static_cast<int>(std::min(max_extra, k - 1))));
        for (std::size_t e = 0; e < extra; ++e) clauses.push_back({others[e], doc::HexValue(0)});
      }

      ner::AnnotatedSentence condition;
      rules::SignalBinding binding;
      const bool collective = clauses.size() >= 3 && rng.bernoulli(config.noise_level);
      for (std::size_t c = 0; c < clauses.size(); ++c) {
        const auto& plan = signals[clauses[c].signal];
        binding.assignments.emplace_back(plan.full_name, clauses[c].value);
        if (collective && c > 0) continue;
        if (c) condition.text += " and ";
        condition.text += render_clause(rng, config.noise_level, plan.full_name, hex_literal(rng, clauses[c].value),
                                        d.parameters, condition.text.size(), condition.spans);
      }
      if (collective) {
        // Siblings held at their first value, named together with one shared value.
        condition.text += " and ";
        for (std::size_t c = 1; c < clauses.size(); ++c) {
          if (c > 1) condition.text += c + 1 == clauses.size() ? " and " : ", ";
          const auto& name = signals[clauses[c].signal].full_name;
          condition.spans.push_back({condition.text.size(), condition.text.size() + name.size(), ner::Label::SIGNAL});
          condition.text += name;
        }
        condition.text += " have value ";
        const auto held = hex_literal(rng, clauses[1].value);
        condition.spans.push_back({condition.text.size(), condition.text.size() + held.size(), ner::Label::VALUE});
        condition.text += held;
      }
      binding.conjunction = clauses.size() > 1 ? rules::Conjunction::AND : rules::Conjunction::NONE;
      binding.expected_output = s.label + " is " + s.states[v];

      const std::string sentence = rng.bernoulli(0.5)
                                       ? "if " + condition.text + " then " + binding.expected_output
                                       : "If " + condition.text + ", then " + binding.expected_output + ".";
      d.requirement_sentences.push_back(sentence);
      gold.bindings.push_back(std::move(binding));
      gold.conditions.push_back(std::move(condition));
    }
  }
  gold.suites = pipeline::generate_suites(d, gold.bindings);
  return out;
}

ordered_json binding_json(const std::string& document, std::size_t sentence, const rules::SignalBinding& b) {
  ordered_json j;
  j["document"] = document;
  j["sentence"] = sentence;
  j["assignments"] = ordered_json::array();
  for (const auto& [name, value] : b.assignments) j["assignments"].push_back({name, value.canonical()});
  j["conjunction"] = std::string(rules::to_string(b.conjunction));
  j["expected_output"] = b.expected_output;
  return j;
}

}  // namespace

void CorpusConfig::validate() const {
  if (n_documents == 0) throw Error(ErrorCode::InvalidConfig, "n_documents must be positive");
  if (sentences_target == 0) throw Error(ErrorCode::InvalidConfig, "sentences_target must be positive");
  double sum = 0.0;
  for (double p : category_mix) {
    if (!(p >= 0.0)) throw Error(ErrorCode::InvalidConfig, "category proportions must be non-negative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error(ErrorCode::InvalidConfig, "category proportions must sum to 1");
  if (!(noise_level >= 0.0 && noise_level <= 1.0)) throw Error(ErrorCode::InvalidConfig, "noise_level outside [0,1]");
}

Corpus generate_corpus(const CorpusConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const auto categories = apportion_categories(config, rng);

  Corpus corpus;
  for (std::size_t i = 0; i < config.n_documents; ++i) {
    auto generated = generate_document(rng, config, i, categories[i]);
    corpus.documents.push_back(std::move(generated.document));
    corpus.gold.push_back(std::move(generated.gold));
  }

  std::vector<const ner::AnnotatedSentence*> all;
  for (const auto& g : corpus.gold) {
    for (const auto& c : g.conditions) all.push_back(&c);
  }
  std::vector<std::size_t> chosen(all.size());
  std::iota(chosen.begin(), chosen.end(), std::size_t{0});
  if (chosen.size() > config.sentences_target) {
    Rng pick(derive_seed(config.seed, 1));
    pick.shuffle(chosen);
    chosen.resize(config.sentences_target);
    std::sort(chosen.begin(), chosen.end());
  }
  for (auto i : chosen) corpus.annotations.push_back(*all[i]);
  return corpus;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  if (!out.flush()) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

void save_corpus(const Corpus& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "documents", ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + (dir / "documents").string() + ": " + ec.message());

  ordered_json manifest;
  manifest["documents"] = ordered_json::array();
  std::string gold_lines;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& d = corpus.documents[i];
    const std::string rel = "documents/" + d.id + ".txt";
    write_file(dir / rel, doc::serialize_document(d));
    ordered_json entry;
    entry["id"] = d.id;
    entry["category"] = i < corpus.gold.size() ? corpus.gold[i].category : 0;
    entry["path"] = rel;
    manifest["documents"].push_back(std::move(entry));
    if (i < corpus.gold.size()) {
      for (std::size_t s = 0; s < corpus.gold[i].bindings.size(); ++s) {
        gold_lines += binding_json(d.id, s, corpus.gold[i].bindings[s]).dump() + "\n";
      }
    }
  }
  manifest["annotations"] = "annotations.jsonl";
  manifest["gold_bindings"] = "gold_bindings.jsonl";
  write_file(dir / "annotations.jsonl", ner::to_jsonl(corpus.annotations));
  write_file(dir / "gold_bindings.jsonl", gold_lines);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

Corpus load_corpus(const fs::path& dir) {
  Corpus corpus;
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, "manifest.json: " + std::string(e.what()));
  }

  std::map<std::string, std::size_t> index;
  try {
    for (const auto& entry : manifest.at("documents")) {
      const auto path = entry.at("path").get<std::string>();
      auto d = doc::parse_document(read_file(dir / path));
      if (d.id != entry.at("id").get<std::string>()) {
        throw Error(ErrorCode::FormatError, path + ": id does not match manifest");
      }
      index[d.id] = corpus.documents.size();
      DocumentGold g;
      g.category = entry.at("category").get<int>();
      corpus.documents.push_back(std::move(d));
      corpus.gold.push_back(std::move(g));
    }
    corpus.annotations = ner::parse_jsonl(read_file(dir / manifest.at("annotations").get<std::string>()));

    const auto gold_text = read_file(dir / manifest.at("gold_bindings").get<std::string>());
    const auto lines = text::lines(gold_text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
      if (text::trim(lines[ln]).empty()) continue;
      const std::string where = "gold_bindings.jsonl line " + std::to_string(ln + 1) + ": ";
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(lines[ln]);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::FormatError, where + e.what());
      }
      const auto it = index.find(j.at("document").get<std::string>());
      if (it == index.end()) throw Error(ErrorCode::FormatError, where + "unknown document");
      rules::SignalBinding b;
      for (const auto& a : j.at("assignments")) {
        b.assignments.emplace_back(a.at(0).get<std::string>(), doc::parse_hex_value(a.at(1).get<std::string>()));
      }
      b.conjunction = rules::conjunction_from_string(j.at("conjunction").get<std::string>());
      b.expected_output = j.at("expected_output").get<std::string>();
      auto& g = corpus.gold[it->second];
      if (j.at("sentence").get<std::size_t>() != g.bindings.size()) {
        throw Error(ErrorCode::FormatError, where + "sentences out of order");
      }
      g.bindings.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("corpus metadata: ") + e.what());
  }

  // Condition annotations per sentence are recovered from the documents.
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& d = corpus.documents[i];
    auto& g = corpus.gold[i];
    for (std::size_t s = 0; s < d.requirement_sentences.size() && s < g.bindings.size(); ++s) {
      ner::AnnotatedSentence a;
      a.text = req::split_condition_action(d.requirement_sentences[s], s).condition;
      const auto tokens = req::tokenize(a.text);
      const auto& assignments = g.bindings[s].assignments;
      const auto is_name = [&](const std::string& t) {
        return std::any_of(assignments.begin(), assignments.end(), [&](const auto& kv) { return kv.first == t; });
      };
      std::size_t cursor = 0;
      for (const auto& [name, value] : assignments) {
        for (; cursor < tokens.size(); ++cursor) {
          if (tokens[cursor].text == name) {
            a.spans.push_back({tokens[cursor].start, tokens[cursor].end, ner::Label::SIGNAL});
            ++cursor;
            break;
          }
        }
        // "A, B and C have value V": only the last name is followed by the value.
        for (; cursor < tokens.size(); ++cursor) {
          if (is_name(tokens[cursor].text)) break;
          if (tokens[cursor].tag == req::Tag::HEX && doc::parse_hex_value(tokens[cursor].text) == value) {
            a.spans.push_back({tokens[cursor].start, tokens[cursor].end, ner::Label::VALUE});
            ++cursor;
            break;
          }
        }
      }
      g.conditions.push_back(std::move(a));
    }
    g.suites = pipeline::generate_suites(d, g.bindings);
  }
  return corpus;
}

}  // namespace req2tc::corpus
