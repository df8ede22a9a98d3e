#include "req2tc/doc_model.hpp"

#include <array>
#include <charconv>
#include <set>
#include <sstream>

#include "req2tc/error.hpp"
#include "req2tc/text.hpp"

namespace req2tc::doc {
namespace {

int hex_digit(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

enum class Section { Introduction, Parameters, CanInputs, CanOutputs, Requirements };

constexpr std::array<std::string_view, 5> kSectionNames = {
    "Introduction", "Parameters", "CAN Signal Inputs", "CAN Signal Outputs", "Requirements"};

constexpr std::string_view kTableHeader = "CAN Signal | Range | Value table";

std::string located(std::size_t line_no, std::string_view what) {
  return "line " + std::to_string(line_no) + ": " + std::string(what);
}

std::uint64_t parse_decimal(std::string_view s, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::MalformedTable, located(line_no, "bad range bound '" + std::string(s) + "'"));
  }
  return value;
}

CanSignalSpec parse_signal_row(std::string_view row, std::size_t line_no) {
  const auto cells = text::split(row, '|');
  if (cells.size() != 3) {
    throw Error(ErrorCode::MalformedTable,
                located(line_no, "expected 3 columns, got " + std::to_string(cells.size())));
  }
  CanSignalSpec spec;
  spec.name = std::string(text::trim(cells[0]));
  if (spec.name.empty()) throw Error(ErrorCode::MalformedTable, located(line_no, "empty signal name"));

  const auto range = text::trim(cells[1]);
  const auto dash = range.find('-');
  if (dash == std::string_view::npos) {
    throw Error(ErrorCode::MalformedTable, located(line_no, "range must be <min>-<max>"));
  }
  spec.range_min = parse_decimal(text::trim(range.substr(0, dash)), line_no);
  spec.range_max = parse_decimal(text::trim(range.substr(dash + 1)), line_no);

  for (auto item : text::split(cells[2], ',')) {
    item = text::trim(item);
    if (!looks_like_hex(item)) {
      throw Error(ErrorCode::MalformedTable, located(line_no, "bad value '" + std::string(item) + "'"));
    }
    spec.value_table.push_back(parse_hex_value(item));
  }
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(e.code(), located(line_no, e.what()));
  }
  return spec;
}

std::string join_lines(const std::vector<std::string_view>& lines) {
  std::size_t first = 0;
  std::size_t last = lines.size();
  while (first < last && text::trim(lines[first]).empty()) ++first;
  while (last > first && text::trim(lines[last - 1]).empty()) --last;
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) out += '\n';
    out += lines[i];
  }
  return out;
}

void write_table(std::ostringstream& out, const std::vector<CanSignalSpec>& specs) {
  out << kTableHeader << '\n';
  for (const auto& spec : specs) {
    out << spec.name << " | " << spec.range_min << '-' << spec.range_max << " | ";
    for (std::size_t i = 0; i < spec.value_table.size(); ++i) {
      if (i) out << ", ";
      out << spec.value_table[i].canonical();
    }
    out << '\n';
  }
}

}  // namespace

std::string HexValue::canonical() const {
  std::array<char, 16> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), numeric_, 16);
  return "0x" + std::string(buf.data(), ptr);
}

bool looks_like_hex(std::string_view token) noexcept {
  if (token.size() < 3 || token[0] != '0' || (token[1] != 'x' && token[1] != 'X')) return false;
  std::size_t significant = 0;
  for (std::size_t i = 2; i < token.size(); ++i) {
    const int d = hex_digit(token[i]);
    if (d < 0) return false;
    if (d != 0 || significant) ++significant;
  }
  return significant <= 16;
}

HexValue parse_hex_value(std::string_view token) {
  if (!looks_like_hex(token)) {
    throw Error(ErrorCode::NotHex, "'" + std::string(token) + "' is not a hex literal");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 2; i < token.size(); ++i) {
    value = (value << 4) | static_cast<std::uint64_t>(hex_digit(token[i]));
  }
  return HexValue(value);
}

void CanSignalSpec::validate() const {
  if (range_min > range_max) {
    throw Error(ErrorCode::MalformedTable, "signal " + name + ": range_min exceeds range_max");
  }
  if (value_table.empty()) {
    throw Error(ErrorCode::MalformedTable, "signal " + name + ": empty value table");
  }
  std::set<std::uint64_t> seen;
  for (const auto& v : value_table) {
    if (v.numeric() < range_min || v.numeric() > range_max) {
      throw Error(ErrorCode::RangeViolation, "signal " + name + ": value " + v.canonical() +
                                                 " outside " + std::to_string(range_min) + "-" +
                                                 std::to_string(range_max));
    }
    if (!seen.insert(v.numeric()).second) {
      throw Error(ErrorCode::MalformedTable, "signal " + name + ": duplicate value " + v.canonical());
    }
  }
}

FeatureElementDocument parse_document(std::string_view input) {
  FeatureElementDocument document;
  const auto all = text::lines(input);

  std::optional<Section> current;
  std::array<bool, 5> seen{};
  std::vector<std::string_view> intro_lines;
  bool have_id = false;

  for (std::size_t i = 0; i < all.size(); ++i) {
    const std::size_t line_no = i + 1;
    const std::string_view line = all[i];
    const std::string_view trimmed = text::trim(line);

    if (line.starts_with("## ")) {
      const auto name = text::trim(line.substr(3));
      std::optional<Section> found;
      for (std::size_t s = 0; s < kSectionNames.size(); ++s) {
        if (text::iequals(name, kSectionNames[s])) found = static_cast<Section>(s);
      }
      if (!found) {
        throw Error(ErrorCode::UnknownSection, located(line_no, "unknown section '" + std::string(name) + "'"));
      }
      auto& flag = seen[static_cast<std::size_t>(*found)];
      if (flag) {
        throw Error(ErrorCode::DuplicateSection, located(line_no, "section '" + std::string(name) + "' repeated"));
      }
      flag = true;
      current = found;
      continue;
    }

    if (!current) {
      if (trimmed.empty()) continue;
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        throw Error(ErrorCode::MalformedHeader, located(line_no, "expected 'key: value' before first section"));
      }
      const auto key = text::trim(line.substr(0, colon));
      const auto value = std::string(text::trim(line.substr(colon + 1)));
      if (text::iequals(key, "id")) {
        document.id = value;
        have_id = true;
      } else if (text::iequals(key, "title")) {
        document.title = value;
      } else {
        throw Error(ErrorCode::MalformedHeader, located(line_no, "unknown header key '" + std::string(key) + "'"));
      }
      continue;
    }

    switch (*current) {
      case Section::Introduction:
        intro_lines.push_back(line);
        break;
      case Section::Parameters: {
        if (trimmed.empty()) break;
        const auto cells = text::split(trimmed, '|');
        if (cells.size() != 2) {
          throw Error(ErrorCode::MalformedTable,
                      located(line_no, "parameter row needs 2 columns, got " + std::to_string(cells.size())));
        }
        document.parameters.push_back(
            {std::string(text::trim(cells[0])), std::string(text::trim(cells[1]))});
        break;
      }
      case Section::CanInputs:
      case Section::CanOutputs: {
        if (trimmed.empty()) break;
        if (text::iequals(trimmed, kTableHeader)) break;
        auto spec = parse_signal_row(trimmed, line_no);
        (*current == Section::CanInputs ? document.can_inputs : document.can_outputs)
            .push_back(std::move(spec));
        break;
      }
      case Section::Requirements:
        if (!trimmed.empty()) document.requirement_sentences.emplace_back(trimmed);
        break;
    }
  }

  if (!have_id || document.id.empty()) throw Error(ErrorCode::MalformedHeader, "missing 'id:' line");
  if (!seen[static_cast<std::size_t>(Section::Requirements)]) {
    throw Error(ErrorCode::MissingSection, "document " + document.id + " has no Requirements section");
  }
  document.introduction = join_lines(intro_lines);
  return document;
}

std::string serialize_document(const FeatureElementDocument& document) {
  std::ostringstream out;
  out << "id: " << document.id << '\n';
  out << "title: " << document.title << '\n';
  out << "## Introduction\n";
  if (!document.introduction.empty()) out << document.introduction << '\n';
  out << "## Parameters\n";
  for (const auto& p : document.parameters) out << p.name << " | " << p.value << '\n';
  out << "## CAN Signal Inputs\n";
  write_table(out, document.can_inputs);
  out << "## CAN Signal Outputs\n";
  write_table(out, document.can_outputs);
  out << "## Requirements\n";
  for (const auto& s : document.requirement_sentences) out << s << '\n';
  return out.str();
}

std::optional<CanSignalSpec> resolve_signal(const FeatureElementDocument& document,
                                            std::string_view name) {
  if (name.empty()) throw Error(ErrorCode::InvalidArgument, "resolve_signal: empty name");

  auto unique_match = [&](std::string_view wanted) -> std::optional<CanSignalSpec> {
    const CanSignalSpec* hit = nullptr;
    for (const auto& spec : document.can_inputs) {
      if (spec.name != wanted) continue;
      if (hit) throw Error(ErrorCode::AmbiguousSignal, "several CAN inputs match '" + std::string(name) + "'");
      hit = &spec;
    }
    return hit ? std::optional<CanSignalSpec>(*hit) : std::nullopt;
  };

  if (auto exact = unique_match(name)) return exact;
  const auto dot = name.rfind('.');
  if (dot == std::string_view::npos || dot + 1 == name.size()) return std::nullopt;
  return unique_match(name.substr(dot + 1));
}

}  // namespace req2tc::doc
