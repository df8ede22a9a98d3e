#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace req2tc::doc {

/// A hexadecimal signal value ("0x1"). Equality is numeric; the canonical
/// rendering is "0x" followed by the minimal lowercase hex digits.
class HexValue {
 public:
  HexValue() = default;
  explicit HexValue(std::uint64_t numeric) : numeric_(numeric) {}

  std::uint64_t numeric() const noexcept { return numeric_; }
  std::string canonical() const;

  friend bool operator==(const HexValue&, const HexValue&) = default;
  friend auto operator<=>(const HexValue&, const HexValue&) = default;

 private:
  std::uint64_t numeric_ = 0;
};

/// Accepts "0x"/"0X" followed by one or more hex digits of either case.
/// Throws Error(NotHex) otherwise.
HexValue parse_hex_value(std::string_view token);

/// True when `token` would parse as a hex literal.
bool looks_like_hex(std::string_view token) noexcept;

struct CanSignalSpec {
  std::string name;
  std::uint64_t range_min = 0;
  std::uint64_t range_max = 0;
  std::vector<HexValue> value_table;

  /// Throws MalformedTable / RangeViolation if the invariants do not hold.
  void validate() const;

  friend bool operator==(const CanSignalSpec&, const CanSignalSpec&) = default;
};

struct Parameter {
  std::string name;
  std::string value;

  friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct FeatureElementDocument {
  std::string id;
  std::string title;
  std::string introduction;
  std::vector<Parameter> parameters;
  std::vector<CanSignalSpec> can_inputs;
  std::vector<CanSignalSpec> can_outputs;
  std::vector<std::string> requirement_sentences;

  friend bool operator==(const FeatureElementDocument&, const FeatureElementDocument&) = default;
};

/// Parses the plain-text document format:
///
///   id: <id>
///   title: <title>
///   ## Introduction
///   ## Parameters            (rows "name | value")
///   ## CAN Signal Inputs     (header "CAN Signal | Range | Value table")
///   ## CAN Signal Outputs
///   ## Requirements          (one sentence per line)
///
/// Blank lines inside tables and the Requirements section are skipped.
FeatureElementDocument parse_document(std::string_view text);

std::string serialize_document(const FeatureElementDocument& document);

/// Looks a requirement-level signal name up among the CAN inputs: an exact
/// name match wins, then a match on the part after the last '.'.
/// Throws AmbiguousSignal when several specs match at the same level.
std::optional<CanSignalSpec> resolve_signal(const FeatureElementDocument& document,
                                            std::string_view name);

}  // namespace req2tc::doc
