#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace req2tc::csv {

/// RFC 4180 style; fields with commas, quotes or line breaks are quoted and
/// embedded quotes doubled. Rows end with LF.
std::string format_row(const std::vector<std::string>& fields);

/// Inverse of format_row over a whole file. Throws FormatError on an
/// unterminated quoted field.
std::vector<std::vector<std::string>> parse(std::string_view content);

}  // namespace req2tc::csv
