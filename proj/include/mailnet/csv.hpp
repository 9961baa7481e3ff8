#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mailnet::csv {

/// Splits one CSV record (RFC 4180 quoting, no embedded newlines).
/// Returns nullopt on an unterminated quote or stray characters after a
/// closing quote.
std::optional<std::vector<std::string>> split_line(std::string_view line);

/// Quotes a field when it contains a comma, quote, or leading/trailing
/// space. Newlines are replaced by spaces so records stay on one line.
std::string escape(std::string_view field);

/// Reads one line, stripping a trailing '\r'. Returns false at end of stream.
bool read_line(std::istream& in, std::string& line);

}  // namespace mailnet::csv
