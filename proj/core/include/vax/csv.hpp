#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace vax::csv {

using Row = std::vector<std::string>;

// RFC-4180 reader: comma separated, optional double-quoted fields with ""
// escapes, LF or CRLF line ends, leading UTF-8 BOM ignored. Blank lines are
// skipped. Throws InputError on an unterminated quote.
std::vector<Row> parse(std::string_view text);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string format_row(const Row& row);

// Shortest decimal form that parses back to the same double.
std::string format_number(double value);

}  // namespace vax::csv
