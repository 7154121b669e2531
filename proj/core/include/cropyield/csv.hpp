#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cropyield::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader: quoted fields, doubled quotes, embedded separators and
/// line breaks, CRLF or LF endings. A leading UTF-8 BOM is skipped. Blank
/// lines are dropped.
std::vector<Row> parse(std::string_view text, char delimiter = ',');

/// Quotes a field when it contains the delimiter, a quote, CR or LF.
std::string escape(std::string_view field, char delimiter = ',');

std::string format_row(const Row& row, char delimiter = ',');

}  // namespace cropyield::csv
