#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace topex::csv {

using Row = std::vector<std::string>;

// Parses RFC-4180 text: comma separated, double-quote quoting with "" as the
// escaped quote, CRLF or LF line endings, embedded newlines inside quotes.
// A trailing newline does not produce an extra empty record.
std::vector<Row> parse(std::string_view text);
std::vector<Row> parse(std::istream& in);

// Quotes a field only when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

// Writes one record terminated by CRLF.
void write_row(std::ostream& out, const Row& row);

}  // namespace topex::csv
