#pragma once

#include <string>
#include <string_view>
#include <vector>

// Minimal CSV support: RFC-4180-style quoting, LF or CRLF line ends.
// Shared by the manifest reader and the report writers.

namespace lexdisc {

struct CsvRecord {
  long line = 0;  // 1-based line number of the record's first line
  std::vector<std::string> fields;
};

/// Parses a whole CSV document. Quoted fields may contain commas, quotes
/// (doubled) and newlines. Blank lines are skipped. Throws ManifestError
/// on an unterminated quote or stray quote character.
std::vector<CsvRecord> parseCsv(std::string_view text);

/// Quotes a field if it contains a comma, quote, or newline.
std::string csvEscape(std::string_view field);

/// Shortest round-trip decimal rendering of a double (locale-independent).
std::string formatDouble(double value);

}  // namespace lexdisc
