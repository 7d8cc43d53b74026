#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trl::csv {

struct Record {
    std::size_t line; // 1-based physical line where the record starts
    std::vector<std::string> fields;
};

/// Splits delimited text into records. Handles double-quoted fields with
/// "" escapes and embedded newlines, LF or CRLF endings, and a leading
/// UTF-8 byte-order mark. Blank lines are skipped.
std::vector<Record> read(std::string_view text, char sep = ',');

/// Quotes `field` when it contains the separator, a quote, or a line break.
std::string quote(std::string_view field, char sep = ',');

/// True for the two missing-value spellings: an empty cell or `NA`.
bool is_missing(std::string_view cell);

/// Parses a finite real. Leading/trailing blanks are ignored; returns
/// nullopt for anything else (including inf and nan).
std::optional<double> parse_real(std::string_view cell);

/// Shortest text that parses back to exactly `v`.
std::string format_real(double v);

} // namespace trl::csv
