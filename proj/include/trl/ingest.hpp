#pragma once

#include "trl/table.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace trl {

enum class TableFormat { wide, pairs };

struct ValidationReport {
    std::size_t item_count = 0;
    std::size_t time_point_count = 0;
    std::size_t absent_count = 0;
    std::vector<std::string> duplicate_warnings;
};

/// Wide layout: header `id,<t1>,...,<tn>`, then one row per item. An empty
/// cell or `NA` is a missing value. Items keep row order.
TimeTable parse_wide_table(std::string_view text, char sep = ',');

/// Column-pair layout: each time point owns two adjacent columns (item id,
/// value) and its own list of items, of any length and order. The header
/// names each pair with its time label. Items missing from a time point's
/// list are absent there. Items are sorted lexicographically.
TimeTable parse_column_pairs(std::string_view text, char sep = ',');

TimeTable parse_table(std::string_view text, TableFormat format, char sep = ',');

/// Counts cells and flags items whose whole row repeats an earlier item.
ValidationReport validate_table(const TimeTable& table);

/// Inverse of parse_wide_table; values use the shortest round-trip form.
std::string write_wide_table(const TimeTable& table, char sep = ',');

} // namespace trl
