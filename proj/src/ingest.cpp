#include "trl/ingest.hpp"

#include "trl/csv.hpp"
#include "trl/error.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace trl {

namespace {

std::string where(std::size_t line, std::size_t column)
{
    return "row " + std::to_string(line) + ", column " + std::to_string(column);
}

TimeTable::Cell parse_cell(const std::string& cell, std::size_t line, std::size_t column)
{
    if (csv::is_missing(cell))
        return std::nullopt;
    if (auto v = csv::parse_real(cell))
        return v;
    throw ParseError(where(line, column) + ": not a number: '" + cell + "'");
}

} // namespace

TimeTable parse_wide_table(std::string_view text, char sep)
{
    auto records = csv::read(text, sep);
    if (records.empty())
        throw ParseError("empty input: missing header row");

    const auto& header = records.front().fields;
    if (header.size() < 3)
        throw ParseError("header needs an id column and at least 2 time labels");
    std::vector<std::string> labels(header.begin() + 1, header.end());

    std::vector<std::string> items;
    std::vector<TimeTable::Cell> cells;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size())
            throw ParseError("row " + std::to_string(rec.line) + ": expected " +
                             std::to_string(header.size()) + " cells, got " +
                             std::to_string(rec.fields.size()));
        const auto& id = rec.fields[0];
        if (id.empty())
            throw ParseError("row " + std::to_string(rec.line) + ": empty item id");
        if (!seen.insert(id).second)
            throw ParseError("row " + std::to_string(rec.line) + ": duplicate item id '" + id + "'");
        items.push_back(id);
        for (std::size_t c = 1; c < rec.fields.size(); ++c)
            cells.push_back(parse_cell(rec.fields[c], rec.line, c + 1));
    }
    if (items.empty())
        throw ParseError("no data rows");
    return TimeTable(std::move(items), std::move(labels), std::move(cells));
}

TimeTable parse_column_pairs(std::string_view text, char sep)
{
    auto records = csv::read(text, sep);
    if (records.empty())
        throw ParseError("empty input: missing header row");

    const auto& header = records.front().fields;
    if (header.size() % 2 != 0)
        throw ParseError("paired layout needs an even column count, got " +
                         std::to_string(header.size()));
    const std::size_t pairs = header.size() / 2;

    std::vector<std::string> labels;
    for (std::size_t k = 0; k < pairs; ++k) {
        const auto& first = header[2 * k];
        const auto& second = header[2 * k + 1];
        if (first.empty())
            throw ParseError("header column " + std::to_string(2 * k + 1) + ": empty time label");
        if (!second.empty() && second != first)
            throw ParseError("header columns " + std::to_string(2 * k + 1) + "-" +
                             std::to_string(2 * k + 2) + ": pair labels differ ('" + first +
                             "' vs '" + second + "')");
        labels.push_back(first);
    }

    // per time point: item -> cell
    std::vector<std::map<std::string, TimeTable::Cell>> columns(pairs);
    std::set<std::string> ids;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() > header.size())
            throw ParseError("row " + std::to_string(rec.line) + ": " +
                             std::to_string(rec.fields.size()) + " cells exceed the " +
                             std::to_string(header.size()) + " header columns");
        for (std::size_t k = 0; k < pairs; ++k) {
            std::size_t ci = 2 * k;
            std::string id = ci < rec.fields.size() ? rec.fields[ci] : std::string{};
            std::string val = ci + 1 < rec.fields.size() ? rec.fields[ci + 1] : std::string{};
            if (id.empty()) {
                if (!val.empty())
                    throw ParseError(where(rec.line, ci + 1) + ": value without item id");
                continue;
            }
            auto cell = parse_cell(val, rec.line, ci + 2);
            if (!columns[k].emplace(id, cell).second)
                throw ParseError(where(rec.line, ci + 1) + ": item '" + id +
                                 "' listed twice for time point '" + labels[k] + "'");
            ids.insert(id);
        }
    }
    if (ids.empty())
        throw ParseError("no data rows");

    std::vector<std::string> items(ids.begin(), ids.end());
    std::vector<TimeTable::Cell> cells;
    cells.reserve(items.size() * pairs);
    for (const auto& id : items) {
        for (std::size_t k = 0; k < pairs; ++k) {
            auto it = columns[k].find(id);
            cells.push_back(it == columns[k].end() ? std::nullopt : it->second);
        }
    }
    return TimeTable(std::move(items), std::move(labels), std::move(cells));
}

TimeTable parse_table(std::string_view text, TableFormat format, char sep)
{
    return format == TableFormat::wide ? parse_wide_table(text, sep) : parse_column_pairs(text, sep);
}

ValidationReport validate_table(const TimeTable& table)
{
    ValidationReport report;
    report.item_count = table.item_count();
    report.time_point_count = table.time_count();

    std::map<std::vector<TimeTable::Cell>, std::size_t> first_seen;
    for (std::size_t i = 0; i < table.item_count(); ++i) {
        auto row = table.row(i);
        report.absent_count += static_cast<std::size_t>(
            std::count_if(row.begin(), row.end(), [](const auto& c) { return !c; }));
        std::vector<TimeTable::Cell> key(row.begin(), row.end());
        auto [it, inserted] = first_seen.emplace(std::move(key), i);
        if (!inserted)
            report.duplicate_warnings.push_back("item '" + table.items()[i] +
                                                "' repeats the values of '" +
                                                table.items()[it->second] + "'");
    }
    return report;
}

std::string write_wide_table(const TimeTable& table, char sep)
{
    std::string out = "id";
    for (const auto& t : table.time_labels()) {
        out.push_back(sep);
        out += csv::quote(t, sep);
    }
    out.push_back('\n');
    for (std::size_t i = 0; i < table.item_count(); ++i) {
        out += csv::quote(table.items()[i], sep);
        for (const auto& c : table.row(i)) {
            out.push_back(sep);
            out += c ? csv::format_real(*c) : std::string("NA");
        }
        out.push_back('\n');
    }
    return out;
}

} // namespace trl
