#include "trl/csv.hpp"

#include "trl/error.hpp"

#include <charconv>
#include <cmath>

namespace trl::csv {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

bool blank(const std::vector<std::string>& fields)
{
    return fields.size() == 1 && trim(fields[0]).empty();
}

} // namespace

std::vector<Record> read(std::string_view text, char sep)
{
    if (text.starts_with("\xEF\xBB\xBF"))
        text.remove_prefix(3);

    std::vector<Record> out;
    std::size_t line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        Record rec{line, {}};
        std::string field;
        bool end_of_record = false;
        while (!end_of_record) {
            if (i < text.size() && text[i] == '"') {
                std::size_t open_line = line;
                ++i;
                for (;;) {
                    if (i >= text.size())
                        throw ParseError("line " + std::to_string(open_line) +
                                         ": unterminated quoted field");
                    char c = text[i++];
                    if (c == '"') {
                        if (i < text.size() && text[i] == '"') {
                            field.push_back('"');
                            ++i;
                        } else {
                            break;
                        }
                    } else {
                        if (c == '\n')
                            ++line;
                        field.push_back(c);
                    }
                }
            }
            // unquoted remainder (or trailing text after a closing quote)
            while (i < text.size() && text[i] != sep && text[i] != '\n' && text[i] != '\r')
                field.push_back(text[i++]);

            rec.fields.push_back(std::move(field));
            field.clear();

            if (i >= text.size()) {
                end_of_record = true;
            } else if (text[i] == sep) {
                ++i;
            } else {
                if (text[i] == '\r')
                    ++i;
                if (i < text.size() && text[i] == '\n')
                    ++i;
                ++line;
                end_of_record = true;
            }
        }
        if (!blank(rec.fields))
            out.push_back(std::move(rec));
    }
    return out;
}

std::string quote(std::string_view field, char sep)
{
    if (field.find_first_of(std::string{sep, '"', '\n', '\r'}) == std::string_view::npos)
        return std::string(field);
    std::string q = "\"";
    for (char c : field) {
        if (c == '"')
            q.push_back('"');
        q.push_back(c);
    }
    q.push_back('"');
    return q;
}

bool is_missing(std::string_view cell)
{
    cell = trim(cell);
    return cell.empty() || cell == "NA";
}

std::optional<double> parse_real(std::string_view cell)
{
    cell = trim(cell);
    if (cell.starts_with('+'))
        cell.remove_prefix(1);
    if (cell.empty())
        return std::nullopt;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

std::string format_real(double v)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace trl::csv
