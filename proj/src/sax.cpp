#include "trl/sax.hpp"

#include "trl/csv.hpp"
#include "trl/error.hpp"
#include "trl/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace trl::sax {

Breakpoints::Breakpoints(std::vector<double> cuts) : cuts_(std::move(cuts))
{
    if (cuts_.empty())
        throw InvalidArgument("breakpoints need at least one cut (alphabet size >= 2)");
    for (std::size_t i = 0; i < cuts_.size(); ++i) {
        if (!std::isfinite(cuts_[i]))
            throw InvalidArgument("breakpoints must be finite");
        if (i > 0 && !(cuts_[i] > cuts_[i - 1]))
            throw InvalidArgument("breakpoints must be strictly increasing");
    }
}

Breakpoints equal_frequency_breakpoints(std::span<const double> values, int k)
{
    if (k < 2)
        throw InvalidArgument("alphabet size must be >= 2");
    std::set<double> distinct(values.begin(), values.end());
    if (distinct.size() < static_cast<std::size_t>(k))
        throw InvalidArgument("equal-frequency cuts for k=" + std::to_string(k) + " need " +
                              std::to_string(k) + " distinct values, got " +
                              std::to_string(distinct.size()));
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double last = static_cast<double>(sorted.size() - 1);
    std::vector<double> cuts;
    for (int j = 1; j < k; ++j) {
        double h = last * j / k;
        auto lo = static_cast<std::size_t>(std::floor(h));
        auto hi = std::min(lo + 1, sorted.size() - 1);
        cuts.push_back(sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]));
    }
    return Breakpoints(std::move(cuts));
}

Breakpoints equal_width_breakpoints(double min, double max, int k)
{
    if (k < 2)
        throw InvalidArgument("alphabet size must be >= 2");
    if (!(min < max))
        throw InvalidArgument("equal-width cuts need min < max");
    std::vector<double> cuts;
    for (int j = 1; j < k; ++j)
        cuts.push_back(min + (max - min) * j / k);
    return Breakpoints(std::move(cuts));
}

SaxWord sax_encode(std::span<const double> series, const Breakpoints& bp)
{
    const auto& cuts = bp.cuts();
    SaxWord w;
    w.symbols.reserve(series.size());
    for (double v : series) {
        auto range = std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin();
        w.symbols.push_back(bp.alphabet_size() - static_cast<int>(range));
    }
    return w;
}

double mindist(const SaxWord& a, const SaxWord& b, const Breakpoints& bp)
{
    if (a.symbols.size() != b.symbols.size())
        throw InvalidArgument("mindist: word lengths differ");
    const int k = bp.alphabet_size();
    const auto& beta = bp.cuts();
    std::vector<double> cells(a.symbols.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        int sa = a.symbols[i];
        int sb = b.symbols[i];
        if (sa < 1 || sa > k || sb < 1 || sb > k)
            throw InvalidArgument("mindist: symbol outside alphabet 1.." + std::to_string(k));
        // value-order indices, 1 = lowest range
        int va = k + 1 - sa;
        int vb = k + 1 - sb;
        int lo = std::min(va, vb);
        int hi = std::max(va, vb);
        cells[i] = hi - lo <= 1 ? 0.0 : beta[hi - 2] - beta[lo - 1];
    }
    return std::sqrt(kernels::sum_of_squares(cells));
}

double symbol_euclidean(const SaxWord& a, const SaxWord& b)
{
    if (a.symbols.size() != b.symbols.size())
        throw InvalidArgument("symbol_euclidean: word lengths differ");
    std::vector<double> x(a.symbols.begin(), a.symbols.end());
    std::vector<double> y(b.symbols.begin(), b.symbols.end());
    return std::sqrt(kernels::squared_distance(x, y));
}

double euclidean(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw InvalidArgument("euclidean: series lengths differ");
    return std::sqrt(kernels::squared_distance(a, b));
}

namespace {

std::vector<std::string_view> split(std::string_view text)
{
    std::vector<std::string_view> parts;
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty())
        return parts;
    std::size_t start = 0;
    for (;;) {
        auto comma = text.find(',', start);
        parts.push_back(text.substr(start, comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return parts;
}

} // namespace

std::string format_word(const SaxWord& w)
{
    std::string out;
    for (std::size_t i = 0; i < w.symbols.size(); ++i) {
        if (i)
            out.push_back(',');
        out += std::to_string(w.symbols[i]);
    }
    return out;
}

SaxWord parse_word(std::string_view text)
{
    SaxWord w;
    for (auto part : split(text)) {
        while (!part.empty() && part.front() == ' ')
            part.remove_prefix(1);
        while (!part.empty() && part.back() == ' ')
            part.remove_suffix(1);
        int s = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), s);
        if (ec != std::errc{} || ptr != part.data() + part.size() || s < 1)
            throw ParseError("bad SAX symbol '" + std::string(part) + "'");
        w.symbols.push_back(s);
    }
    return w;
}

std::string format_breakpoints(const Breakpoints& bp)
{
    std::string out;
    for (std::size_t i = 0; i < bp.cuts().size(); ++i) {
        if (i)
            out.push_back(',');
        out += csv::format_real(bp.cuts()[i]);
    }
    return out;
}

Breakpoints parse_breakpoints(std::string_view text)
{
    std::vector<double> cuts;
    for (auto part : split(text)) {
        auto v = csv::parse_real(part);
        if (!v)
            throw ParseError("bad breakpoint '" + std::string(part) + "'");
        cuts.push_back(*v);
    }
    return Breakpoints(std::move(cuts));
}

} // namespace trl::sax
