#include "trl/rankbin.hpp"

#include "trl/csv.hpp"
#include "trl/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_set>

namespace trl {

BinningScheme::BinningScheme(std::vector<Couple> couples) : couples_(std::move(couples))
{
    if (couples_.empty())
        throw InvalidArgument("binning scheme needs at least one couple");

    long long bound = 0;
    for (std::size_t s = 0; s < couples_.size(); ++s) {
        const auto& c = couples_[s];
        auto name = "couple (" + std::to_string(c.upper_limit) + "," + std::to_string(c.step) + ")";
        if (c.upper_limit < 1 || c.step < 1)
            throw InvalidArgument(name + ": upper limit and step must be positive");
        if (s > 0 && c.upper_limit <= couples_[s - 1].upper_limit)
            throw InvalidArgument(name + ": upper limits must strictly increase");
        if (bound >= c.upper_limit)
            throw InvalidArgument(name + ": already covered by boundary top-" + std::to_string(bound));
        do {
            bound += c.step;
            if (bound > std::numeric_limits<int>::max())
                throw InvalidArgument(name + ": boundary overflows");
            boundaries_.push_back(static_cast<int>(bound));
        } while (bound < c.upper_limit);
    }
}

BinningScheme BinningScheme::identity(int rank_count)
{
    return BinningScheme({{rank_count, 1}});
}

namespace {

struct CoupleReader {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError("couples '" + std::string(text) + "': " + what + " at offset " +
                         std::to_string(pos));
    }
    void skip_ws()
    {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t'))
            ++pos;
    }
    bool peek(char c)
    {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }
    void expect(char c)
    {
        if (!peek(c))
            fail(std::string("expected '") + c + "'");
        ++pos;
    }
    int integer()
    {
        skip_ws();
        int v = 0;
        auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), v);
        if (ec != std::errc{})
            fail("expected an integer");
        pos = static_cast<std::size_t>(ptr - text.data());
        return v;
    }
};

} // namespace

BinningScheme BinningScheme::parse(std::string_view spec)
{
    CoupleReader in{spec};
    std::vector<Couple> couples;
    in.skip_ws();
    if (in.pos == spec.size())
        in.fail("empty");
    for (;;) {
        in.expect('(');
        int upper = in.integer();
        in.expect(',');
        int step = in.integer();
        in.expect(')');
        couples.push_back({upper, step});
        in.skip_ws();
        if (in.pos == spec.size())
            break;
        in.expect(',');
    }
    return BinningScheme(std::move(couples));
}

std::string BinningScheme::label(std::size_t index) const
{
    return "top-" + std::to_string(boundaries_.at(index));
}

std::vector<std::string> BinningScheme::labels() const
{
    std::vector<std::string> out;
    out.reserve(boundaries_.size());
    for (std::size_t i = 0; i < boundaries_.size(); ++i)
        out.push_back(label(i));
    return out;
}

std::string BinningScheme::to_string() const
{
    std::string out;
    for (const auto& c : couples_) {
        if (!out.empty())
            out.push_back(',');
        out += "(" + std::to_string(c.upper_limit) + "," + std::to_string(c.step) + ")";
    }
    return out;
}

std::size_t bin_of_rank(const BinningScheme& scheme, int rank)
{
    if (rank < 1)
        throw InvalidArgument("rank must be >= 1, got " + std::to_string(rank));
    const auto& b = scheme.boundaries();
    auto it = std::lower_bound(b.begin(), b.end(), rank);
    if (it == b.end())
        throw SchemeCoverageError("rank " + std::to_string(rank) + " exceeds last boundary top-" +
                                  std::to_string(b.back()) + " of scheme " + scheme.to_string());
    return static_cast<std::size_t>(it - b.begin());
}

std::vector<int> competition_ranks(std::span<const double> values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    std::vector<int> ranks(values.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && values[order[k]] == values[order[k - 1]])
            ranks[order[k]] = ranks[order[k - 1]];
        else
            ranks[order[k]] = static_cast<int>(k + 1);
    }
    return ranks;
}

RankedColumn rank_column(std::span<const std::pair<std::string, double>> values,
                         std::string time_label)
{
    std::unordered_set<std::string_view> seen;
    std::vector<double> v;
    v.reserve(values.size());
    for (const auto& [item, q] : values) {
        if (!seen.insert(item).second)
            throw InvalidArgument("duplicate item '" + item + "' in column");
        if (!std::isfinite(q))
            throw InvalidArgument("non-finite value for item '" + item + "'");
        v.push_back(q);
    }
    auto ranks = competition_ranks(v);
    RankedColumn out{std::move(time_label), {}};
    out.ranks.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out.ranks.emplace_back(values[i].first, ranks[i]);
    return out;
}

std::string_view to_string(NullMode mode)
{
    return mode == NullMode::keep_nulls ? "keep_nulls" : "drop_last_bin";
}

NullMode parse_null_mode(std::string_view text)
{
    if (text == "keep_nulls" || text == "KEEP_NULLS" || text == "keep")
        return NullMode::keep_nulls;
    if (text == "drop_last_bin" || text == "DROP_LAST_BIN" || text == "drop")
        return NullMode::drop_last_bin;
    throw ParseError("unknown null mode '" + std::string(text) + "' (keep_nulls|drop_last_bin)");
}

BinnedMap::BinnedMap(BinningScheme scheme, NullMode null_mode, std::vector<std::string> items,
                     std::vector<std::string> time_labels, std::vector<std::int32_t> cells)
    : scheme_(std::move(scheme)), null_mode_(null_mode), items_(std::move(items)),
      time_labels_(std::move(time_labels)), cells_(std::move(cells))
{
    if (cells_.size() != items_.size() * time_labels_.size())
        throw InvalidArgument("map cell count does not match items x time points");
    const auto bins = static_cast<std::int32_t>(scheme_.bin_count());
    for (auto c : cells_) {
        if (c != absent && (c < 0 || c >= bins))
            throw InvalidArgument("bin index " + std::to_string(c) + " outside scheme");
        if (null_mode_ == NullMode::drop_last_bin && c == bins - 1)
            throw InvalidArgument("last bin present under drop_last_bin");
    }
}

std::size_t BinnedMap::item_index(std::string_view id) const
{
    auto it = std::find(items_.begin(), items_.end(), id);
    if (it == items_.end())
        throw NotFoundError("unknown item '" + std::string(id) + "'");
    return static_cast<std::size_t>(it - items_.begin());
}

BinnedMap build_binned_map(const TimeTable& table, const BinningScheme& scheme, NullMode null_mode)
{
    const std::size_t n = table.time_count();
    const std::size_t p = table.item_count();
    const auto last = static_cast<std::int32_t>(scheme.bin_count()) - 1;
    std::vector<std::int32_t> cells(p * n, BinnedMap::absent);

    std::vector<double> present;
    std::vector<std::size_t> who;
    for (std::size_t t = 0; t < n; ++t) {
        present.clear();
        who.clear();
        for (std::size_t i = 0; i < p; ++i) {
            if (auto v = table.value(i, t)) {
                present.push_back(*v);
                who.push_back(i);
            }
        }
        if (static_cast<long long>(present.size()) > scheme.last_boundary())
            throw SchemeCoverageError("time point '" + table.time_labels()[t] + "' has " +
                                      std::to_string(present.size()) +
                                      " present items but scheme " + scheme.to_string() +
                                      " ends at top-" + std::to_string(scheme.last_boundary()));
        auto ranks = competition_ranks(present);
        for (std::size_t k = 0; k < who.size(); ++k) {
            auto bin = static_cast<std::int32_t>(bin_of_rank(scheme, ranks[k]));
            if (null_mode == NullMode::drop_last_bin && bin == last)
                continue;
            cells[who[k] * n + t] = bin;
        }
    }
    return BinnedMap(scheme, null_mode, table.items(), table.time_labels(), std::move(cells));
}

std::size_t LevelProfile::present_count() const
{
    return static_cast<std::size_t>(
        std::count_if(levels.begin(), levels.end(), [](const auto& l) { return l.has_value(); }));
}

LevelProfile make_profile(std::string item, std::vector<std::optional<int>> levels)
{
    LevelProfile p{std::move(item), std::move(levels), std::nullopt};
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& l : p.levels) {
        if (l) {
            sum += *l;
            ++count;
        }
    }
    if (count > 0)
        p.mean_level = sum / static_cast<double>(count);
    return p;
}

LevelProfile item_profile(const BinnedMap& map, std::size_t item)
{
    std::vector<std::optional<int>> levels;
    levels.reserve(map.time_count());
    for (auto c : map.raw_row(item))
        levels.push_back(c == BinnedMap::absent ? std::nullopt : std::optional<int>(c));
    return make_profile(map.items()[item], std::move(levels));
}

LevelProfile item_profile(const BinnedMap& map, std::string_view item)
{
    return item_profile(map, map.item_index(item));
}

std::string write_map_csv(const BinnedMap& map, char sep)
{
    std::string out = "# couples: " + map.scheme().to_string() + "\n";
    out += "# null_mode: " + std::string(to_string(map.null_mode())) + "\n";
    out += "id";
    for (const auto& t : map.time_labels()) {
        out.push_back(sep);
        out += csv::quote(t, sep);
    }
    out.push_back('\n');
    for (std::size_t i = 0; i < map.item_count(); ++i) {
        out += csv::quote(map.items()[i], sep);
        for (auto c : map.raw_row(i)) {
            out.push_back(sep);
            out += c == BinnedMap::absent ? std::string("NA")
                                          : map.scheme().label(static_cast<std::size_t>(c));
        }
        out.push_back('\n');
    }
    return out;
}

namespace {

constexpr std::string_view couples_tag = "# couples:";
constexpr std::string_view null_mode_tag = "# null_mode:";

std::string_view trim_view(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

} // namespace

bool looks_like_map_csv(std::string_view text)
{
    if (text.starts_with("\xEF\xBB\xBF"))
        text.remove_prefix(3);
    return text.starts_with(couples_tag);
}

BinnedMap parse_map_csv(std::string_view text, char sep)
{
    if (text.starts_with("\xEF\xBB\xBF"))
        text.remove_prefix(3);
    std::optional<BinningScheme> scheme;
    NullMode mode = NullMode::keep_nulls;
    while (text.starts_with("#")) {
        auto nl = text.find('\n');
        auto line = trim_view(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.starts_with(couples_tag))
            scheme = BinningScheme::parse(trim_view(line.substr(couples_tag.size())));
        else if (line.starts_with(null_mode_tag))
            mode = parse_null_mode(trim_view(line.substr(null_mode_tag.size())));
    }
    if (!scheme)
        throw ParseError("map CSV lacks a '# couples:' line");

    auto records = csv::read(text, sep);
    if (records.empty())
        throw ParseError("map CSV lacks a header row");
    const auto& header = records.front().fields;
    if (header.size() < 3)
        throw ParseError("map CSV header needs an id column and at least 2 time labels");
    std::vector<std::string> times(header.begin() + 1, header.end());

    std::vector<std::string> items;
    std::vector<std::int32_t> cells;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size())
            throw ParseError("row " + std::to_string(rec.line) + ": expected " +
                             std::to_string(header.size()) + " cells, got " +
                             std::to_string(rec.fields.size()));
        items.push_back(rec.fields[0]);
        for (std::size_t c = 1; c < rec.fields.size(); ++c) {
            auto cell = trim_view(rec.fields[c]);
            if (csv::is_missing(cell)) {
                cells.push_back(BinnedMap::absent);
                continue;
            }
            int bound = 0;
            bool ok = cell.starts_with("top-");
            if (ok) {
                auto digits = cell.substr(4);
                auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), bound);
                ok = ec == std::errc{} && ptr == digits.data() + digits.size();
            }
            const auto& b = scheme->boundaries();
            auto it = std::lower_bound(b.begin(), b.end(), bound);
            if (!ok || it == b.end() || *it != bound)
                throw ParseError("row " + std::to_string(rec.line) + ", column " +
                                 std::to_string(c + 1) + ": '" + std::string(cell) +
                                 "' is not a label of scheme " + scheme->to_string());
            cells.push_back(static_cast<std::int32_t>(it - b.begin()));
        }
    }
    std::set<std::string> unique(items.begin(), items.end());
    if (unique.size() != items.size())
        throw ParseError("map CSV has duplicate item ids");
    return BinnedMap(std::move(*scheme), mode, std::move(items), std::move(times), std::move(cells));
}

BinningScheme suggest_scheme(int item_count)
{
    if (item_count < 1)
        throw InvalidArgument("item count must be positive");
    if (item_count <= 20)
        return BinningScheme::identity(item_count);
    if (item_count <= 100)
        return BinningScheme({{20, 1}, {item_count, 5}});
    if (item_count <= 1000)
        return BinningScheme({{20, 1}, {100, 5}, {item_count, 10}});
    return BinningScheme({{20, 1}, {100, 5}, {1000, 25}, {item_count, 100}});
}

} // namespace trl
