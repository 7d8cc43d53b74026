#pragma once

#include "trl/table.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trl {

/// One (upper limit of rank, step) pair of a binning scheme.
struct Couple {
    int upper_limit;
    int step;
    friend bool operator==(const Couple&, const Couple&) = default;
};

/// Uneven rank bins generated from couples. Within couple s the boundaries
/// continue from the previous couple's last boundary in increments of the
/// couple's step until one reaches or passes its upper limit, so
/// (20,1),(100,5),(191,10) gives 1..20, 25..100, 110..200.
class BinningScheme {
public:
    /// Throws InvalidArgument on an empty list, a non-positive value, upper
    /// limits that do not strictly increase, or a couple that the previous
    /// boundaries already cover.
    explicit BinningScheme(std::vector<Couple> couples);

    /// Parses the literal tuple form `(20,1),(100,5),(191,10)`.
    static BinningScheme parse(std::string_view spec);

    /// Identity scheme (p,1): one bin per rank.
    static BinningScheme identity(int rank_count);

    const std::vector<Couple>& couples() const noexcept { return couples_; }
    const std::vector<int>& boundaries() const noexcept { return boundaries_; }
    std::size_t bin_count() const noexcept { return boundaries_.size(); }
    int last_boundary() const noexcept { return boundaries_.back(); }

    /// `top-<boundary>` for bin `index`.
    std::string label(std::size_t index) const;
    std::vector<std::string> labels() const;

    /// Canonical tuple form, suitable for parse().
    std::string to_string() const;

    friend bool operator==(const BinningScheme& a, const BinningScheme& b)
    {
        return a.couples_ == b.couples_;
    }

private:
    std::vector<Couple> couples_;
    std::vector<int> boundaries_;
};

/// Index of the smallest boundary >= rank. Throws InvalidArgument for rank
/// < 1 and SchemeCoverageError when rank exceeds the last boundary.
std::size_t bin_of_rank(const BinningScheme& scheme, int rank);

/// Competition ranks (1 = largest; ties share the smallest rank, and the
/// next distinct value ranks 1 + the count of strictly greater values).
std::vector<int> competition_ranks(std::span<const double> values);

struct RankedColumn {
    std::string time_label;
    std::vector<std::pair<std::string, int>> ranks; // input order
};

/// Ranks one time column. Throws InvalidArgument on duplicate items or
/// non-finite values.
RankedColumn rank_column(std::span<const std::pair<std::string, double>> values,
                         std::string time_label = {});

enum class NullMode { keep_nulls, drop_last_bin };

std::string_view to_string(NullMode mode);
NullMode parse_null_mode(std::string_view text);

/// Per time point, the bin level of every present item.
class BinnedMap {
public:
    static constexpr std::int32_t absent = -1;

    BinnedMap(BinningScheme scheme, NullMode null_mode, std::vector<std::string> items,
              std::vector<std::string> time_labels, std::vector<std::int32_t> cells);

    const BinningScheme& scheme() const noexcept { return scheme_; }
    NullMode null_mode() const noexcept { return null_mode_; }
    const std::vector<std::string>& items() const noexcept { return items_; }
    const std::vector<std::string>& time_labels() const noexcept { return time_labels_; }
    std::size_t item_count() const noexcept { return items_.size(); }
    std::size_t time_count() const noexcept { return time_labels_.size(); }

    std::optional<std::size_t> level(std::size_t item, std::size_t time) const
    {
        auto c = cells_[item * time_count() + time];
        return c == absent ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(c));
    }

    std::span<const std::int32_t> raw_row(std::size_t item) const
    {
        return {cells_.data() + item * time_count(), time_count()};
    }

    std::size_t item_index(std::string_view id) const;

    friend bool operator==(const BinnedMap& a, const BinnedMap& b)
    {
        return a.scheme_ == b.scheme_ && a.null_mode_ == b.null_mode_ && a.items_ == b.items_ &&
               a.time_labels_ == b.time_labels_ && a.cells_ == b.cells_;
    }

private:
    BinningScheme scheme_;
    NullMode null_mode_;
    std::vector<std::string> items_;
    std::vector<std::string> time_labels_;
    std::vector<std::int32_t> cells_;
};

/// Ranks every time column independently over its present items and maps
/// the ranks into bins. Under drop_last_bin, cells landing in the last bin
/// become absent. Throws SchemeCoverageError when a column holds more
/// present items than the scheme's last boundary.
BinnedMap build_binned_map(const TimeTable& table, const BinningScheme& scheme, NullMode null_mode);

/// One item's bin levels over time plus the mean over present levels.
struct LevelProfile {
    std::string item;
    std::vector<std::optional<int>> levels;
    std::optional<double> mean_level;

    std::size_t present_count() const;
};

LevelProfile make_profile(std::string item, std::vector<std::optional<int>> levels);

/// Throws NotFoundError for an unknown item.
LevelProfile item_profile(const BinnedMap& map, std::string_view item);
LevelProfile item_profile(const BinnedMap& map, std::size_t item);

/// CSV of bin labels (`NA` for absent) preceded by `# couples: ...` and
/// `# null_mode: ...` comment lines.
std::string write_map_csv(const BinnedMap& map, char sep = ',');

/// Inverse of write_map_csv. A missing null_mode line means keep_nulls.
BinnedMap parse_map_csv(std::string_view text, char sep = ',');

/// True when `text` starts with the `# couples:` line of a map CSV.
bool looks_like_map_csv(std::string_view text);

/// Scheme sized for `item_count` items: (20,1),(100,5),(1000,25) prefixes
/// as far as they fit, closed by a final couple at item_count with step 1,
/// 5, 10 or 100 respectively. 191 items gives (20,1),(100,5),(191,10).
BinningScheme suggest_scheme(int item_count);

} // namespace trl
