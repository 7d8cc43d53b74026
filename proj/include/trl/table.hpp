#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace trl {

/// Item x time grid of optional quantities. Rows are items, columns are
/// time points ordered oldest to newest. A missing cell is std::nullopt.
///
/// Construction validates every invariant: unique non-empty item ids,
/// unique time labels, finite values, at least one item and two time
/// points. Once built the table is immutable.
class TimeTable {
public:
    using Cell = std::optional<double>;

    TimeTable(std::vector<std::string> items, std::vector<std::string> time_labels,
              std::vector<Cell> cells);

    std::size_t item_count() const noexcept { return items_.size(); }
    std::size_t time_count() const noexcept { return time_labels_.size(); }

    const std::vector<std::string>& items() const noexcept { return items_; }
    const std::vector<std::string>& time_labels() const noexcept { return time_labels_; }

    Cell value(std::size_t item, std::size_t time) const { return cells_[item * time_count() + time]; }

    /// All cells of one item, in time order.
    std::span<const Cell> row(std::size_t item) const
    {
        return {cells_.data() + item * time_count(), time_count()};
    }

    std::optional<std::size_t> find_item(std::string_view id) const;

    /// Index of `id`; throws NotFoundError when absent.
    std::size_t item_index(std::string_view id) const;

    /// Same cells with items reordered lexicographically.
    TimeTable sorted_by_item() const;

    friend bool operator==(const TimeTable& a, const TimeTable& b)
    {
        return a.items_ == b.items_ && a.time_labels_ == b.time_labels_ && a.cells_ == b.cells_;
    }

private:
    std::vector<std::string> items_;
    std::vector<std::string> time_labels_;
    std::vector<Cell> cells_;
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace trl
