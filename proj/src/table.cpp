#include "trl/table.hpp"

#include "trl/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace trl {

TimeTable::TimeTable(std::vector<std::string> items, std::vector<std::string> time_labels,
                     std::vector<Cell> cells)
    : items_(std::move(items)), time_labels_(std::move(time_labels)), cells_(std::move(cells))
{
    if (items_.empty())
        throw InvalidArgument("table needs at least 1 item");
    if (time_labels_.size() < 2)
        throw InvalidArgument("table needs at least 2 time points, got " +
                              std::to_string(time_labels_.size()));
    if (cells_.size() != items_.size() * time_labels_.size())
        throw InvalidArgument("cell count does not match items x time points");

    std::unordered_set<std::string_view> labels;
    for (const auto& t : time_labels_) {
        if (!labels.insert(t).second)
            throw InvalidArgument("duplicate time label '" + t + "'");
    }

    index_.reserve(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (items_[i].empty())
            throw InvalidArgument("empty item id at row " + std::to_string(i + 1));
        if (!index_.emplace(items_[i], i).second)
            throw InvalidArgument("duplicate item id '" + items_[i] + "'");
    }

    for (std::size_t k = 0; k < cells_.size(); ++k) {
        if (cells_[k] && !std::isfinite(*cells_[k]))
            throw InvalidArgument("non-finite value for item '" + items_[k / time_count()] +
                                  "' at '" + time_labels_[k % time_count()] + "'");
    }
}

std::optional<std::size_t> TimeTable::find_item(std::string_view id) const
{
    auto it = index_.find(std::string(id));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::size_t TimeTable::item_index(std::string_view id) const
{
    if (auto i = find_item(id))
        return *i;
    throw NotFoundError("unknown item '" + std::string(id) + "'");
}

TimeTable TimeTable::sorted_by_item() const
{
    std::vector<std::size_t> order(items_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return items_[a] < items_[b]; });

    std::vector<std::string> items;
    std::vector<Cell> cells;
    items.reserve(items_.size());
    cells.reserve(cells_.size());
    for (auto i : order) {
        items.push_back(items_[i]);
        auto r = row(i);
        cells.insert(cells.end(), r.begin(), r.end());
    }
    return TimeTable(std::move(items), time_labels_, std::move(cells));
}

} // namespace trl
