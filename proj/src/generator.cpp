#include "trl/generator.hpp"

#include "trl/error.hpp"
#include "trl/kernels.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <vector>

namespace trl {

namespace {

std::string padded(const char* prefix, std::size_t value, std::size_t count)
{
    int width = 1;
    for (std::size_t c = count; c >= 10; c /= 10)
        ++width;
    width = std::max(width, 2);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, value);
    return buf;
}

} // namespace

TimeTable generate_random_table(const GeneratorSpec& spec)
{
    if (spec.item_count < 1)
        throw InvalidArgument("generator needs at least 1 item");
    if (spec.time_points < 2)
        throw InvalidArgument("generator needs at least 2 time points");

    std::mt19937_64 rng(spec.seed);
    std::vector<TimeTable::Cell> cells;
    cells.reserve(spec.item_count * spec.time_points);
    for (std::size_t k = 0; k < spec.item_count * spec.time_points; ++k)
        cells.emplace_back(static_cast<double>(rng() >> 11) * 0x1.0p-53);

    std::vector<std::string> items;
    items.reserve(spec.item_count);
    for (std::size_t i = 1; i <= spec.item_count; ++i)
        items.push_back(padded("item", i, spec.item_count));
    std::vector<std::string> times;
    for (std::size_t t = 1; t <= spec.time_points; ++t)
        times.push_back(padded("t", t, spec.time_points));
    return TimeTable(std::move(items), std::move(times), std::move(cells));
}

BinningScheme default_baseline_scheme()
{
    return BinningScheme({{20, 1}, {100, 5}, {1000, 25}, {5000, 100}});
}

std::size_t count_items_exceeding(const TimeTable& table, double threshold)
{
    std::vector<double> present;
    std::size_t count = 0;
    for (std::size_t i = 0; i < table.item_count(); ++i) {
        present.clear();
        for (const auto& c : table.row(i)) {
            if (c)
                present.push_back(*c);
        }
        if (kernels::max_value(present) > threshold)
            ++count;
    }
    return count;
}

LabelHistogram baseline_distribution(const GeneratorSpec& spec, const BinningScheme& scheme,
                                     const ClassifierParams& params, NullMode null_mode)
{
    auto table = generate_random_table(spec);
    return profile_histogram(build_binned_map(table, scheme, null_mode), params);
}

} // namespace trl
