#pragma once

#include "trl/rankbin.hpp"
#include "trl/table.hpp"

#include <random>
#include <string>

// 191 countries over 1985-2000, log-uniform GDP-like values. country042 has
// no value for 1993, so a highlight on it spans 15 of 16 columns.
namespace gdp {

inline trl::TimeTable country_table(std::uint64_t seed = 11)
{
    std::vector<std::string> items, years;
    for (int c = 0; c < 191; ++c) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "country%03d", c);
        items.emplace_back(buf);
    }
    for (int y = 1985; y <= 2000; ++y)
        years.push_back(std::to_string(y));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logv(std::log(105.0), std::log(63692.0));
    std::vector<std::optional<double>> cells;
    for (int c = 0; c < 191; ++c) {
        for (int y = 0; y < 16; ++y) {
            double v = std::exp(logv(rng));
            cells.push_back(c == 42 && y == 8 ? std::nullopt : std::optional<double>(v));
        }
    }
    return trl::TimeTable(items, years, cells);
}

inline trl::BinningScheme scheme()
{
    return trl::BinningScheme({{20, 1}, {100, 5}, {191, 10}});
}

inline const std::string gap_item = "country042";

} // namespace gdp
