#pragma once

#include "trl/profiles.hpp"
#include "trl/rankbin.hpp"
#include "trl/table.hpp"

#include <cstddef>
#include <cstdint>

namespace trl {

/// Random baseline table: item_count items with i.i.d. uniform values on
/// [0, 1) at each of time_points time points.
///
/// Values come from std::mt19937_64 seeded with `seed`; each draw keeps its
/// top 53 bits and scales by 2^-53, so a seed fixes the table exactly on
/// every platform.
struct GeneratorSpec {
    std::size_t item_count = 5000;
    std::size_t time_points = 10;
    std::uint64_t seed = 1;
};

/// Items are named `item01`... and time points `t01`..., zero-padded to at
/// least two digits and to the width of the largest index (`item0001` for
/// 5000 items).
TimeTable generate_random_table(const GeneratorSpec& spec);

/// (20,1),(100,5),(1000,25),(5000,100)
BinningScheme default_baseline_scheme();

/// Number of items whose largest present value is strictly above
/// `threshold`.
std::size_t count_items_exceeding(const TimeTable& table, double threshold);

/// Generate, bin and classify; the histogram of primary labels.
LabelHistogram baseline_distribution(const GeneratorSpec& spec, const BinningScheme& scheme,
                                     const ClassifierParams& params, NullMode null_mode);

} // namespace trl
