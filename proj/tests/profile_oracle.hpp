#pragma once

// Brute-force reference for plateau detection and shape rules. It works on
// raw time indices and exhaustive quantification, sharing no code with the
// library classifier.

#include "trl/profiles.hpp"

#include <optional>
#include <vector>

namespace oracle {

using Levels = std::vector<std::optional<int>>;

inline bool qualifying_window(const Levels& lv, std::size_t s, std::size_t e, int tol)
{
    if (e < s + 2)
        return false;
    for (std::size_t a = s; a <= e; ++a) {
        if (!lv[a])
            return false;
        for (std::size_t b = s; b <= e; ++b) {
            if (lv[b] && *lv[a] - *lv[b] > tol)
                return false;
        }
    }
    return true;
}

/// Enumerates every qualifying window, then repeatedly takes the one with
/// the earliest start after the last accepted plateau, longest first.
inline std::vector<trl::Plateau> plateaus(const Levels& lv, int tol)
{
    std::vector<trl::Plateau> out;
    std::size_t from = 0;
    for (;;) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t s = from; s < lv.size() && !best; ++s) {
            for (std::size_t e = lv.size(); e-- > s;) {
                if (qualifying_window(lv, s, e, tol)) {
                    best = {s, e};
                    break;
                }
            }
        }
        if (!best)
            return out;
        int lo = *lv[best->first];
        for (std::size_t k = best->first; k <= best->second; ++k)
            lo = std::min(lo, *lv[k]);
        out.push_back({best->first, best->second, lo});
        from = best->second + 1;
    }
}

inline trl::ProfileLabels classify(const Levels& lv, const trl::ClassifierParams& p)
{
    using trl::Shape;
    const std::size_t n = lv.size();
    const int d = p.delta_spike;
    trl::ProfileLabels out;

    for (std::size_t a = 0; a < n; ++a) {
        if (!lv[a])
            continue;
        bool all = true;
        for (std::size_t y = 0; y < n; ++y) {
            if (y != a && lv[y] && *lv[y] - *lv[a] < d)
                all = false;
        }
        if (all)
            out.add(Shape::spike);
    }

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!lv[a] || !lv[b])
                continue;
            bool some_between = false;
            bool all_worse = true;
            for (std::size_t y = a + 1; y < b; ++y) {
                if (!lv[y])
                    continue;
                some_between = true;
                if (*lv[y] - *lv[a] < d || *lv[y] - *lv[b] < d)
                    all_worse = false;
            }
            if (some_between && all_worse)
                out.add(Shape::fluttering);
        }
    }

    std::optional<std::size_t> first, last;
    for (std::size_t t = 0; t < n; ++t) {
        if (lv[t]) {
            if (!first)
                first = t;
            last = t;
        }
    }
    bool dec = true, inc = true;
    for (std::size_t ta = 0; ta < n; ++ta) {
        for (std::size_t tb = 0; tb < ta; ++tb) {
            if (!lv[ta] || !lv[tb])
                continue;
            int diff = *lv[ta] - *lv[tb];
            if (diff < -p.epsilon)
                dec = false;
            if (diff > p.epsilon)
                inc = false;
        }
    }
    if (dec && *lv[*last] > *lv[*first])
        out.add(Shape::progressive_decreasing);
    if (inc && *lv[*last] < *lv[*first])
        out.add(Shape::progressive_increasing);

    auto pl = plateaus(lv, p.equiv_tol);
    if (pl.size() >= 2)
        out.add(Shape::multistagnant);
    for (const auto& v : pl) {
        if (2 * v.start > 2 * (n / 2))
            out.add(Shape::late_monostagnant);
        if (v.start < n / 2)
            out.add(Shape::early_monostagnant);
    }

    int present = 0, good = 0;
    for (const auto& l : lv) {
        if (l) {
            ++present;
            good += *l <= *p.lambda ? 1 : 0;
        }
    }
    if (good >= p.rho * present)
        out.add(Shape::emerging);
    return out;
}

} // namespace oracle
