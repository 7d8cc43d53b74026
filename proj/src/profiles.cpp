#include "trl/profiles.hpp"

#include "trl/error.hpp"

#include <algorithm>

namespace trl {

std::string_view shape_name(Shape s)
{
    switch (s) {
    case Shape::spike: return "SPIKE";
    case Shape::fluttering: return "FLUTTERING";
    case Shape::progressive_increasing: return "PROGRESSIVE_INCREASING";
    case Shape::progressive_decreasing: return "PROGRESSIVE_DECREASING";
    case Shape::multistagnant: return "MULTISTAGNANT";
    case Shape::late_monostagnant: return "LATE_MONOSTAGNANT";
    case Shape::early_monostagnant: return "EARLY_MONOSTAGNANT";
    case Shape::emerging: return "EMERGING";
    }
    return "NONE";
}

std::string_view shape_name(std::optional<Shape> s)
{
    return s ? shape_name(*s) : "NONE";
}

std::optional<Shape> parse_shape(std::string_view name)
{
    for (auto s : all_shapes) {
        if (shape_name(s) == name)
            return s;
    }
    return std::nullopt;
}

void ClassifierParams::validate() const
{
    if (delta_spike < 1)
        throw InvalidArgument("delta_spike must be >= 1");
    if (epsilon < 0)
        throw InvalidArgument("epsilon must be >= 0");
    if (lambda && *lambda < 0)
        throw InvalidArgument("lambda must be >= 0");
    if (!(rho > 0.0 && rho <= 1.0))
        throw InvalidArgument("rho must be in (0, 1]");
    if (equiv_tol < 0)
        throw InvalidArgument("equiv_tol must be >= 0");
}

ClassifierParams ClassifierParams::resolved(const BinningScheme& scheme) const
{
    ClassifierParams out = *this;
    if (!out.lambda) {
        out.lambda = scheme.last_boundary() >= 20 ? static_cast<int>(bin_of_rank(scheme, 20))
                                                  : static_cast<int>(scheme.bin_count() - 1);
    }
    return out;
}

ProfileLabels::ProfileLabels(std::initializer_list<Shape> shapes)
{
    for (auto s : shapes)
        add(s);
}

std::vector<Shape> ProfileLabels::matched() const
{
    std::vector<Shape> out;
    for (auto s : all_shapes) {
        if (contains(s))
            out.push_back(s);
    }
    return out;
}

std::optional<Shape> ProfileLabels::primary() const
{
    for (auto s : all_shapes) {
        if (contains(s))
            return s;
    }
    return std::nullopt;
}

std::optional<Shape> primary_label(const ProfileLabels& labels)
{
    return labels.primary();
}

std::vector<Plateau> detect_plateaus(const LevelProfile& profile, int equiv_tol)
{
    const auto& lv = profile.levels;
    std::vector<Plateau> out;
    std::size_t i = 0;
    while (i < lv.size()) {
        if (!lv[i]) {
            ++i;
            continue;
        }
        int lo = *lv[i];
        int hi = lo;
        std::size_t j = i;
        while (j + 1 < lv.size() && lv[j + 1]) {
            int next = *lv[j + 1];
            if (std::max(hi, next) - std::min(lo, next) > equiv_tol)
                break;
            lo = std::min(lo, next);
            hi = std::max(hi, next);
            ++j;
        }
        if (j - i + 1 >= 3) {
            out.push_back({i, j, lo});
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

namespace {

struct Point {
    std::size_t t;
    int level;
};

bool spike(const std::vector<Point>& pts, int delta)
{
    // Two dominating points would have to beat each other, so existence
    // already implies uniqueness.
    for (const auto& a : pts) {
        bool dominates = std::all_of(pts.begin(), pts.end(), [&](const Point& y) {
            return y.t == a.t || y.level - a.level >= delta;
        });
        if (dominates)
            return true;
    }
    return false;
}

bool fluttering(const std::vector<Point>& pts, int delta)
{
    for (std::size_t a = 0; a < pts.size(); ++a) {
        for (std::size_t b = a + 2; b < pts.size(); ++b) {
            int worst_peak = std::max(pts[a].level, pts[b].level);
            bool valley = true;
            for (std::size_t y = a + 1; y < b && valley; ++y)
                valley = pts[y].level - worst_peak >= delta;
            if (valley)
                return true;
        }
    }
    return false;
}

// Every later level minus every earlier level stays within the band.
bool pairwise(const std::vector<Point>& pts, int lo, int hi)
{
    for (std::size_t b = 0; b < pts.size(); ++b) {
        for (std::size_t a = b + 1; a < pts.size(); ++a) {
            int d = pts[a].level - pts[b].level;
            if (d < lo || d > hi)
                return false;
        }
    }
    return true;
}

} // namespace

ProfileLabels classify(const LevelProfile& profile, const ClassifierParams& params)
{
    params.validate();
    if (!params.lambda)
        throw InvalidArgument("classifier lambda is unresolved");

    std::vector<Point> pts;
    for (std::size_t t = 0; t < profile.levels.size(); ++t) {
        if (profile.levels[t])
            pts.push_back({t, *profile.levels[t]});
    }
    if (pts.size() < 2)
        throw InvalidArgument("item '" + profile.item + "' has " + std::to_string(pts.size()) +
                              " present levels; classification needs 2");

    ProfileLabels labels;
    const int big = 1 << 30;
    if (spike(pts, params.delta_spike))
        labels.add(Shape::spike);
    if (fluttering(pts, params.delta_spike))
        labels.add(Shape::fluttering);
    if (pts.back().level < pts.front().level && pairwise(pts, -big, params.epsilon))
        labels.add(Shape::progressive_increasing);
    if (pts.back().level > pts.front().level && pairwise(pts, -params.epsilon, big))
        labels.add(Shape::progressive_decreasing);

    auto plateaus = detect_plateaus(profile, params.equiv_tol);
    const std::size_t mid = profile.levels.size() / 2;
    if (plateaus.size() >= 2)
        labels.add(Shape::multistagnant);
    if (std::any_of(plateaus.begin(), plateaus.end(), [&](const Plateau& v) { return v.start > mid; }))
        labels.add(Shape::late_monostagnant);
    if (std::any_of(plateaus.begin(), plateaus.end(), [&](const Plateau& v) { return v.start < mid; }))
        labels.add(Shape::early_monostagnant);

    auto above = std::count_if(pts.begin(), pts.end(),
                               [&](const Point& p) { return p.level <= *params.lambda; });
    if (static_cast<double>(above) >= params.rho * static_cast<double>(pts.size()))
        labels.add(Shape::emerging);
    return labels;
}

LabelHistogram profile_histogram(const BinnedMap& map, const ClassifierParams& params)
{
    auto resolved = params.resolved(map.scheme());
    LabelHistogram hist;
    for (std::size_t i = 0; i < map.item_count(); ++i) {
        auto profile = item_profile(map, i);
        if (profile.present_count() < 2) {
            ++hist[std::nullopt];
            continue;
        }
        ++hist[classify(profile, resolved).primary()];
    }
    return hist;
}

std::string write_histogram_csv(const LabelHistogram& hist)
{
    std::string out = "label,count\n";
    auto emit = [&](std::optional<Shape> key) {
        auto it = hist.find(key);
        out += std::string(shape_name(key)) + "," +
               std::to_string(it == hist.end() ? 0 : it->second) + "\n";
    };
    for (auto s : all_shapes)
        emit(s);
    emit(std::nullopt);
    return out;
}

} // namespace trl
