#pragma once

#include "trl/rankbin.hpp"

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trl {

/// A run of at least three contiguous present levels within equiv_tol of
/// each other. `level` is the smallest (best) level in the run.
struct Plateau {
    std::size_t start;
    std::size_t end; // inclusive
    int level;
    friend bool operator==(const Plateau&, const Plateau&) = default;
};

/// The eight temporal shapes, in primary-label priority order.
enum class Shape {
    spike,
    fluttering,
    progressive_increasing,
    progressive_decreasing,
    multistagnant,
    late_monostagnant,
    early_monostagnant,
    emerging,
};

inline constexpr std::array<Shape, 8> all_shapes = {
    Shape::spike,
    Shape::fluttering,
    Shape::progressive_increasing,
    Shape::progressive_decreasing,
    Shape::multistagnant,
    Shape::late_monostagnant,
    Shape::early_monostagnant,
    Shape::emerging,
};

/// SPIKE, FLUTTERING, ...; "NONE" is used for an empty match.
std::string_view shape_name(Shape s);
std::string_view shape_name(std::optional<Shape> s);
std::optional<Shape> parse_shape(std::string_view name);

/// Thresholds of the classifier, all in bin-level units. Smaller level is a
/// better rank; level a dominates level b when b - a >= delta_spike.
struct ClassifierParams {
    int delta_spike = 2;
    int epsilon = 0;
    /// EMERGING threshold line; nullopt resolves to the bin of rank 20 (or
    /// the last bin when the scheme is shorter).
    std::optional<int> lambda;
    double rho = 0.5;
    int equiv_tol = 1;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;

    /// Copy with lambda filled in for `scheme`.
    ClassifierParams resolved(const BinningScheme& scheme) const;
};

/// Set of matched shapes, stored as a bitmask in priority order.
class ProfileLabels {
public:
    ProfileLabels() = default;
    ProfileLabels(std::initializer_list<Shape> shapes);

    void add(Shape s) { bits_ |= bit(s); }
    bool contains(Shape s) const { return (bits_ & bit(s)) != 0; }
    bool empty() const { return bits_ == 0; }
    std::vector<Shape> matched() const;
    /// First matched shape in priority order, or nullopt (NONE).
    std::optional<Shape> primary() const;

    friend bool operator==(const ProfileLabels&, const ProfileLabels&) = default;

private:
    static unsigned bit(Shape s) { return 1u << static_cast<unsigned>(s); }
    unsigned bits_ = 0;
};

std::optional<Shape> primary_label(const ProfileLabels& labels);

/// Greedy left-to-right maximal runs; an absent level breaks a run.
std::vector<Plateau> detect_plateaus(const LevelProfile& profile, int equiv_tol);

/// Evaluates every shape rule over the present levels. `params.lambda`
/// must be set (see ClassifierParams::resolved). Throws InvalidArgument
/// when fewer than two levels are present.
ProfileLabels classify(const LevelProfile& profile, const ClassifierParams& params);

/// Primary-label counts over every item of a map; key nullopt is NONE.
/// Items with fewer than two present levels count as NONE.
using LabelHistogram = std::map<std::optional<Shape>, std::size_t>;

LabelHistogram profile_histogram(const BinnedMap& map, const ClassifierParams& params);

/// `label,count` lines for every shape plus NONE, in priority order.
std::string write_histogram_csv(const LabelHistogram& hist);

} // namespace trl
