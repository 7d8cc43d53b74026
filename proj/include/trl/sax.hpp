#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trl::sax {

/// k-1 strictly increasing cut values splitting the real line into k
/// value ranges.
class Breakpoints {
public:
    /// Throws InvalidArgument unless cuts are finite, strictly increasing
    /// and at least one.
    explicit Breakpoints(std::vector<double> cuts);

    const std::vector<double>& cuts() const noexcept { return cuts_; }
    int alphabet_size() const noexcept { return static_cast<int>(cuts_.size()) + 1; }

    friend bool operator==(const Breakpoints&, const Breakpoints&) = default;

private:
    std::vector<double> cuts_;
};

/// Symbols are rank-style: 1 is the highest value range, k the lowest.
struct SaxWord {
    std::vector<int> symbols;
    friend bool operator==(const SaxWord&, const SaxWord&) = default;
};

/// Quantile cuts at fractions 1/k .. (k-1)/k, interpolating linearly
/// between order statistics. Needs at least k distinct values.
Breakpoints equal_frequency_breakpoints(std::span<const double> values, int k);

/// k-1 evenly spaced cuts strictly inside (min, max).
Breakpoints equal_width_breakpoints(double min, double max, int k);

/// One symbol per value; a value equal to a cut belongs to the range above.
SaxWord sax_encode(std::span<const double> series, const Breakpoints& bp);

/// Lower-bounding distance without dimensionality reduction: adjacent
/// value ranges contribute nothing, farther ones the gap between their
/// nearest cuts. Throws InvalidArgument on length mismatch or a symbol
/// outside the breakpoints' alphabet.
double mindist(const SaxWord& a, const SaxWord& b, const Breakpoints& bp);

/// Plain Euclidean distance between symbol sequences.
double symbol_euclidean(const SaxWord& a, const SaxWord& b);

/// Euclidean distance between raw series.
double euclidean(std::span<const double> a, std::span<const double> b);

std::string format_word(const SaxWord& w);
SaxWord parse_word(std::string_view text);
std::string format_breakpoints(const Breakpoints& bp);
Breakpoints parse_breakpoints(std::string_view text);

} // namespace trl::sax
