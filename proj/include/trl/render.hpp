#pragma once

#include "trl/profiles.hpp"
#include "trl/rankbin.hpp"
#include "trl/table.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace trl {

struct RenderStyle {
    int box_width = 30;
    int box_height = 5;
    int h_gap = 2;
    int v_gap = 2;
    int margin = 10;
    std::string highlight_color = "#000000";
    std::string context_color = "#808080";
    std::string background = "#ffffff";
    int label_font_size = 8; // 0 disables text

    /// Throws InvalidArgument on non-positive box sizes, negative gaps or
    /// colors containing markup characters.
    void validate() const;
};

/// Applies `key=value` lines (blank lines and `#` comments ignored) over
/// `base`. Keys are the RenderStyle field names.
RenderStyle parse_style(std::string_view text, RenderStyle base = {});

/// The binned map as SVG: one column per time point, oldest leftmost, one
/// box per occupied bin stacked from bin 0 downward. The box holding
/// `highlight` takes the highlight color. Rects are emitted column-major,
/// top to bottom. Throws NotFoundError for an unknown highlight.
std::string render_map_svg(const BinnedMap& map, const std::optional<std::string>& highlight,
                           const RenderStyle& style);

/// Map of raw ranks: the identity scheme over all items.
std::string render_unbinned_svg(const TimeTable& table, const std::optional<std::string>& highlight,
                                const RenderStyle& style);

/// One-row thumbnail of a profile with its primary label as caption.
std::string render_profile_strip(const LevelProfile& profile, const ProfileLabels& labels,
                                 const RenderStyle& style);

} // namespace trl
