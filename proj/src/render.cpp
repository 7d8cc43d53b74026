#include "trl/render.hpp"

#include "trl/error.hpp"

#include <algorithm>
#include <charconv>
#include <vector>

namespace trl {

namespace {

std::string escape(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

class SvgWriter {
public:
    SvgWriter(int width, int height, const RenderStyle& style) : style_(style)
    {
        auto w = std::to_string(width);
        auto h = std::to_string(height);
        out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
               "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w +
               "\" height=\"" + h + "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
        out_ += "<rect class=\"bg\" x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h +
                "\" fill=\"" + escape(style.background) + "\"/>\n";
    }

    void box(int x, int y, bool highlighted)
    {
        out_ += "<rect class=\"" + std::string(highlighted ? "hl" : "ctx") + "\" x=\"" +
                std::to_string(x) + "\" y=\"" + std::to_string(y) + "\" width=\"" +
                std::to_string(style_.box_width) + "\" height=\"" +
                std::to_string(style_.box_height) + "\" fill=\"" +
                escape(highlighted ? style_.highlight_color : style_.context_color) + "\"/>\n";
    }

    void text(int x, int y, std::string_view s, std::string_view anchor = "start")
    {
        out_ += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
                "\" font-family=\"sans-serif\" font-size=\"" +
                std::to_string(style_.label_font_size) + "\" text-anchor=\"" +
                std::string(anchor) + "\">" + escape(s) + "</text>\n";
    }

    void title(std::string_view s) { out_ += "<title>" + escape(s) + "</title>\n"; }

    std::string finish() &&
    {
        out_ += "</svg>\n";
        return std::move(out_);
    }

private:
    const RenderStyle& style_;
    std::string out_;
};

int label_band(const RenderStyle& style)
{
    return style.label_font_size > 0 ? style.label_font_size + 4 : 0;
}

} // namespace

void RenderStyle::validate() const
{
    if (box_width < 1 || box_height < 1)
        throw InvalidArgument("box dimensions must be positive");
    if (h_gap < 0 || v_gap < 0 || margin < 0)
        throw InvalidArgument("gaps and margin must be >= 0");
    if (label_font_size < 0)
        throw InvalidArgument("label_font_size must be >= 0");
    for (const auto* c : {&highlight_color, &context_color, &background}) {
        if (c->empty() || c->find_first_of("<>\"&'") != std::string::npos)
            throw InvalidArgument("invalid color '" + *c + "'");
    }
}

RenderStyle parse_style(std::string_view text, RenderStyle base)
{
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
                s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.remove_suffix(1);
            return s;
        };
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("style line " + std::to_string(line_no) + ": expected key=value");
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));

        auto as_int = [&](int& field) {
            int v = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc{} || ptr != value.data() + value.size())
                throw ParseError("style line " + std::to_string(line_no) + ": '" +
                                 std::string(key) + "' needs an integer");
            field = v;
        };
        if (key == "box_width") as_int(base.box_width);
        else if (key == "box_height") as_int(base.box_height);
        else if (key == "h_gap") as_int(base.h_gap);
        else if (key == "v_gap") as_int(base.v_gap);
        else if (key == "margin") as_int(base.margin);
        else if (key == "label_font_size") as_int(base.label_font_size);
        else if (key == "highlight_color") base.highlight_color = std::string(value);
        else if (key == "context_color") base.context_color = std::string(value);
        else if (key == "background") base.background = std::string(value);
        else
            throw ParseError("style line " + std::to_string(line_no) + ": unknown key '" +
                             std::string(key) + "'");
    }
    base.validate();
    return base;
}

std::string render_map_svg(const BinnedMap& map, const std::optional<std::string>& highlight,
                           const RenderStyle& style)
{
    style.validate();
    std::optional<std::size_t> focus;
    if (highlight)
        focus = map.item_index(*highlight);

    const int n = static_cast<int>(map.time_count());
    const int bins = static_cast<int>(map.scheme().bin_count());
    const int col = style.box_width + style.h_gap;
    const int row = style.box_height + style.v_gap;
    const int top = style.margin + label_band(style);
    const int width = 2 * style.margin + n * col;
    const int height = top + bins * row + style.margin;

    SvgWriter svg(width, height, style);
    svg.title(highlight ? "rank levels: " + *highlight : std::string("rank levels"));

    if (style.label_font_size > 0) {
        for (int t = 0; t < n; ++t)
            svg.text(style.margin + t * col + style.box_width / 2, style.margin + style.label_font_size,
                     map.time_labels()[static_cast<std::size_t>(t)], "middle");
    }

    std::vector<char> occupied(static_cast<std::size_t>(bins));
    for (int t = 0; t < n; ++t) {
        std::fill(occupied.begin(), occupied.end(), 0);
        for (std::size_t i = 0; i < map.item_count(); ++i) {
            if (auto lv = map.level(i, static_cast<std::size_t>(t)))
                occupied[*lv] = 1;
        }
        std::optional<std::size_t> focus_bin;
        if (focus)
            focus_bin = map.level(*focus, static_cast<std::size_t>(t));
        for (int b = 0; b < bins; ++b) {
            if (!occupied[static_cast<std::size_t>(b)])
                continue;
            svg.box(style.margin + t * col, top + b * row,
                    focus_bin && *focus_bin == static_cast<std::size_t>(b));
        }
    }
    return std::move(svg).finish();
}

std::string render_unbinned_svg(const TimeTable& table, const std::optional<std::string>& highlight,
                                const RenderStyle& style)
{
    auto scheme = BinningScheme::identity(static_cast<int>(table.item_count()));
    return render_map_svg(build_binned_map(table, scheme, NullMode::keep_nulls), highlight, style);
}

std::string render_profile_strip(const LevelProfile& profile, const ProfileLabels& labels,
                                 const RenderStyle& style)
{
    style.validate();
    const int n = static_cast<int>(profile.levels.size());
    int max_level = 0;
    for (const auto& l : profile.levels) {
        if (l)
            max_level = std::max(max_level, *l);
    }
    const int col = style.box_width + style.h_gap;
    const int top = style.margin + label_band(style);
    const int width = 2 * style.margin + std::max(n, 1) * col;
    const int height = top + (max_level + 1) * style.box_height + style.margin;

    SvgWriter svg(width, height, style);
    svg.title(profile.item);
    if (style.label_font_size > 0)
        svg.text(style.margin, style.margin + style.label_font_size, shape_name(labels.primary()));
    for (int t = 0; t < n; ++t) {
        if (const auto& l = profile.levels[static_cast<std::size_t>(t)])
            svg.box(style.margin + t * col, top + *l * style.box_height, true);
    }
    return std::move(svg).finish();
}

} // namespace trl
