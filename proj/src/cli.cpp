#include "trl/cli.hpp"

#include "trl/csv.hpp"
#include "trl/error.hpp"
#include "trl/generator.hpp"
#include "trl/ingest.hpp"
#include "trl/profiles.hpp"
#include "trl/rankbin.hpp"
#include "trl/render.hpp"
#include "trl/sax.hpp"
#include "trl/service.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace trl::cli {

namespace {

std::string read_source(const std::string& path, std::istream& in)
{
    std::stringstream buf;
    if (path.empty() || path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw Error("cannot read '" + path + "'");
    buf << file.rdbuf();
    return buf.str();
}

void write_sink(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw Error("cannot write '" + path + "'");
    file << text;
    if (!file)
        throw Error("failed writing '" + path + "'");
}

std::string fmt9(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct InputOptions {
    std::string path;
    std::string format = "wide";
    bool tab = false;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--in", path, "Input file; '-' or omitted reads standard input");
        cmd->add_option("--format", format, "Table layout: wide or pairs")
            ->check(CLI::IsMember({"wide", "pairs"}));
        cmd->add_flag("--tab", tab, "Fields are tab-separated instead of comma-separated");
    }
    char sep() const { return tab ? '\t' : ','; }
    TableFormat table_format() const { return format == "pairs" ? TableFormat::pairs : TableFormat::wide; }
};

struct BinningOptions {
    std::string couples;
    std::string null_mode = "keep_nulls";

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--couples", couples,
                        "Binning couples, e.g. \"(20,1),(100,5),(191,10)\"; default sized to the item count");
        cmd->add_option("--null-mode", null_mode, "keep_nulls or drop_last_bin")
            ->check(CLI::IsMember({"keep_nulls", "drop_last_bin"}));
    }
    BinningScheme scheme(const TimeTable& table) const
    {
        return couples.empty() ? suggest_scheme(static_cast<int>(table.item_count()))
                               : BinningScheme::parse(couples);
    }
};

// Bad flag values or combinations caught after parsing; exits like a parse error.
struct UsageError : Error {
    using Error::Error;
};

struct ParamOptions {
    std::string file;
    std::optional<int> delta_spike;
    std::optional<int> epsilon;
    std::optional<int> lambda;
    std::optional<double> rho;
    std::optional<int> equiv_tol;

    void add_to(CLI::App* cmd)
    {
        cmd->add_option("--params", file, "Classifier parameter file (key=value lines)");
        cmd->add_option("--delta-spike", delta_spike, "Bin gap that counts as domination (default 2)");
        cmd->add_option("--epsilon", epsilon, "Trend tolerance in bins (default 0)");
        cmd->add_option("--lambda", lambda, "EMERGING threshold bin (default: bin of rank 20)");
        cmd->add_option("--rho", rho, "EMERGING share of levels at or above lambda (default 0.5)");
        cmd->add_option("--equiv-tol", equiv_tol, "Plateau level tolerance in bins (default 1)");
    }

    ClassifierParams build() const
    {
        ClassifierParams p;
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in)
                throw Error("cannot read '" + file + "'");
            std::string line;
            int no = 0;
            while (std::getline(in, line)) {
                ++no;
                if (!line.empty() && line.back() == '\r')
                    line.pop_back();
                auto first = line.find_first_not_of(" \t");
                if (first == std::string::npos || line[first] == '#')
                    continue;
                auto eq = line.find('=');
                if (eq == std::string::npos)
                    throw ParseError(file + ":" + std::to_string(no) + ": expected key=value");
                auto strip = [](std::string s) {
                    auto b = s.find_first_not_of(" \t");
                    auto e = s.find_last_not_of(" \t");
                    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
                };
                auto key = strip(line.substr(0, eq));
                auto value = strip(line.substr(eq + 1));
                auto bad = [&] {
                    return ParseError(file + ":" + std::to_string(no) + ": bad value for '" + key + "'");
                };
                auto as_int = [&] {
                    int v = 0;
                    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
                    if (ec != std::errc{} || ptr != value.data() + value.size())
                        throw bad();
                    return v;
                };
                if (key == "delta_spike") p.delta_spike = as_int();
                else if (key == "epsilon") p.epsilon = as_int();
                else if (key == "lambda") p.lambda = as_int();
                else if (key == "equiv_tol") p.equiv_tol = as_int();
                else if (key == "rho") {
                    double v = 0;
                    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
                    if (ec != std::errc{} || ptr != value.data() + value.size())
                        throw bad();
                    p.rho = v;
                } else
                    throw ParseError(file + ":" + std::to_string(no) + ": unknown key '" + key + "'");
            }
        }
        if (delta_spike) p.delta_spike = *delta_spike;
        if (epsilon) p.epsilon = *epsilon;
        if (lambda) p.lambda = *lambda;
        if (rho) p.rho = *rho;
        if (equiv_tol) p.equiv_tol = *equiv_tol;
        try {
            p.validate();
        } catch (const InvalidArgument& e) {
            throw UsageError(e.what());
        }
        return p;
    }
};

RenderStyle load_style(const std::string& flag_path)
{
    std::string path = flag_path;
    if (path.empty()) {
        if (const char* env = std::getenv("TIMERANK_STYLE"))
            path = env;
    }
    if (path.empty())
        return {};
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read style file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_style(buf.str());
}

/// A map read from a map CSV, or built from a table with the binning flags.
BinnedMap load_map(const InputOptions& input, const BinningOptions& binning, std::istream& in)
{
    auto text = read_source(input.path, in);
    if (looks_like_map_csv(text))
        return parse_map_csv(text, input.sep());
    auto table = parse_table(text, input.table_format(), input.sep());
    return build_binned_map(table, binning.scheme(table), parse_null_mode(binning.null_mode));
}

std::string join_matched(const ProfileLabels& labels)
{
    std::string out;
    for (auto s : labels.matched()) {
        if (!out.empty())
            out.push_back('|');
        out += shape_name(s);
    }
    return out;
}

std::vector<double> parse_series(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto v = csv::parse_real(part);
        if (!v)
            throw ParseError("bad series value '" + part + "'");
        out.push_back(*v);
    }
    return out;
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"timerank: rank binning, temporal profile classification and SAX comparison",
                 "timerank"};
    app.require_subcommand(1);

    // scheme
    auto* scheme_cmd = app.add_subcommand("scheme", "Print the bin labels generated by a couples list");
    std::string scheme_couples;
    bool scheme_boundaries = false;
    scheme_cmd->add_option("--couples", scheme_couples, "Couples, e.g. \"(20,1),(100,5),(191,10)\"")
        ->required();
    scheme_cmd->add_flag("--boundaries", scheme_boundaries, "Print bare boundary ranks instead of labels");

    // map
    auto* map_cmd = app.add_subcommand("map", "Bin a table and write the map as CSV and/or SVG");
    InputOptions map_in;
    BinningOptions map_bin;
    std::string map_highlight, map_svg, map_out, map_style;
    bool map_unbinned = false;
    map_in.add_to(map_cmd);
    map_bin.add_to(map_cmd);
    map_cmd->add_option("--highlight", map_highlight, "Item whose boxes are drawn in the highlight color");
    map_cmd->add_option("--svg", map_svg, "Write the rendered map to this SVG file");
    map_cmd->add_option("--out", map_out, "Write the map CSV here instead of standard output");
    map_cmd->add_option("--style", map_style, "Style file (key=value); defaults to $TIMERANK_STYLE");
    map_cmd->add_flag("--unbinned", map_unbinned, "Render raw ranks (one box per item) in the SVG");

    // classify
    auto* cls_cmd = app.add_subcommand("classify", "Match item profiles against the eight temporal shapes");
    InputOptions cls_in;
    BinningOptions cls_bin;
    ParamOptions cls_params;
    std::string cls_item, cls_out, cls_strip, cls_style;
    cls_in.add_to(cls_cmd);
    cls_bin.add_to(cls_cmd);
    cls_params.add_to(cls_cmd);
    cls_cmd->add_option("--item", cls_item, "Report one item's levels, plateaus and full matched set");
    cls_cmd->add_option("--out", cls_out, "Write results here instead of standard output");
    cls_cmd->add_option("--strip", cls_strip, "With --item, also write its profile strip SVG here");
    cls_cmd->add_option("--style", cls_style, "Style file (key=value); defaults to $TIMERANK_STYLE");

    // hist
    auto* hist_cmd = app.add_subcommand("hist", "Count primary labels over all items");
    InputOptions hist_in;
    BinningOptions hist_bin;
    ParamOptions hist_params;
    std::string hist_out;
    hist_in.add_to(hist_cmd);
    hist_bin.add_to(hist_cmd);
    hist_params.add_to(hist_cmd);
    hist_cmd->add_option("--out", hist_out, "Write the label,count CSV here instead of standard output");

    // sax
    auto* sax_cmd = app.add_subcommand("sax", "SAX words and distances for comparison");
    InputOptions sax_in;
    std::string sax_items, sax_series, sax_bp, sax_cuts = "frequency";
    std::vector<std::string> sax_words;
    int sax_k = 8;
    sax_in.add_to(sax_cmd);
    sax_cmd->add_option("--items", sax_items, "Two items of the input table, as a,b");
    sax_cmd->add_option("--series", sax_series, "Encode this comma-separated series (needs --breakpoints)");
    sax_cmd->add_option("--word", sax_words, "A word such as 2,2,1; give twice to compare (needs --breakpoints)")
        ->allow_extra_args(false);
    sax_cmd->add_option("--breakpoints", sax_bp, "Comma-separated cut values; overrides --k/--cuts");
    sax_cmd->add_option("--k", sax_k, "Alphabet size for computed cuts")->check(CLI::Range(2, 1000));
    sax_cmd->add_option("--cuts", sax_cuts, "Computed cut policy: frequency or width")
        ->check(CLI::IsMember({"frequency", "width"}));

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "Write a random uniform baseline table (wide CSV)");
    GeneratorSpec gen_spec;
    std::string gen_out;
    gen_cmd->add_option("--items", gen_spec.item_count, "Item count")->check(CLI::PositiveNumber);
    gen_cmd->add_option("--times", gen_spec.time_points, "Time point count")->check(CLI::Range(2, 100000));
    gen_cmd->add_option("--seed", gen_spec.seed, "Generator seed (mt19937_64)");
    gen_cmd->add_option("--out", gen_out, "Write here instead of standard output");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Serve datasets over HTTP for the explorer");
    service::ServeConfig serve_cfg;
    std::string serve_format = "wide";
    bool serve_tab = false;
    serve_cmd->add_option("--data", serve_cfg.data_paths, "Dataset file (repeatable)")->required();
    serve_cmd->add_option("--format", serve_format, "Table layout: wide or pairs")
        ->check(CLI::IsMember({"wide", "pairs"}));
    serve_cmd->add_flag("--tab", serve_tab, "Fields are tab-separated");
    serve_cmd->add_option("--host", serve_cfg.host, "Listen address");
    serve_cmd->add_option("--port", serve_cfg.port, "Listen port")->check(CLI::Range(1, 65535));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (*scheme_cmd) {
            auto scheme = BinningScheme::parse(scheme_couples);
            for (std::size_t i = 0; i < scheme.bin_count(); ++i)
                out << (scheme_boundaries ? std::to_string(scheme.boundaries()[i]) : scheme.label(i)) << "\n";
        } else if (*map_cmd) {
            auto style = load_style(map_style);
            auto text = read_source(map_in.path, in);
            auto table = parse_table(text, map_in.table_format(), map_in.sep());
            auto m = build_binned_map(table, map_bin.scheme(table), parse_null_mode(map_bin.null_mode));
            std::optional<std::string> highlight;
            if (!map_highlight.empty())
                highlight = map_highlight;
            if (!map_svg.empty()) {
                auto svg = map_unbinned ? render_unbinned_svg(table, highlight, style)
                                        : render_map_svg(m, highlight, style);
                write_sink(map_svg, svg, out);
            } else if (highlight) {
                m.item_index(*highlight);
            }
            if (map_svg != "-")
                write_sink(map_out, write_map_csv(m, map_in.sep()), out);
        } else if (*cls_cmd) {
            auto m = load_map(cls_in, cls_bin, in);
            auto params = cls_params.build().resolved(m.scheme());
            std::string result;
            if (!cls_item.empty()) {
                auto prof = item_profile(m, cls_item);
                ProfileLabels labels;
                if (prof.present_count() >= 2)
                    labels = classify(prof, params);
                result += "item: " + prof.item + "\n";
                result += "primary: " + std::string(shape_name(labels.primary())) + "\n";
                result += "matched: " + join_matched(labels) + "\n";
                result += "levels:";
                for (const auto& l : prof.levels)
                    result += " " + (l ? m.scheme().label(static_cast<std::size_t>(*l)) : std::string("NA"));
                result += "\nmean_level: " + (prof.mean_level ? fmt9(*prof.mean_level) : std::string("NA")) + "\n";
                result += "plateaus:";
                for (const auto& v : detect_plateaus(prof, params.equiv_tol))
                    result += " [" + std::to_string(v.start) + "," + std::to_string(v.end) + "]@" +
                              m.scheme().label(static_cast<std::size_t>(v.level));
                result += "\n";
                if (!cls_strip.empty())
                    write_sink(cls_strip, render_profile_strip(prof, labels, load_style(cls_style)), out);
            } else {
                result = "item,primary,matched\n";
                for (std::size_t i = 0; i < m.item_count(); ++i) {
                    auto prof = item_profile(m, i);
                    ProfileLabels labels;
                    if (prof.present_count() >= 2)
                        labels = classify(prof, params);
                    result += csv::quote(prof.item) + "," + std::string(shape_name(labels.primary())) + "," +
                              join_matched(labels) + "\n";
                }
            }
            write_sink(cls_out, result, out);
        } else if (*hist_cmd) {
            auto m = load_map(hist_in, hist_bin, in);
            write_sink(hist_out, write_histogram_csv(profile_histogram(m, hist_params.build())), out);
        } else if (*sax_cmd) {
            std::optional<sax::Breakpoints> bp;
            if (!sax_bp.empty())
                bp = sax::parse_breakpoints(sax_bp);
            if (!sax_series.empty()) {
                if (!bp)
                    throw InvalidArgument("--series needs --breakpoints");
                out << sax::format_word(sax::sax_encode(parse_series(sax_series), *bp)) << "\n";
            } else if (!sax_words.empty()) {
                if (!bp || sax_words.size() != 2)
                    throw UsageError("--word must be given twice, with --breakpoints");
                auto a = sax::parse_word(sax_words[0]);
                auto b = sax::parse_word(sax_words[1]);
                out << "mindist: " << fmt9(sax::mindist(a, b, *bp)) << "\n";
                out << "symbol_euclidean: " << fmt9(sax::symbol_euclidean(a, b)) << "\n";
            } else {
                auto comma = sax_items.find(',');
                if (comma == std::string::npos)
                    throw UsageError("sax needs --items a,b, --series or --word");
                std::string names[2] = {sax_items.substr(0, comma), sax_items.substr(comma + 1)};
                auto table = parse_table(read_source(sax_in.path, in), sax_in.table_format(), sax_in.sep());
                std::vector<double> pooled;
                double lo = INFINITY, hi = -INFINITY;
                for (std::size_t i = 0; i < table.item_count(); ++i) {
                    for (const auto& c : table.row(i)) {
                        if (c) {
                            pooled.push_back(*c);
                            lo = std::min(lo, *c);
                            hi = std::max(hi, *c);
                        }
                    }
                }
                if (!bp)
                    bp = sax_cuts == "width" ? sax::equal_width_breakpoints(lo, hi, sax_k)
                                             : sax::equal_frequency_breakpoints(pooled, sax_k);
                std::vector<double> series[2];
                sax::SaxWord words[2];
                for (int s = 0; s < 2; ++s) {
                    for (const auto& c : table.row(table.item_index(names[s]))) {
                        if (!c)
                            throw InvalidArgument("item '" + names[s] + "' has missing values");
                        series[s].push_back(*c);
                    }
                    words[s] = sax::sax_encode(series[s], *bp);
                }
                out << "breakpoints: " << sax::format_breakpoints(*bp) << "\n";
                for (int s = 0; s < 2; ++s)
                    out << names[s] << ": " << sax::format_word(words[s]) << "\n";
                out << "mindist: " << fmt9(sax::mindist(words[0], words[1], *bp)) << "\n";
                out << "symbol_euclidean: " << fmt9(sax::symbol_euclidean(words[0], words[1])) << "\n";
                out << "euclidean: " << fmt9(sax::euclidean(series[0], series[1])) << "\n";
            }
        } else if (*gen_cmd) {
            write_sink(gen_out, write_wide_table(generate_random_table(gen_spec)), out);
        } else if (*serve_cmd) {
            serve_cfg.format = serve_format == "pairs" ? TableFormat::pairs : TableFormat::wide;
            serve_cfg.sep = serve_tab ? '\t' : ',';
            if (!service::serve(serve_cfg)) {
                err << "timerank: cannot listen on " << serve_cfg.host << ":" << serve_cfg.port << "\n";
                return data_error;
            }
        }
    } catch (const UsageError& e) {
        err << "timerank: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception& e) {
        err << "timerank: " << e.what() << "\n";
        return data_error;
    }
    return ok;
}

} // namespace trl::cli
