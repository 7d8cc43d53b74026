#include "trl/service.hpp"

#include "trl/error.hpp"
#include "trl/http.hpp"
#include "trl/ingest.hpp"
#include "trl/render.hpp"
#include "trl/sax.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace trl::service {

using nlohmann::json;

struct DatasetHandle::Slot {
    std::once_flag once;
    std::shared_ptr<const BinnedMap> map;
};

DatasetHandle::DatasetHandle(std::string id, TimeTable table)
    : id_(std::move(id)), table_(std::move(table)),
      default_scheme_(suggest_scheme(static_cast<int>(table_.item_count())))
{
}

std::shared_ptr<const BinnedMap> DatasetHandle::map(const BinningScheme& scheme, NullMode mode) const
{
    constexpr std::size_t max_cached = 64;
    auto key = scheme.to_string() + "|" + std::string(to_string(mode));
    std::shared_ptr<Slot> slot;
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            slot = it->second;
        } else if (cache_.size() < max_cached) {
            slot = std::make_shared<Slot>();
            cache_.emplace(key, slot);
        }
    }
    if (!slot)
        return std::make_shared<const BinnedMap>(build_binned_map(table_, scheme, mode));
    // A throwing build leaves the flag unset, so the next caller retries.
    std::call_once(slot->once, [&] {
        slot->map = std::make_shared<const BinnedMap>(build_binned_map(table_, scheme, mode));
    });
    return slot->map;
}

namespace {

/// Error raised while handling a request, carrying its HTTP status.
struct HttpError {
    int status;
    std::string message;
    std::string field;
};

double round9(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::strtod(buf, nullptr);
}

json level_json(const std::optional<int>& l)
{
    return l ? json(*l) : json(nullptr);
}

std::optional<std::string> param(const Query& q, const std::string& key)
{
    auto it = q.find(key);
    if (it == q.end() || it->second.empty())
        return std::nullopt;
    return it->second;
}

int int_param(const Query& q, const std::string& key, int fallback)
{
    auto v = param(q, key);
    if (!v)
        return fallback;
    int out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size())
        throw HttpError{400, "parameter '" + key + "' must be an integer", key};
    return out;
}

double real_param(const Query& q, const std::string& key, double fallback)
{
    auto v = param(q, key);
    if (!v)
        return fallback;
    double out = 0;
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || ptr != v->data() + v->size() || !std::isfinite(out))
        throw HttpError{400, "parameter '" + key + "' must be a number", key};
    return out;
}

BinningScheme scheme_param(const Query& q, const DatasetHandle& ds)
{
    auto v = param(q, "couples");
    if (!v)
        return ds.default_scheme();
    try {
        return BinningScheme::parse(*v);
    } catch (const Error& e) {
        throw HttpError{400, e.what(), "couples"};
    }
}

NullMode null_mode_param(const Query& q)
{
    auto v = param(q, "null_mode");
    if (!v)
        return NullMode::keep_nulls;
    try {
        return parse_null_mode(*v);
    } catch (const Error& e) {
        throw HttpError{400, e.what(), "null_mode"};
    }
}

ClassifierParams classifier_param(const Query& q, const BinningScheme& scheme)
{
    ClassifierParams p;
    p.delta_spike = int_param(q, "delta_spike", p.delta_spike);
    p.epsilon = int_param(q, "epsilon", p.epsilon);
    if (param(q, "lambda"))
        p.lambda = int_param(q, "lambda", 0);
    p.rho = real_param(q, "rho", p.rho);
    p.equiv_tol = int_param(q, "equiv_tol", p.equiv_tol);
    try {
        p.validate();
    } catch (const Error& e) {
        std::string msg = e.what();
        std::string field = msg.substr(0, msg.find(' '));
        throw HttpError{400, msg, field};
    }
    return p.resolved(scheme);
}

json params_json(const ClassifierParams& p)
{
    return {{"delta_spike", p.delta_spike}, {"epsilon", p.epsilon}, {"lambda", *p.lambda},
            {"rho", round9(p.rho)}, {"equiv_tol", p.equiv_tol}};
}

json scheme_json(const BinningScheme& s)
{
    return {{"couples", s.to_string()}, {"boundaries", s.boundaries()}, {"labels", s.labels()}};
}

std::shared_ptr<const BinnedMap> get_map(const DatasetHandle& ds, const BinningScheme& scheme,
                                         NullMode mode)
{
    try {
        return ds.map(scheme, mode);
    } catch (const SchemeCoverageError& e) {
        throw HttpError{422, e.what(), "couples"};
    }
}

std::size_t item_of(const DatasetHandle& ds, const std::string& item)
{
    if (auto i = ds.table().find_item(item))
        return *i;
    throw HttpError{404, "unknown item '" + item + "' in dataset '" + ds.id() + "'", "item"};
}

std::optional<std::string> highlight_param(const Query& q, const DatasetHandle& ds)
{
    auto h = param(q, "highlight");
    if (h)
        item_of(ds, *h);
    return h;
}

Response json_response(const json& body, int status = 200)
{
    return {status, "application/json", body.dump()};
}

std::vector<std::string> split_path(std::string_view path)
{
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/')
            ++i;
        auto j = path.find('/', i);
        if (j == std::string_view::npos)
            j = path.size();
        if (j > i)
            parts.emplace_back(path.substr(i, j - i));
        i = j;
    }
    return parts;
}

Response list_datasets(const std::map<std::string, std::shared_ptr<const DatasetHandle>, std::less<>>& all)
{
    json out = json::array();
    for (const auto& [id, ds] : all) {
        out.push_back({{"id", id},
                       {"items", ds->table().item_count()},
                       {"time_points", ds->table().time_count()},
                       {"default_couples", ds->default_scheme().to_string()}});
    }
    return json_response({{"datasets", out}});
}

Response items_endpoint(const DatasetHandle& ds, const Query& q)
{
    auto prefix = param(q, "q").value_or("");
    int limit = int_param(q, "limit", 100);
    if (limit < 1)
        throw HttpError{400, "parameter 'limit' must be positive", "limit"};
    json out = json::array();
    std::size_t total = 0;
    for (const auto& id : ds.table().items()) {
        if (!id.starts_with(prefix))
            continue;
        if (out.size() < static_cast<std::size_t>(limit))
            out.push_back(id);
        ++total;
    }
    return json_response({{"items", out}, {"total", total}});
}

Response map_endpoint(const DatasetHandle& ds, const Query& q)
{
    auto scheme = scheme_param(q, ds);
    auto mode = null_mode_param(q);
    auto highlight = highlight_param(q, ds);
    auto m = get_map(ds, scheme, mode);

    json columns = json::array();
    for (std::size_t t = 0; t < m->time_count(); ++t) {
        json col = json::array();
        for (std::size_t i = 0; i < m->item_count(); ++i) {
            auto l = m->level(i, t);
            col.push_back(l ? json(*l) : json(nullptr));
        }
        columns.push_back(std::move(col));
    }
    json out = {{"dataset", ds.id()},
                {"scheme", scheme_json(scheme)},
                {"null_mode", to_string(mode)},
                {"time_labels", m->time_labels()},
                {"items", m->items()},
                {"columns", std::move(columns)},
                {"highlight", nullptr}};
    if (highlight) {
        auto profile = item_profile(*m, *highlight);
        json trace = json::array();
        for (const auto& l : profile.levels)
            trace.push_back(level_json(l));
        out["highlight"] = {{"item", *highlight}, {"trace", trace}};
    }
    return json_response(out);
}

Response map_svg(const DatasetHandle& ds, const Query& q)
{
    auto scheme = scheme_param(q, ds);
    auto mode = null_mode_param(q);
    auto highlight = highlight_param(q, ds);
    auto view = param(q, "view").value_or("binned");
    RenderStyle style;
    std::string svg;
    if (view == "unbinned")
        svg = render_unbinned_svg(ds.table(), highlight, style);
    else if (view == "binned")
        svg = render_map_svg(*get_map(ds, scheme, mode), highlight, style);
    else
        throw HttpError{400, "parameter 'view' must be binned or unbinned", "view"};
    return {200, "image/svg+xml", std::move(svg)};
}

Response profile_endpoint(const DatasetHandle& ds, const std::string& item, const Query& q)
{
    auto scheme = scheme_param(q, ds);
    auto mode = null_mode_param(q);
    auto params = classifier_param(q, scheme);
    auto idx = item_of(ds, item);
    auto m = get_map(ds, scheme, mode);
    auto prof = item_profile(*m, idx);

    json levels = json::array();
    for (const auto& l : prof.levels)
        levels.push_back(level_json(l));
    json plateaus = json::array();
    for (const auto& v : detect_plateaus(prof, params.equiv_tol))
        plateaus.push_back({{"start", v.start}, {"end", v.end}, {"level", v.level}});

    json matched = json::array();
    std::optional<Shape> primary;
    if (prof.present_count() >= 2) {
        auto labels = classify(prof, params);
        for (auto s : labels.matched())
            matched.push_back(shape_name(s));
        primary = labels.primary();
    }
    json out = {{"dataset", ds.id()},
                {"item", item},
                {"scheme", scheme.to_string()},
                {"null_mode", to_string(mode)},
                {"time_labels", ds.table().time_labels()},
                {"levels", levels},
                {"level_labels", json::array()},
                {"mean_level", prof.mean_level ? json(round9(*prof.mean_level)) : json(nullptr)},
                {"plateaus", plateaus},
                {"matched", matched},
                {"primary", shape_name(primary)},
                {"params", params_json(params)}};
    for (const auto& l : prof.levels)
        out["level_labels"].push_back(l ? json(scheme.label(static_cast<std::size_t>(*l))) : json(nullptr));
    return json_response(out);
}

Response histogram_endpoint(const DatasetHandle& ds, const Query& q)
{
    auto scheme = scheme_param(q, ds);
    auto mode = null_mode_param(q);
    auto params = classifier_param(q, scheme);
    auto hist = profile_histogram(*get_map(ds, scheme, mode), params);
    json counts = json::object();
    std::size_t total = 0;
    for (auto s : all_shapes) {
        auto it = hist.find(s);
        counts[std::string(shape_name(s))] = it == hist.end() ? 0 : it->second;
    }
    auto none = hist.find(std::nullopt);
    counts["NONE"] = none == hist.end() ? 0 : none->second;
    for (const auto& [k, v] : hist)
        total += v;
    return json_response({{"dataset", ds.id()},
                          {"scheme", scheme.to_string()},
                          {"null_mode", to_string(mode)},
                          {"params", params_json(params)},
                          {"counts", counts},
                          {"total", total}});
}

Response sax_endpoint(const DatasetHandle& ds, const Query& q)
{
    auto spec = param(q, "items");
    if (!spec)
        throw HttpError{400, "parameter 'items' must name two items as a,b", "items"};
    auto comma = spec->find(',');
    if (comma == std::string::npos || spec->find(',', comma + 1) != std::string::npos)
        throw HttpError{400, "parameter 'items' must name two items as a,b", "items"};
    std::string names[2] = {spec->substr(0, comma), spec->substr(comma + 1)};
    int k = int_param(q, "k", 8);
    if (k < 2)
        throw HttpError{400, "parameter 'k' must be >= 2", "k"};
    auto cuts = param(q, "cuts").value_or("frequency");

    const auto& table = ds.table();
    std::vector<double> pooled;
    double lo = INFINITY;
    double hi = -INFINITY;
    for (std::size_t i = 0; i < table.item_count(); ++i) {
        for (const auto& c : table.row(i)) {
            if (c) {
                pooled.push_back(*c);
                lo = std::min(lo, *c);
                hi = std::max(hi, *c);
            }
        }
    }
    std::vector<std::vector<double>> series(2);
    for (int s = 0; s < 2; ++s) {
        auto idx = item_of(ds, names[s]);
        for (const auto& c : table.row(idx)) {
            if (!c)
                throw HttpError{422, "item '" + names[s] + "' has missing values; SAX needs a complete series", "items"};
            series[static_cast<std::size_t>(s)].push_back(*c);
        }
    }
    std::optional<sax::Breakpoints> bp;
    try {
        if (cuts == "frequency")
            bp = sax::equal_frequency_breakpoints(pooled, k);
        else if (cuts == "width")
            bp = sax::equal_width_breakpoints(lo, hi, k);
        else
            throw HttpError{400, "parameter 'cuts' must be frequency or width", "cuts"};
    } catch (const InvalidArgument& e) {
        throw HttpError{422, e.what(), "k"};
    }
    auto wa = sax::sax_encode(series[0], *bp);
    auto wb = sax::sax_encode(series[1], *bp);
    std::vector<double> rounded_cuts;
    for (double c : bp->cuts())
        rounded_cuts.push_back(round9(c));
    return json_response({{"dataset", ds.id()},
                          {"k", k},
                          {"cuts", cuts},
                          {"breakpoints", rounded_cuts},
                          {"words", {{names[0], wa.symbols}, {names[1], wb.symbols}}},
                          {"mindist", round9(sax::mindist(wa, wb, *bp))},
                          {"symbol_euclidean", round9(sax::symbol_euclidean(wa, wb))},
                          {"euclidean", round9(sax::euclidean(series[0], series[1]))}});
}

} // namespace

Api::Api(std::vector<std::shared_ptr<const DatasetHandle>> datasets)
{
    for (auto& ds : datasets) {
        auto id = ds->id();
        if (!datasets_.emplace(id, std::move(ds)).second)
            throw InvalidArgument("duplicate dataset id '" + id + "'");
    }
}

Response Api::handle(std::string_view path, const Query& query) const
{
    try {
        auto parts = split_path(path);
        if (parts.empty() || parts[0] != "datasets")
            throw HttpError{404, "no such endpoint '" + std::string(path) + "'", "path"};
        if (parts.size() == 1)
            return list_datasets(datasets_);

        auto it = datasets_.find(parts[1]);
        if (it == datasets_.end())
            throw HttpError{404, "unknown dataset '" + parts[1] + "'", "dataset"};
        const auto& ds = *it->second;

        if (parts.size() == 3) {
            const auto& leaf = parts[2];
            if (leaf == "items")
                return items_endpoint(ds, query);
            if (leaf == "map")
                return map_endpoint(ds, query);
            if (leaf == "map.svg")
                return map_svg(ds, query);
            if (leaf == "histogram")
                return histogram_endpoint(ds, query);
            if (leaf == "sax")
                return sax_endpoint(ds, query);
        }
        if (parts.size() == 4 && parts[2] == "profile")
            return profile_endpoint(ds, parts[3], query);
        throw HttpError{404, "no such endpoint '" + std::string(path) + "'", "path"};
    } catch (const HttpError& e) {
        return json_response({{"error", e.message}, {"field", e.field}, {"status", e.status}}, e.status);
    } catch (const NotFoundError& e) {
        return json_response({{"error", e.what()}, {"field", "item"}, {"status", 404}}, 404);
    } catch (const SchemeCoverageError& e) {
        return json_response({{"error", e.what()}, {"field", "couples"}, {"status", 422}}, 422);
    } catch (const Error& e) {
        return json_response({{"error", e.what()}, {"field", nullptr}, {"status", 400}}, 400);
    }
}

std::shared_ptr<const DatasetHandle> load_dataset(const std::string& path, TableFormat format, char sep)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    auto id = std::filesystem::path(path).stem().string();
    return std::make_shared<const DatasetHandle>(id, parse_table(buf.str(), format, sep));
}

void mount(httplib::Server& server, std::shared_ptr<const Api> api)
{
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Get(R"(/datasets(/.*)?)", [api](const httplib::Request& req, httplib::Response& res) {
        Query q(req.params.begin(), req.params.end());
        auto r = api->handle(req.path, q);
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    });
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

bool serve(const ServeConfig& config)
{
    if (config.data_paths.empty())
        throw InvalidArgument("serve needs at least one dataset path");
    std::vector<std::shared_ptr<const DatasetHandle>> datasets;
    for (const auto& p : config.data_paths)
        datasets.push_back(load_dataset(p, config.format, config.sep));
    auto api = std::make_shared<const Api>(std::move(datasets));

    httplib::Server server;
    mount(server, api);
    std::cerr << "serving " << config.data_paths.size() << " dataset(s) on http://" << config.host
              << ":" << config.port << "\n";
    return server.listen(config.host, config.port);
}

} // namespace trl::service
