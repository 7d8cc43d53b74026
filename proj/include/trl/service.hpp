#pragma once

#include "trl/ingest.hpp"
#include "trl/profiles.hpp"
#include "trl/rankbin.hpp"
#include "trl/table.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace trl::service {

/// A loaded table plus lazily built maps, one per (couples, null mode).
class DatasetHandle {
public:
    DatasetHandle(std::string id, TimeTable table);

    const std::string& id() const noexcept { return id_; }
    const TimeTable& table() const noexcept { return table_; }
    const BinningScheme& default_scheme() const noexcept { return default_scheme_; }

    /// Builds the map on first use; later calls share the same instance.
    /// Safe to call from many threads.
    std::shared_ptr<const BinnedMap> map(const BinningScheme& scheme, NullMode mode) const;

private:
    struct Slot;

    std::string id_;
    TimeTable table_;
    BinningScheme default_scheme_;
    mutable std::mutex mutex_;
    mutable std::map<std::string, std::shared_ptr<Slot>> cache_;
};

using Query = std::multimap<std::string, std::string>;

struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

/// Read-only API over a fixed set of datasets. `handle` is a pure function
/// of (path, query) and the loaded data, so it is used directly by tests
/// and by the HTTP front end.
class Api {
public:
    explicit Api(std::vector<std::shared_ptr<const DatasetHandle>> datasets);

    Response handle(std::string_view path, const Query& query) const;

private:
    std::map<std::string, std::shared_ptr<const DatasetHandle>, std::less<>> datasets_;
};

struct ServeConfig {
    std::vector<std::string> data_paths;
    TableFormat format = TableFormat::wide;
    char sep = ',';
    std::string host = "127.0.0.1";
    int port = 7878;
};

/// Loads every path (dataset id = file stem) and serves until stopped.
/// Returns false when the address cannot be bound.
bool serve(const ServeConfig& config);

/// Loads one dataset file.
std::shared_ptr<const DatasetHandle> load_dataset(const std::string& path, TableFormat format,
                                                  char sep);

} // namespace trl::service
