#pragma once

#include <array>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace neighbor::career {

// ---- occupations -----------------------------------------------------------

struct OccupationEntry {
    std::string display_name;
    std::string onet_code;  // DD-DDDD.DD
    std::string taxonomy_title;
};

bool is_onet_code(std::string_view code) noexcept;

/// Curated display-name -> O*NET code mapping. Display names are unique.
class OccupationCatalog {
public:
    // Tab-separated: display_name, onet_code, taxonomy_title. '#' lines skipped.
    static OccupationCatalog parse(std::string_view tsv);
    static OccupationCatalog load(const std::string& path);

    // Exact match first, then ASCII case-insensitive. Throws Error{unknown_occupation}.
    const std::string& resolve(std::string_view display_name) const;
    const std::vector<OccupationEntry>& entries() const { return entries_; }

private:
    std::vector<OccupationEntry> entries_;
};

// ---- query kinds -----------------------------------------------------------

enum class QueryKind {
    american_job_center,
    apprenticeship_offices,
    certifications,
    employment_patterns,
    labor_market_information,
    occupations,
    occupational_reports,
    salaries_and_wages,
    skills_gaps,
    state_resources,
    tools_and_technology,
    training,
    unemployment,
    youth_programs,
};

enum class Param { occupation, second_occupation, state, scope, location, radius };

std::string_view to_string(Param p) noexcept;

struct QueryKindInfo {
    QueryKind kind;
    std::string_view title;  // as shown to users
    std::string_view slug;   // URL and metrics label
    std::vector<Param> signature;
    std::string_view path_template;
    std::string_view rows_pointer;  // JSON pointer to the row array in the upstream body
};

const std::vector<QueryKindInfo>& query_kinds();
const QueryKindInfo& info(QueryKind kind);
// Accepts slug or title. Throws Error{not_found}.
const QueryKindInfo& find_kind(std::string_view slug_or_title);

// ---- parameters ------------------------------------------------------------

enum class LocationKind { city_state, zip, state };

struct LocationQuery {
    LocationKind kind = LocationKind::zip;
    std::optional<std::string> city;
    std::optional<std::string> state;
    std::optional<std::string> zip;
    std::optional<int> radius_miles;

    // "Chicago, IL" | "60660" | "IL"
    std::string upstream_text() const;
};

bool is_state_code(std::string_view code) noexcept;

struct RawLocation {
    std::optional<std::string> city;
    std::optional<std::string> state;
    std::optional<std::string> zip;
    std::optional<std::string> radius;
};

// Picks the kind from which fields are present. Throws Error{malformed_location}.
LocationQuery validate_location(const RawLocation& raw);

struct CareerParams {
    std::optional<std::string> occupation;         // O*NET code
    std::optional<std::string> second_occupation;  // O*NET code
    std::optional<std::string> state;
    std::optional<std::string> scope;  // state code or "US"
    std::optional<LocationQuery> location;
    std::optional<int> radius_miles;

    std::vector<Param> present() const;
};

struct RequestDescriptor {
    std::string kind;  // slug
    std::string method = "GET";
    std::string path_template;
    std::string path;  // template filled in except for {userId}
    std::vector<std::pair<std::string, std::string>> query;

    nlohmann::ordered_json to_json() const;
    std::string canonical() const;  // stable text used for the cache key
};

// Maps flat request fields (occupation, second_occupation, state, scope, city,
// zip, radius) onto typed parameters for `kind`. For location kinds city, state,
// zip and radius form the location; elsewhere state and radius stand alone.
// Occupations may be display names (resolved through `catalog`) or codes.
CareerParams params_from_fields(QueryKind kind, const std::map<std::string, std::string>& fields,
                                const OccupationCatalog* catalog);

// Throws Error{missing_parameter | extra_parameter | malformed_location | validation_error}.
RequestDescriptor build_request(QueryKind kind, const CareerParams& params);

std::string cache_key(const RequestDescriptor& descriptor);

// ---- datasets, client, cache -----------------------------------------------

using Clock = std::chrono::system_clock;

struct CareerDataset {
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    Clock::time_point fetched_at;
    std::string cache_key;
};

// Throws Error{unparseable_body}.
CareerDataset parse_dataset(const QueryKindInfo& kind, std::string_view body);

struct HttpResult {
    int status = 0;
    std::string body;
};

/// Upstream occupational-data API. Throws Error{network_error} when the
/// request cannot be completed; non-2xx responses are returned, not thrown.
class CareerDataClient {
public:
    virtual ~CareerDataClient() = default;
    virtual HttpResult get(const RequestDescriptor& request) = 0;
};

/// Serves committed fixture bodies: <dir>/<slug>.json for every kind.
class FixtureCareerClient final : public CareerDataClient {
public:
    explicit FixtureCareerClient(std::string dir) : dir_(std::move(dir)) {}
    HttpResult get(const RequestDescriptor& request) override;

private:
    std::string dir_;
};

/// TTL cache with single-flight: concurrent misses on one key share a single
/// upstream call and all receive its result (or its error).
class CareerCache {
public:
    using TimeSource = std::function<Clock::time_point()>;

    explicit CareerCache(std::chrono::seconds ttl = std::chrono::hours(24),
                         TimeSource now = [] { return Clock::now(); });

    CareerDataset get_or_fetch(const std::string& key,
                               const std::function<CareerDataset()>& fetch);
    std::size_t size() const;

private:
    struct Entry {
        CareerDataset dataset;
        Clock::time_point expires;
    };

    std::chrono::seconds ttl_;
    TimeSource now_;
    mutable std::mutex mu_;
    std::map<std::string, Entry> entries_;
    std::map<std::string, std::shared_future<CareerDataset>> inflight_;
};

// Validation happens before any client call. Errors: network_error,
// upstream_status, unparseable_body.
CareerDataset fetch(QueryKind kind, const CareerParams& params, CareerDataClient& client,
                    CareerCache& cache);

}  // namespace neighbor::career
