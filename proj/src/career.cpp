#include "neighbor/career.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <set>

#include "neighbor/error.hpp"
#include "neighbor/text.hpp"

namespace neighbor::career {
namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool all_digits(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::optional<std::string> non_blank(const std::optional<std::string>& s) {
    if (!s) return std::nullopt;
    auto t = text::trim(*s);
    if (t.empty()) return std::nullopt;
    return t;
}

constexpr int kDefaultRadiusMiles = 25;

int parse_radius(const std::string& text) {
    int value = 0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || end != text.data() + text.size() || value <= 0) {
        throw Error(ErrorCode::malformed_location, "radius must be a positive whole number");
    }
    return value;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
        s.replace(pos, from.size(), to);
    }
    return s;
}

std::string cell_text(const nlohmann::ordered_json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (const auto& item : v) {
            if (!out.empty()) out += "; ";
            out += cell_text(item);
        }
        return out;
    }
    return v.dump();
}

void flatten(const nlohmann::ordered_json& obj, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
    for (const auto& [key, value] : obj.items()) {
        std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            flatten(value, name, out);
        } else {
            out.emplace_back(std::move(name), cell_text(value));
        }
    }
}

}  // namespace

// ---- occupations -----------------------------------------------------------

bool is_onet_code(std::string_view code) noexcept {
    return code.size() == 10 && all_digits(code.substr(0, 2)) && code[2] == '-' &&
           all_digits(code.substr(3, 4)) && code[7] == '.' && all_digits(code.substr(8, 2));
}

OccupationCatalog OccupationCatalog::parse(std::string_view tsv) {
    OccupationCatalog catalog;
    std::set<std::string> names;
    std::size_t line_no = 0;
    for (const auto& raw : text::split(tsv, '\n')) {
        ++line_no;
        auto line = text::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto fields = text::split(line, '\t');
        if (fields.size() < 2) {
            throw Error(ErrorCode::parse_error,
                        "occupations line " + std::to_string(line_no) + ": expected name<TAB>code");
        }
        OccupationEntry entry{text::trim(fields[0]), text::trim(fields[1]),
                              fields.size() > 2 ? text::trim(fields[2]) : std::string()};
        if (entry.display_name.empty()) {
            throw Error(ErrorCode::empty_field,
                        "occupations line " + std::to_string(line_no) + ": empty display name");
        }
        if (!is_onet_code(entry.onet_code)) {
            throw Error(ErrorCode::parse_error, "occupation '" + entry.display_name +
                                                    "': malformed O*NET code '" + entry.onet_code +
                                                    "'");
        }
        if (!names.insert(ascii_lower(entry.display_name)).second) {
            throw Error(ErrorCode::duplicate_id,
                        "occupation '" + entry.display_name + "' listed twice");
        }
        catalog.entries_.push_back(std::move(entry));
    }
    if (catalog.entries_.empty()) {
        throw Error(ErrorCode::parse_error, "occupations file has no entries");
    }
    return catalog;
}

OccupationCatalog OccupationCatalog::load(const std::string& path) {
    return parse(text::read_file(path));
}

const std::string& OccupationCatalog::resolve(std::string_view display_name) const {
    for (const auto& e : entries_) {
        if (e.display_name == display_name) return e.onet_code;
    }
    auto wanted = ascii_lower(text::trim(display_name));
    for (const auto& e : entries_) {
        if (ascii_lower(e.display_name) == wanted) return e.onet_code;
    }
    throw Error(ErrorCode::unknown_occupation,
                "'" + std::string(display_name) + "' is not a listed occupation");
}

// ---- query kinds -----------------------------------------------------------

std::string_view to_string(Param p) noexcept {
    switch (p) {
        case Param::occupation: return "occupation";
        case Param::second_occupation: return "second_occupation";
        case Param::state: return "state";
        case Param::scope: return "scope";
        case Param::location: return "location";
        case Param::radius: return "radius";
    }
    return "occupation";
}

const std::vector<QueryKindInfo>& query_kinds() {
    using P = Param;
    using K = QueryKind;
    static const std::vector<QueryKindInfo> kinds = {
        {K::american_job_center, "American Job Center", "american-job-center", {P::location},
         "/v1/ajcfinder/{userId}/{location}/{radius}", "/OneStopCenterList"},
        {K::apprenticeship_offices, "Apprenticeship Offices", "apprenticeship-offices",
         {P::location}, "/v1/apprenticeshipfinder/{userId}/{location}/{radius}",
         "/ApprenticeshipOfficeList"},
        {K::certifications, "Certifications", "certifications", {P::occupation},
         "/v1/certificationfinder/{userId}/{occupation}", "/CertList"},
        {K::employment_patterns, "Employment Patterns", "employment-patterns", {P::occupation},
         "/v1/employmentpatterns/{userId}/{occupation}", "/EmploymentPatterns"},
        {K::labor_market_information, "Labor Market Information", "labor-market-information",
         {P::occupation, P::state}, "/v1/lmi/{userId}/{occupation}/{state}", "/LMI/Wages"},
        {K::occupations, "Occupations", "occupations", {P::occupation, P::state},
         "/v1/occupation/{userId}/{occupation}/{state}", "/OccupationDetail"},
        {K::occupational_reports, "Occupational Reports", "occupational-reports", {P::scope},
         "/v1/occupationalreports/{userId}/{scope}", "/OccupationalReports"},
        {K::salaries_and_wages, "Salaries and Wages", "salaries-and-wages",
         {P::occupation, P::state}, "/v1/comparesalaries/{userId}/wage", "/Wages/StateWagesList"},
        {K::skills_gaps, "Skills Gaps", "skills-gaps", {P::occupation, P::second_occupation},
         "/v1/skillgap/{userId}/{occupation}/{second_occupation}", "/SkillsGap"},
        {K::state_resources, "State Resources", "state-resources", {P::state, P::radius},
         "/v1/stateresources/{userId}/{state}/{radius}", "/StateResources"},
        {K::tools_and_technology, "Tools and Technology", "tools-and-technology",
         {P::occupation}, "/v1/toolsandtechnology/{userId}/{occupation}", "/ToolsAndTechnology"},
        {K::training, "Training", "training", {P::location},
         "/v1/training/{userId}/{location}/{radius}", "/SchoolPrograms"},
        {K::unemployment, "Unemployment", "unemployment", {P::state},
         "/v1/unemploymentrate/{userId}/{state}", "/UnemploymentRates"},
        {K::youth_programs, "Youth Programs", "youth-programs", {P::location},
         "/v1/youthprogramfinder/{userId}/{location}/{radius}", "/YouthProgramList"},
    };
    return kinds;
}

const QueryKindInfo& info(QueryKind kind) {
    for (const auto& k : query_kinds()) {
        if (k.kind == kind) return k;
    }
    throw Error(ErrorCode::not_found, "unknown career query kind");
}

const QueryKindInfo& find_kind(std::string_view slug_or_title) {
    for (const auto& k : query_kinds()) {
        if (k.slug == slug_or_title || k.title == slug_or_title) return k;
    }
    throw Error(ErrorCode::not_found,
                "no career query kind '" + std::string(slug_or_title) + "'");
}

// ---- parameters ------------------------------------------------------------

bool is_state_code(std::string_view code) noexcept {
    static constexpr std::string_view kCodes[] = {
        "AK", "AL", "AR", "AS", "AZ", "CA", "CO", "CT", "DC", "DE", "FL", "GA", "GU", "HI",
        "IA", "ID", "IL", "IN", "KS", "KY", "LA", "MA", "MD", "ME", "MI", "MN", "MO", "MP",
        "MS", "MT", "NC", "ND", "NE", "NH", "NJ", "NM", "NV", "NY", "OH", "OK", "OR", "PA",
        "PR", "RI", "SC", "SD", "TN", "TX", "UT", "VA", "VI", "VT", "WA", "WI", "WV", "WY",
    };
    return std::find(std::begin(kCodes), std::end(kCodes), code) != std::end(kCodes);
}

std::string LocationQuery::upstream_text() const {
    switch (kind) {
        case LocationKind::city_state: return city.value_or("") + ", " + state.value_or("");
        case LocationKind::zip: return zip.value_or("");
        case LocationKind::state: return state.value_or("");
    }
    return "";
}

LocationQuery validate_location(const RawLocation& raw) {
    auto city = non_blank(raw.city);
    auto state = non_blank(raw.state);
    auto zip = non_blank(raw.zip);
    auto radius = non_blank(raw.radius);

    LocationQuery q;
    if (zip) {
        if (city || state) {
            throw Error(ErrorCode::malformed_location, "give a ZIP code or a city/state, not both");
        }
        if (zip->size() != 5 || !all_digits(*zip)) {
            throw Error(ErrorCode::malformed_location, "ZIP code must be 5 digits");
        }
        q.kind = LocationKind::zip;
        q.zip = zip;
    } else if (state) {
        std::string upper = *state;
        for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (!is_state_code(upper)) {
            throw Error(ErrorCode::malformed_location, "unknown state code '" + *state + "'");
        }
        q.state = upper;
        q.kind = city ? LocationKind::city_state : LocationKind::state;
        q.city = city;
    } else if (city) {
        throw Error(ErrorCode::malformed_location, "a city needs a state");
    } else {
        throw Error(ErrorCode::malformed_location, "location needs a city/state, ZIP or state");
    }

    if (radius) q.radius_miles = parse_radius(*radius);
    return q;
}

std::vector<Param> CareerParams::present() const {
    std::vector<Param> out;
    if (occupation) out.push_back(Param::occupation);
    if (second_occupation) out.push_back(Param::second_occupation);
    if (state) out.push_back(Param::state);
    if (scope) out.push_back(Param::scope);
    if (location) out.push_back(Param::location);
    if (radius_miles) out.push_back(Param::radius);
    return out;
}

nlohmann::ordered_json RequestDescriptor::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = kind;
    j["method"] = method;
    j["path_template"] = path_template;
    j["path"] = path;
    j["query"] = nlohmann::ordered_json::array();
    for (const auto& [k, v] : query) j["query"].push_back({k, v});
    return j;
}

std::string RequestDescriptor::canonical() const {
    std::string out = method + " " + path;
    char sep = '?';
    for (const auto& [k, v] : query) {
        out += sep + text::percent_encode(k) + "=" + text::percent_encode(v);
        sep = '&';
    }
    return out;
}

namespace {

void check_occupation(const std::string& code, std::string_view what) {
    if (!is_onet_code(code)) {
        throw Error(ErrorCode::validation_error,
                    std::string(what) + " '" + code + "' is not an O*NET code (DD-DDDD.DD)");
    }
}

void check_state(const std::string& code) {
    if (!is_state_code(code)) {
        throw Error(ErrorCode::malformed_location, "unknown state code '" + code + "'");
    }
}

void check_radius(int miles) {
    if (miles <= 0) throw Error(ErrorCode::malformed_location, "radius must be positive");
}

LocationQuery check_location(const LocationQuery& q) {
    RawLocation raw{q.city, q.state, q.zip, std::nullopt};
    if (q.radius_miles) raw.radius = std::to_string(*q.radius_miles);
    auto checked = validate_location(raw);
    if (checked.kind != q.kind || checked.state != q.state) {
        throw Error(ErrorCode::malformed_location, "location fields do not match its kind");
    }
    return checked;
}

}  // namespace

CareerParams params_from_fields(QueryKind kind, const std::map<std::string, std::string>& fields,
                                const OccupationCatalog* catalog) {
    const auto& k = info(kind);
    bool by_location = std::find(k.signature.begin(), k.signature.end(), Param::location) !=
                       k.signature.end();
    auto field = [&](const char* name) -> std::optional<std::string> {
        auto it = fields.find(name);
        if (it == fields.end()) return std::nullopt;
        return non_blank(it->second);
    };
    auto occupation = [&](const std::string& value) {
        if (is_onet_code(value)) return value;
        if (catalog == nullptr) {
            throw Error(ErrorCode::unknown_occupation, "'" + value + "' is not an O*NET code");
        }
        return catalog->resolve(value);
    };

    static const std::set<std::string, std::less<>> kKnown = {
        "occupation", "second_occupation", "state", "scope", "city", "zip", "radius"};
    for (const auto& [name, value] : fields) {
        if (!kKnown.contains(name)) {
            throw Error(ErrorCode::extra_parameter,
                        std::string(k.title) + " does not take '" + name + "'");
        }
    }

    CareerParams params;
    if (auto v = field("occupation")) params.occupation = occupation(*v);
    if (auto v = field("second_occupation")) params.second_occupation = occupation(*v);
    if (auto v = field("scope")) params.scope = *v;
    if (by_location) {
        RawLocation raw{field("city"), field("state"), field("zip"), field("radius")};
        if (raw.city || raw.state || raw.zip || raw.radius) params.location = validate_location(raw);
    } else {
        if (field("city") || field("zip")) {
            throw Error(ErrorCode::extra_parameter,
                        std::string(k.title) + " does not take a city or ZIP code");
        }
        params.state = field("state");
        if (auto v = field("radius")) params.radius_miles = parse_radius(*v);
    }
    return params;
}

RequestDescriptor build_request(QueryKind kind, const CareerParams& params) {
    const auto& k = info(kind);
    auto present = params.present();
    for (Param p : k.signature) {
        if (std::find(present.begin(), present.end(), p) == present.end()) {
            throw Error(ErrorCode::missing_parameter, std::string(k.title) + " requires '" +
                                                          std::string(to_string(p)) + "'");
        }
    }
    for (Param p : present) {
        if (std::find(k.signature.begin(), k.signature.end(), p) == k.signature.end()) {
            throw Error(ErrorCode::extra_parameter, std::string(k.title) + " does not take '" +
                                                        std::string(to_string(p)) + "'");
        }
    }

    std::vector<std::pair<std::string, std::string>> fills;
    for (Param p : k.signature) {
        switch (p) {
            case Param::occupation:
                check_occupation(*params.occupation, "occupation");
                fills.emplace_back("{occupation}", *params.occupation);
                break;
            case Param::second_occupation:
                check_occupation(*params.second_occupation, "second occupation");
                fills.emplace_back("{second_occupation}", *params.second_occupation);
                break;
            case Param::state:
                check_state(*params.state);
                fills.emplace_back("{state}", *params.state);
                break;
            case Param::scope:
                if (*params.scope != "US") check_state(*params.scope);
                fills.emplace_back("{scope}", *params.scope);
                break;
            case Param::location: {
                auto loc = check_location(*params.location);
                fills.emplace_back("{location}", loc.upstream_text());
                fills.emplace_back("{radius}",
                                   std::to_string(loc.radius_miles.value_or(kDefaultRadiusMiles)));
                break;
            }
            case Param::radius:
                check_radius(*params.radius_miles);
                fills.emplace_back("{radius}", std::to_string(*params.radius_miles));
                break;
        }
    }

    RequestDescriptor d;
    d.kind = std::string(k.slug);
    d.path_template = std::string(k.path_template);
    d.path = d.path_template;
    for (const auto& [placeholder, value] : fills) {
        d.path = replace_all(d.path, placeholder, text::percent_encode(value));
    }
    if (kind == QueryKind::salaries_and_wages) {
        d.query = {{"keyword", *params.occupation}, {"location", *params.state}};
    }
    return d;
}

std::string cache_key(const RequestDescriptor& descriptor) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : descriptor.canonical()) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i, hash >>= 4) hex[static_cast<std::size_t>(i)] = kHex[hash & 0xF];
    return descriptor.kind + ":" + hex;
}

// ---- datasets, client, cache -----------------------------------------------

CareerDataset parse_dataset(const QueryKindInfo& kind, std::string_view body) {
    auto doc = nlohmann::ordered_json::parse(body, nullptr, false);
    if (doc.is_discarded()) {
        throw Error(ErrorCode::unparseable_body,
                    std::string(kind.title) + ": upstream body is not JSON");
    }
    nlohmann::ordered_json::json_pointer ptr{std::string(kind.rows_pointer)};
    if (!doc.contains(ptr) || !doc.at(ptr).is_array()) {
        throw Error(ErrorCode::unparseable_body, std::string(kind.title) + ": no row array at " +
                                                     std::string(kind.rows_pointer));
    }

    CareerDataset ds;
    ds.kind = std::string(kind.title);
    std::vector<std::vector<std::pair<std::string, std::string>>> flat;
    for (const auto& row : doc.at(ptr)) {
        if (!row.is_object()) {
            throw Error(ErrorCode::unparseable_body,
                        std::string(kind.title) + ": row is not an object");
        }
        auto& cells = flat.emplace_back();
        flatten(row, "", cells);
        for (const auto& [name, value] : cells) {
            if (std::find(ds.columns.begin(), ds.columns.end(), name) == ds.columns.end()) {
                ds.columns.push_back(name);
            }
        }
    }
    for (const auto& cells : flat) {
        auto& row = ds.rows.emplace_back(ds.columns.size());
        for (const auto& [name, value] : cells) {
            auto at = std::find(ds.columns.begin(), ds.columns.end(), name) - ds.columns.begin();
            row[static_cast<std::size_t>(at)] = value;
        }
    }
    return ds;
}

HttpResult FixtureCareerClient::get(const RequestDescriptor& request) {
    try {
        return {200, text::read_file(dir_ + "/" + request.kind + ".json")};
    } catch (const Error&) {
        throw Error(ErrorCode::network_error, "no recorded response for '" + request.kind + "'");
    }
}

CareerCache::CareerCache(std::chrono::seconds ttl, TimeSource now)
    : ttl_(ttl), now_(std::move(now)) {}

CareerDataset CareerCache::get_or_fetch(const std::string& key,
                                        const std::function<CareerDataset()>& fetch) {
    std::promise<CareerDataset> promise;
    std::shared_future<CareerDataset> pending;
    {
        std::lock_guard lock(mu_);
        auto it = entries_.find(key);
        if (it != entries_.end() && now_() < it->second.expires) return it->second.dataset;
        if (auto f = inflight_.find(key); f != inflight_.end()) {
            pending = f->second;
        } else {
            inflight_.emplace(key, promise.get_future().share());
        }
    }
    if (pending.valid()) return pending.get();

    try {
        auto dataset = fetch();
        {
            std::lock_guard lock(mu_);
            entries_[key] = {dataset, now_() + ttl_};
            inflight_.erase(key);
        }
        promise.set_value(dataset);
        return dataset;
    } catch (...) {
        {
            std::lock_guard lock(mu_);
            inflight_.erase(key);
        }
        promise.set_exception(std::current_exception());
        throw;
    }
}

std::size_t CareerCache::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

CareerDataset fetch(QueryKind kind, const CareerParams& params, CareerDataClient& client,
                    CareerCache& cache) {
    auto request = build_request(kind, params);
    auto key = cache_key(request);
    return cache.get_or_fetch(key, [&] {
        auto response = client.get(request);
        if (response.status < 200 || response.status >= 300) {
            throw Error(ErrorCode::upstream_status, std::string(info(kind).title) +
                                                        ": upstream returned HTTP " +
                                                        std::to_string(response.status));
        }
        auto ds = parse_dataset(info(kind), response.body);
        ds.fetched_at = Clock::now();
        ds.cache_key = key;
        return ds;
    });
}

}  // namespace neighbor::career
