#include "livingglobe/globe_service.hpp"

#include "livingglobe/errors.hpp"
#include "livingglobe/explore_query.hpp"
#include "livingglobe/json_codec.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace livingglobe {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Files

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("error reading " + path.string());
    return std::move(buf).str();
}

void write_file(const fs::path& path, std::string_view bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("error writing " + path.string());
}

namespace {

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::string as_string(const std::vector<std::uint8_t>& bytes)
{
    return std::string(bytes.begin(), bytes.end());
}

std::span<const std::uint8_t> as_bytes(const std::string& s)
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

} // namespace

void write_bundle(const Dataset& dataset, const fs::path& dir)
{
    ensure_dir(dir);
    write_file(dir / kBundleFile, dump_bundle(dataset));
}

Dataset read_bundle(const fs::path& dir)
{
    return parse_bundle(read_file(dir / kBundleFile));
}

IngestResult ingest_files(const fs::path& indicators, const fs::path& locations, const fs::path& borders)
{
    const std::string table_text = read_file(indicators);
    const std::string locations_text = read_file(locations);
    const std::string borders_text = read_file(borders);
    ParsedTable table = parse_indicator_table(table_text);
    ParsedGeography geo = parse_country_geography(locations_text, borders_text);
    return IngestResult{make_dataset(std::move(table.table), std::move(geo.records)), std::move(table.report),
                        std::move(geo.report)};
}

// ---------------------------------------------------------------------------
// Atlas

AtlasFiles build_atlas(const Dataset& dataset, const AtlasOptions& options)
{
    check_atlas_size(options.width, options.height);
    std::vector<CountryRecord> rendered;
    for (const auto& c : dataset.countries)
        if (!c.rings.empty())
            rendered.push_back(c);
    const GreyMap greymap = assign_grey_levels(rendered);

    AtlasFiles files;
    files.lookup_png =
        as_string(encode_png(rasterize_lookup(rendered, greymap, options.width, options.height, &files.log)));
    files.outline_png = as_string(encode_png(rasterize_outline(rendered, options.width, options.height, options.stroke)));
    files.blend_png = as_string(encode_png(make_blend(options.width, options.height)));
    files.greymap_json = greymap_to_json(greymap).dump(1) + "\n";
    return files;
}

void write_atlas(const AtlasFiles& files, const fs::path& dir)
{
    ensure_dir(dir);
    write_file(dir / kLookupFile, files.lookup_png);
    write_file(dir / kOutlineFile, files.outline_png);
    write_file(dir / kBlendFile, files.blend_png);
    write_file(dir / kGreyMapFile, files.greymap_json);
}

AtlasFiles read_atlas(const fs::path& dir)
{
    AtlasFiles files;
    files.lookup_png = read_file(dir / kLookupFile);
    files.outline_png = read_file(dir / kOutlineFile);
    files.blend_png = read_file(dir / kBlendFile);
    files.greymap_json = read_file(dir / kGreyMapFile);

    const GreyMap greymap = greymap_from_json(parse_json(files.greymap_json, kGreyMapFile));
    const AtlasImage lookup = decode_png(as_bytes(files.lookup_png), AtlasKind::Lookup);
    std::array<bool, 256> seen{};
    for (std::uint8_t px : lookup.pixels)
        seen[px] = true;
    for (int level = 1; level < 256; ++level)
        if (seen[level] && !greymap.country_at(static_cast<std::uint8_t>(level)))
            throw AtlasCorruptionError("lookup image uses grey level " + std::to_string(level) +
                                       " which greymap.json does not define");
    decode_png(as_bytes(files.outline_png), AtlasKind::Outline);
    decode_png(as_bytes(files.blend_png), AtlasKind::Blend);
    return files;
}

// ---------------------------------------------------------------------------
// API

namespace {

constexpr std::string_view kJsonType = "application/json";

ApiResponse json_response(const Json& body)
{
    return ApiResponse{200, std::string(kJsonType), body.dump()};
}

ApiResponse error_response(int status, std::string_view kind, std::string_view message)
{
    Json body = {{"error", {{"kind", kind}, {"message", message}}}};
    return ApiResponse{status, std::string(kJsonType), body.dump()};
}

int status_for(const Error& e)
{
    const std::string& kind = e.kind();
    if (kind == "not_found")
        return 404;
    if (kind == "io_error" || kind == "atlas_corruption" || kind == "dataset_error")
        return 500;
    return 400;
}

std::optional<std::string_view> param(const QueryParams& q, std::string_view key)
{
    auto it = q.find(key);
    if (it == q.end())
        return std::nullopt;
    return std::string_view(it->second);
}

template <typename T>
T parse_param(std::string_view key, std::string_view text)
{
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw SchemaError("query parameter '" + std::string(key) + "' has bad value '" + std::string(text) + "'");
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(value))
            throw SchemaError("query parameter '" + std::string(key) + "' must be finite");
    return value;
}

Iso3 parse_code(std::string_view text)
{
    if (!Iso3::valid(text))
        throw SchemaError("'" + std::string(text) + "' is not an ISO 3166-1 alpha-3 code");
    return Iso3(text);
}

} // namespace

GlobeApi::GlobeApi(std::shared_ptr<const Dataset> dataset, std::optional<AtlasFiles> atlas,
                   MappingConfig default_config)
    : dataset_(std::move(dataset)), atlas_(std::move(atlas)), default_config_(std::move(default_config))
{
    if (!dataset_)
        throw ContractViolation("GlobeApi needs a dataset");
    if (atlas_)
    {
        greymap_ = greymap_from_json(parse_json(atlas_->greymap_json, kGreyMapFile));
        lookup_ = decode_png(as_bytes(atlas_->lookup_png), AtlasKind::Lookup);
    }
}

ApiResponse GlobeApi::handle(std::string_view path, const QueryParams& query) const
{
    try
    {
        return route(path, query);
    }
    catch (const Error& e)
    {
        return error_response(status_for(e), e.kind(), e.what());
    }
    catch (const std::exception& e)
    {
        return error_response(500, "internal", e.what());
    }
}

ApiResponse GlobeApi::route(std::string_view path, const QueryParams& query) const
{
    const Dataset& ds = *dataset_;
    auto year_param = [&] {
        auto text = param(query, "year");
        const int year = text ? parse_param<int>("year", *text) : ds.table.years().last;
        ds.table.year_index(year);
        return year;
    };

    if (path == "/api/indicators")
        return json_response(indicators_to_json(ds.indicators));

    if (path == "/api/countries")
        return json_response(countries_to_json(ds.countries));

    if (path == "/api/frame")
    {
        const int year = year_param();
        ExploreState state{year, default_config_, FilterState{}, std::nullopt};
        if (auto text = param(query, "config"))
            state.config = mapping_from_json(parse_json(*text, "config"));
        if (auto text = param(query, "filters"))
            state.filters = filters_from_json(parse_json(*text, "filters"));
        if (auto sel = param(query, "select"); sel && !sel->empty())
            state.selected = parse_code(*sel);
        const Json body = frame_document(ds, state);
        return json_response(body);
    }

    if (path.starts_with("/api/country/"))
    {
        const Iso3 code = parse_code(path.substr(std::string_view("/api/country/").size()));
        return json_response(detail_to_json(country_detail(ds, code, year_param())));
    }

    if (path == "/api/search")
        return json_response(suggestions_to_json(suggest_countries(param(query, "q").value_or(""), ds.countries)));

    if (path == "/api/extent")
    {
        const auto indicator = param(query, "indicator");
        if (!indicator)
            throw SchemaError("missing query parameter 'indicator'");
        if (!ds.find_indicator(*indicator))
            throw NotFoundError("unknown indicator '" + std::string(*indicator) + "'");
        const int year = year_param();
        const auto lo = param(query, "lo");
        const auto hi = param(query, "hi");
        if (lo.has_value() != hi.has_value())
            throw SchemaError("'lo' and 'hi' must be given together");
        std::optional<Interval> filter;
        if (lo)
            filter = Interval(parse_param<double>("lo", *lo), parse_param<double>("hi", *hi));
        return json_response({{"indicator", *indicator},
                              {"year", year},
                              {"filter", filter ? Json::array({filter->lo(), filter->hi()}) : Json(nullptr)},
                              {"extent", extent_to_json(effective_extent(ds.table, *indicator, year, filter))}});
    }

    if (path == "/api/pick")
    {
        if (!lookup_)
            throw NotFoundError("no atlas loaded");
        const auto u = param(query, "u");
        const auto v = param(query, "v");
        if (!u || !v)
            throw SchemaError("missing query parameter 'u' or 'v'");
        const auto hit = pick_country(UV{parse_param<double>("u", *u), parse_param<double>("v", *v)}, *lookup_, *greymap_);
        return json_response({{"iso3", hit ? Json(hit->str()) : Json(nullptr)}});
    }

    if (path.starts_with("/assets/"))
    {
        if (!atlas_)
            throw NotFoundError("no atlas loaded");
        const std::string_view name = path.substr(std::string_view("/assets/").size());
        if (name == kLookupFile)
            return ApiResponse{200, "image/png", atlas_->lookup_png};
        if (name == kOutlineFile)
            return ApiResponse{200, "image/png", atlas_->outline_png};
        if (name == kBlendFile)
            return ApiResponse{200, "image/png", atlas_->blend_png};
        if (name == kGreyMapFile)
            return ApiResponse{200, std::string(kJsonType), atlas_->greymap_json};
        throw NotFoundError("no asset '" + std::string(name) + "'");
    }

    throw NotFoundError("no route for " + std::string(path));
}

// ---------------------------------------------------------------------------
// Config

fs::path ServiceConfig::resolved_atlas_dir() const
{
    return atlas_dir ? *atlas_dir : bundle_dir / kAtlasDir;
}

void ServiceConfig::validate() const
{
    if (port < 1 || port > 65535)
        throw ConfigError("port " + std::to_string(port) + " outside 1-65535");
    if (!fs::is_regular_file(bundle_dir / kBundleFile))
        throw IoError("no bundle at " + (bundle_dir / kBundleFile).string());
    const fs::path atlas = resolved_atlas_dir();
    for (auto name : {kLookupFile, kOutlineFile, kBlendFile, kGreyMapFile})
        if (!fs::is_regular_file(atlas / name))
            throw IoError("missing atlas file " + (atlas / name).string() + " (run build-atlas first)");
    if (static_dir && !fs::is_directory(*static_dir))
        throw IoError("static directory " + static_dir->string() + " does not exist");
}

} // namespace livingglobe
