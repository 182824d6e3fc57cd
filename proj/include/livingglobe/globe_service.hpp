#pragma once

#include "livingglobe/country_atlas.hpp"
#include "livingglobe/demographic_store.hpp"
#include "livingglobe/visual_mapping.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace livingglobe {

// ---------------------------------------------------------------------------
// Files

inline constexpr std::string_view kBundleFile = "bundle.json";
inline constexpr std::string_view kAtlasDir = "atlas";
inline constexpr std::string_view kLookupFile = "lookup.png";
inline constexpr std::string_view kOutlineFile = "outline.png";
inline constexpr std::string_view kBlendFile = "blend.png";
inline constexpr std::string_view kGreyMapFile = "greymap.json";

/// Whole-file reads and writes; failures throw IoError naming the path.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

/// Writes `dir/bundle.json`, creating `dir` if needed.
void write_bundle(const Dataset& dataset, const std::filesystem::path& dir);
Dataset read_bundle(const std::filesystem::path& dir);

struct IngestResult
{
    Dataset dataset;
    ParseReport table_report;
    GeographyReport geography_report;
};

/// Parses the three source files into a dataset.
IngestResult ingest_files(const std::filesystem::path& indicators, const std::filesystem::path& locations,
                          const std::filesystem::path& borders);

/// The four atlas files, encoded and ready to serve or write.
struct AtlasFiles
{
    std::string lookup_png;
    std::string outline_png;
    std::string blend_png;
    std::string greymap_json;
    RasterLog log;
};

struct AtlasOptions
{
    int width = kDefaultAtlasWidth;
    int height = kDefaultAtlasHeight;
    int stroke = 2;
};

/// Grey levels cover the countries that have borders. Throws CapacityError
/// when there are more than 254 of them.
AtlasFiles build_atlas(const Dataset& dataset, const AtlasOptions& options);
void write_atlas(const AtlasFiles& files, const std::filesystem::path& dir);
/// Reads and cross-checks the four files (the lookup image must only use
/// levels the grey map knows). Throws IoError or AtlasCorruptionError.
AtlasFiles read_atlas(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// API

struct ApiResponse
{
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

using QueryParams = std::multimap<std::string, std::string, std::less<>>;

/// The HTTP API as a pure function of (dataset, atlas, request). Routes:
///
///   GET /api/indicators
///   GET /api/countries
///   GET /api/frame?year=&config=&filters=&select=
///   GET /api/country/{iso3}?year=
///   GET /api/search?q=
///   GET /api/extent?indicator=&year=&lo=&hi=
///   GET /api/pick?u=&v=
///   GET /assets/{lookup.png,outline.png,blend.png,greymap.json}
///
/// `config` and `filters` are JSON (see mapping_from_json and
/// filters_from_json); `year` defaults to the last year. Errors are
/// {"error": {"kind": ..., "message": ...}} with status 400 or 404.
class GlobeApi
{
public:
    GlobeApi(std::shared_ptr<const Dataset> dataset, std::optional<AtlasFiles> atlas,
             MappingConfig default_config = default_mapping());

    ApiResponse handle(std::string_view path, const QueryParams& query) const;

    const Dataset& dataset() const noexcept { return *dataset_; }

private:
    ApiResponse route(std::string_view path, const QueryParams& query) const;

    std::shared_ptr<const Dataset> dataset_;
    std::optional<AtlasFiles> atlas_;
    std::optional<GreyMap> greymap_;
    std::optional<AtlasImage> lookup_;
    MappingConfig default_config_;
};

// ---------------------------------------------------------------------------
// Server

struct ServiceConfig
{
    std::filesystem::path bundle_dir;
    /// Defaults to bundle_dir / "atlas".
    std::optional<std::filesystem::path> atlas_dir;
    /// Served at "/" when set (the browser UI build).
    std::optional<std::filesystem::path> static_dir;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string cors_origin = "*";
    MappingConfig default_config = default_mapping();

    /// Throws ConfigError for a bad port and IoError for missing paths.
    void validate() const;
    std::filesystem::path resolved_atlas_dir() const;
};

/// HTTP front end over GlobeApi. Handles CORS preflight and gzips JSON
/// bodies for clients that accept it.
class GlobeServer
{
public:
    /// Loads the bundle and atlas. Throws on any startup problem.
    explicit GlobeServer(const ServiceConfig& config);
    ~GlobeServer();
    GlobeServer(const GlobeServer&) = delete;
    GlobeServer& operator=(const GlobeServer&) = delete;

    /// Binds config.port and returns it. Throws IoError on failure.
    int bind();
    /// Binds an ephemeral port and returns it.
    int bind_any_port();
    /// Serves until stop(). Call bind() first.
    void listen();
    void stop();

    const GlobeApi& api() const noexcept { return *api_; }

private:
    struct Impl;
    ServiceConfig config_;
    std::unique_ptr<GlobeApi> api_;
    std::unique_ptr<Impl> impl_;
};

} // namespace livingglobe
