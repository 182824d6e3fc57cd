#include "livingglobe/cli.hpp"

#include "livingglobe/errors.hpp"
#include "livingglobe/globe_service.hpp"
#include "livingglobe/json_codec.hpp"

#include <CLI11.hpp>

#include <ostream>

namespace livingglobe {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxListedWarnings = 20;

void print_list(std::ostream& err, std::string_view title, const std::vector<std::string>& items)
{
    if (items.empty())
        return;
    err << title << " (" << items.size() << "):\n";
    for (std::size_t i = 0; i < items.size() && i < kMaxListedWarnings; ++i)
        err << "  " << items[i] << "\n";
    if (items.size() > kMaxListedWarnings)
        err << "  ... " << items.size() - kMaxListedWarnings << " more\n";
}

struct IngestArgs
{
    fs::path indicators, locations, borders, out;
};

int run_ingest(const IngestArgs& a, std::ostream& out, std::ostream& err)
{
    IngestResult r = ingest_files(a.indicators, a.locations, a.borders);
    write_bundle(r.dataset, a.out);

    const auto& t = r.table_report;
    std::size_t with_borders = 0;
    for (const auto& c : r.dataset.countries)
        with_borders += c.rings.empty() ? 0 : 1;
    const auto years = r.dataset.table.years();
    out << "rows: " << t.rows << " (" << t.rejected_rows.size() << " rejected)\n"
        << "cells: " << t.stored << " stored, " << t.missing << " missing\n"
        << "years: " << years.first << "-" << years.last << "\n"
        << "indicators: " << r.dataset.indicators.size() << "\n"
        << "countries: " << r.dataset.table.countries().size() << " with data, " << r.dataset.countries.size()
        << " located, " << with_borders << " with borders\n"
        << "bundle: " << (a.out / kBundleFile).string() << "\n";

    if (r.dataset.table.empty())
        err << "warning: the indicator table has no rows; the bundle is empty\n";
    print_list(err, "warnings", t.warnings);
    print_list(err, "rejected geography", r.geography_report.rejected);
    print_list(err, "unmatched geography", r.geography_report.unmatched);
    return 0;
}

struct AtlasArgs
{
    fs::path bundle;
    std::optional<fs::path> out;
    int width = kDefaultAtlasWidth;
    std::optional<int> height;
    int stroke = 2;
};

int run_build_atlas(const AtlasArgs& a, std::ostream& out, std::ostream& err)
{
    const AtlasOptions options{a.width, a.height.value_or(a.width / 2), a.stroke};
    check_atlas_size(options.width, options.height);
    const Dataset dataset = read_bundle(a.bundle);
    const AtlasFiles files = build_atlas(dataset, options);
    const fs::path dir = a.out.value_or(a.bundle / kAtlasDir);
    write_atlas(files, dir);

    out << "atlas: " << options.width << "x" << options.height << " -> " << dir.string() << "\n"
        << "stamped: " << files.log.stamped.size() << " countries smaller than a pixel\n";
    print_list(err, "overlapping borders", files.log.conflicts);
    return 0;
}

struct ServeArgs
{
    ServiceConfig config;
    std::optional<fs::path> atlas;
    std::optional<fs::path> static_dir;
};

int run_serve(ServeArgs a, std::ostream& out)
{
    a.config.atlas_dir = a.atlas;
    a.config.static_dir = a.static_dir;
    GlobeServer server(a.config);
    const int port = server.bind();
    out << "serving " << a.config.bundle_dir.string() << " on http://" << a.config.host << ":" << port << "\n"
        << std::flush;
    server.listen();
    return 0;
}

struct ExportArgs
{
    fs::path bundle;
    std::optional<int> year;
    std::optional<fs::path> config;
    std::optional<fs::path> filters;
    std::optional<std::string> select;
    fs::path out;
};

int run_export_frame(const ExportArgs& a, std::ostream& out)
{
    const Dataset dataset = read_bundle(a.bundle);
    ExploreState state = initial_state(dataset);
    if (a.year)
        state = set_year(state, *a.year, dataset);
    if (a.config)
        state.config = mapping_from_json(parse_json(read_file(*a.config), a.config->string()));
    if (a.filters)
        state.filters = filters_from_json(parse_json(read_file(*a.filters), a.filters->string()));
    if (a.select)
    {
        if (!Iso3::valid(*a.select))
            throw SchemaError("'" + *a.select + "' is not an ISO 3166-1 alpha-3 code");
        state.selected = Iso3(*a.select);
    }
    write_file(a.out, frame_document(dataset, state).dump(1) + "\n");
    out << "frame " << state.year << " -> " << a.out.string() << "\n";
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Living globe: demographic data on an interactive globe", "livingglobe"};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "Parse indicator, location and border files into a bundle");
    ingest_cmd->add_option("--indicators", ingest.indicators, "Indicator CSV")->required();
    ingest_cmd->add_option("--locations", ingest.locations, "Locations CSV (iso3,name,latitude,longitude)")->required();
    ingest_cmd->add_option("--borders", ingest.borders, "Borders JSON")->required();
    ingest_cmd->add_option("--out", ingest.out, "Bundle directory")->required();

    AtlasArgs atlas;
    auto* atlas_cmd = app.add_subcommand("build-atlas", "Render lookup, outline and blend textures");
    atlas_cmd->add_option("--bundle", atlas.bundle, "Bundle directory")->required();
    atlas_cmd->add_option("--width", atlas.width, "Texture width in pixels")->capture_default_str();
    atlas_cmd->add_option("--height", atlas.height, "Texture height (default width/2)");
    atlas_cmd->add_option("--stroke", atlas.stroke, "Outline width in pixels")->capture_default_str();
    atlas_cmd->add_option("--out", atlas.out, "Output directory (default BUNDLE/atlas)");

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API and textures");
    serve_cmd->add_option("--bundle", serve.config.bundle_dir, "Bundle directory")->required();
    serve_cmd->add_option("--port", serve.config.port, "TCP port")->capture_default_str();
    serve_cmd->add_option("--host", serve.config.host, "Listen address")->capture_default_str();
    serve_cmd->add_option("--atlas", serve.atlas, "Atlas directory (default BUNDLE/atlas)");
    serve_cmd->add_option("--static", serve.static_dir, "Directory served at /");
    serve_cmd->add_option("--cors-origin", serve.config.cors_origin, "Allowed CORS origin")->capture_default_str();

    ExportArgs exp;
    auto* export_cmd = app.add_subcommand("export-frame", "Write the frame JSON for one year");
    export_cmd->add_option("--bundle", exp.bundle, "Bundle directory")->required();
    export_cmd->add_option("--year", exp.year, "Year (default: last)");
    export_cmd->add_option("--config", exp.config, "Mapping config JSON file");
    export_cmd->add_option("--filters", exp.filters, "Filter JSON file");
    export_cmd->add_option("--select", exp.select, "Selected country (iso3)");
    export_cmd->add_option("--out", exp.out, "Output file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        return app.exit(e, out, err);
    }

    try
    {
        if (*ingest_cmd)
            return run_ingest(ingest, out, err);
        if (*atlas_cmd)
            return run_build_atlas(atlas, out, err);
        if (*serve_cmd)
            return run_serve(serve, out);
        if (*export_cmd)
            return run_export_frame(exp, out);
    }
    catch (const Error& e)
    {
        err << "livingglobe: " << e.kind() << ": " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception& e)
    {
        err << "livingglobe: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace livingglobe
