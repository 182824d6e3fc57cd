#include "livingglobe/json_codec.hpp"

#include "livingglobe/errors.hpp"

#include <cmath>

namespace livingglobe {

namespace {

template <typename F>
auto decoding(std::string_view what, F&& body) -> decltype(body())
{
    try
    {
        return body();
    }
    catch (const Json::exception& e)
    {
        throw SchemaError("malformed " + std::string(what) + ": " + e.what());
    }
}

Json optional_number(const std::optional<double>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

std::optional<double> number_or_null(const Json& j)
{
    if (j.is_null())
        return std::nullopt;
    if (!j.is_number())
        throw SchemaError("expected a number or null, got " + j.dump());
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw SchemaError("non-finite number");
    return v;
}

Json channel_values_to_json(const ChannelValues& values)
{
    Json j = Json::object();
    for (Channel c : kChannels)
        j[std::string(channel_name(c))] = optional_number(values[index_of(c)]);
    return j;
}

ChannelValues channel_values_from_json(const Json& j)
{
    ChannelValues out;
    for (Channel c : kChannels)
        out[index_of(c)] = number_or_null(j.at(std::string(channel_name(c))));
    return out;
}

Json optional_color(const std::optional<Rgb>& c)
{
    return c ? Json(c->hex()) : Json(nullptr);
}

std::optional<Rgb> color_or_null(const Json& j)
{
    if (j.is_null())
        return std::nullopt;
    auto c = Rgb::from_hex(j.get<std::string>());
    if (!c)
        throw SchemaError("bad colour " + j.dump());
    return c;
}

void require_object(const Json& j, std::string_view what)
{
    if (!j.is_object())
        throw SchemaError(std::string(what) + " must be a JSON object");
}

} // namespace

Json parse_json(std::string_view text, std::string_view what)
{
    try
    {
        return Json::parse(text);
    }
    catch (const Json::parse_error& e)
    {
        throw SchemaError("invalid JSON in " + std::string(what) + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Bundle

Json indicators_to_json(const std::vector<IndicatorId>& indicators)
{
    Json out = Json::array();
    for (const auto& id : indicators)
        out.push_back({{"key", id.key}, {"label", id.label}, {"unit", id.unit}});
    return out;
}

Json countries_to_json(const std::vector<CountryRecord>& countries)
{
    Json out = Json::array();
    for (const auto& c : countries)
        out.push_back({{"iso3", c.iso3.str()}, {"name", c.name}, {"lat", c.lat}, {"lon", c.lon}});
    return out;
}

Json dataset_to_json(const Dataset& dataset)
{
    Json j;
    j["format"] = kBundleFormat;
    j["version"] = kBundleVersion;
    j["years"] = {{"first", dataset.table.years().first}, {"last", dataset.table.years().last}};
    j["indicators"] = indicators_to_json(dataset.indicators);

    Json countries = Json::array();
    for (const auto& c : dataset.countries)
    {
        Json rings = Json::array();
        for (const auto& ring : c.rings)
        {
            Json pts = Json::array();
            for (const auto& p : ring)
                pts.push_back({p.lon, p.lat});
            rings.push_back(std::move(pts));
        }
        countries.push_back(
            {{"iso3", c.iso3.str()}, {"name", c.name}, {"lat", c.lat}, {"lon", c.lon}, {"rings", std::move(rings)}});
    }
    j["countries"] = std::move(countries);

    Json rows = Json::array();
    for (const auto& row : dataset.table.rows())
    {
        Json values = Json::array();
        for (const auto& v : row.values)
            values.push_back(optional_number(v));
        rows.push_back({{"indicator", row.indicator},
                        {"iso3", row.iso3.str()},
                        {"country_name", row.country_name},
                        {"values", std::move(values)}});
    }
    j["rows"] = std::move(rows);
    return j;
}

Dataset dataset_from_json(const Json& j)
{
    return decoding("bundle", [&] {
        require_object(j, "bundle");
        if (j.at("format").get<std::string>() != kBundleFormat)
            throw SchemaError("not a " + std::string(kBundleFormat) + " file");
        if (j.at("version").get<int>() != kBundleVersion)
            throw SchemaError("unsupported bundle version " + j.at("version").dump());

        const YearRange years{j.at("years").at("first").get<int>(), j.at("years").at("last").get<int>()};
        Dataset ds{IndicatorTable(years), {}, {}};

        for (const auto& id : j.at("indicators"))
            ds.indicators.push_back(
                {id.at("key").get<std::string>(), id.at("label").get<std::string>(), id.at("unit").get<std::string>()});

        for (const auto& c : j.at("countries"))
        {
            CountryRecord rec{Iso3(c.at("iso3").get<std::string>()), c.at("name").get<std::string>(),
                              c.at("lat").get<double>(), c.at("lon").get<double>(), {}};
            for (const auto& ring : c.at("rings"))
            {
                Ring r;
                for (const auto& p : ring)
                {
                    if (p.size() != 2)
                        throw SchemaError("ring vertex must be [lon, lat]");
                    r.push_back({p[0].get<double>(), p[1].get<double>()});
                }
                rec.rings.push_back(std::move(r));
            }
            ds.countries.push_back(std::move(rec));
        }

        for (const auto& r : j.at("rows"))
        {
            IndicatorTable::Row row{r.at("indicator").get<std::string>(), Iso3(r.at("iso3").get<std::string>()),
                                    r.at("country_name").get<std::string>(), {}};
            if (!ds.find_indicator(row.indicator))
                throw SchemaError("row uses undeclared indicator '" + row.indicator + "'");
            for (const auto& v : r.at("values"))
                row.values.push_back(number_or_null(v));
            ds.table.add_row(std::move(row));
        }
        return ds;
    });
}

std::string dump_bundle(const Dataset& dataset)
{
    return dataset_to_json(dataset).dump() + "\n";
}

Dataset parse_bundle(std::string_view text)
{
    return dataset_from_json(parse_json(text, "bundle"));
}

// ---------------------------------------------------------------------------
// Mapping, filters, state

Json mapping_to_json(const MappingConfig& config)
{
    Json j;
    for (Channel c : kChannels)
        j[std::string(channel_name(c))] = config.variable(c);
    j["country_scale"] = config.country_scale.id();
    j["bar_scale"] = config.bar_scale.id();
    return j;
}

MappingConfig mapping_from_json(const Json& j)
{
    return decoding("mapping config", [&] {
        require_object(j, "mapping config");
        MappingConfig config = default_mapping();
        for (const auto& [key, value] : j.items())
        {
            if (key == "height")
                config.height = value.get<std::string>();
            else if (key == "bar_color")
                config.bar_color = value.get<std::string>();
            else if (key == "country_color")
                config.country_color = value.get<std::string>();
            else if (key == "country_scale")
                config.country_scale = find_color_scale(value.get<std::string>());
            else if (key == "bar_scale")
                config.bar_scale = find_color_scale(value.get<std::string>());
            else
                throw ConfigError("unknown mapping key '" + key + "'");
        }
        return config;
    });
}

Json filters_to_json(const FilterState& filters)
{
    Json j;
    for (Channel c : kChannels)
    {
        const auto& i = filters.interval(c);
        j[std::string(channel_name(c))] = i ? Json::array({i->lo(), i->hi()}) : Json(nullptr);
    }
    return j;
}

FilterState filters_from_json(const Json& j)
{
    return decoding("filters", [&] {
        require_object(j, "filters");
        FilterState filters;
        for (const auto& [key, value] : j.items())
        {
            const auto channel = parse_channel(key);
            if (!channel)
                throw ConfigError("unknown filter channel '" + key + "'");
            if (value.is_null())
                continue;
            if (!value.is_array() || value.size() != 2)
                throw SchemaError("filter for " + key + " must be [lo, hi] or null");
            const auto lo = number_or_null(value[0]);
            const auto hi = number_or_null(value[1]);
            if (!lo || !hi)
                throw SchemaError("filter bounds for " + key + " must be numbers");
            if (*lo > *hi)
                throw SchemaError("filter for " + key + " has lo > hi");
            filters.set(*channel, Interval(*lo, *hi));
        }
        return filters;
    });
}

Json state_to_json(const ExploreState& state)
{
    return {{"year", state.year},
            {"config", mapping_to_json(state.config)},
            {"filters", filters_to_json(state.filters)},
            {"sticky", state.filters.sticky},
            {"selected", state.selected ? Json(state.selected->str()) : Json(nullptr)}};
}

ExploreState state_from_json(const Json& j)
{
    return decoding("state", [&] {
        require_object(j, "state");
        ExploreState s;
        s.year = j.at("year").get<int>();
        s.filters = filters_from_json(j.at("filters"));
        if (j.contains("sticky"))
            s.filters.sticky = j.at("sticky").get<bool>();
        if (j.contains("config"))
            s.config = mapping_from_json(j.at("config"));
        else
            s.config = default_mapping();
        if (j.contains("selected") && !j.at("selected").is_null())
            s.selected = Iso3(j.at("selected").get<std::string>());
        return s;
    });
}

// ---------------------------------------------------------------------------
// Frames and details

Json extent_to_json(const std::optional<Extent>& extent)
{
    if (!extent)
        return nullptr;
    return {{"min", extent->min}, {"max", extent->max}, {"count", extent->count}};
}

std::optional<Extent> extent_from_json(const Json& j)
{
    return decoding("extent", [&]() -> std::optional<Extent> {
        if (j.is_null())
            return std::nullopt;
        return Extent{j.at("min").get<double>(), j.at("max").get<double>(), j.at("count").get<std::size_t>()};
    });
}

Json frame_to_json(const VisualFrame& frame)
{
    Json j;
    j["year"] = frame.year;
    j["neutral_color"] = kNeutralGrey.hex();
    j["max_bar_height"] = kMaxBarHeight;

    Json extents = Json::object();
    for (Channel c : kChannels)
        extents[std::string(channel_name(c))] = extent_to_json(frame.extents[index_of(c)]);
    j["extents"] = std::move(extents);

    Json countries = Json::object();
    for (const auto& [code, e] : frame.entries)
        countries[code.str()] = {{"visible", e.visible},
                                 {"passes_filters", e.passes_filters},
                                 {"country_color", optional_color(e.country_color)},
                                 {"bar_color", optional_color(e.bar_color)},
                                 {"bar_height", optional_number(e.bar_height)},
                                 {"raw", channel_values_to_json(e.raw)},
                                 {"normalized", channel_values_to_json(e.normalized)}};
    j["countries"] = std::move(countries);
    return j;
}

VisualFrame frame_from_json(const Json& j)
{
    return decoding("frame", [&] {
        require_object(j, "frame");
        VisualFrame frame;
        frame.year = j.at("year").get<int>();
        for (Channel c : kChannels)
            frame.extents[index_of(c)] = extent_from_json(j.at("extents").at(std::string(channel_name(c))));
        for (const auto& [code, e] : j.at("countries").items())
        {
            FrameEntry entry;
            entry.visible = e.at("visible").get<bool>();
            entry.passes_filters = e.at("passes_filters").get<bool>();
            entry.country_color = color_or_null(e.at("country_color"));
            entry.bar_color = color_or_null(e.at("bar_color"));
            entry.bar_height = number_or_null(e.at("bar_height"));
            entry.raw = channel_values_from_json(e.at("raw"));
            entry.normalized = channel_values_from_json(e.at("normalized"));
            frame.entries.emplace(Iso3(code), std::move(entry));
        }
        return frame;
    });
}

Json frame_document(const Dataset& dataset, const ExploreState& state)
{
    Json j = frame_to_json(build_frame(dataset, state.config, state.year, state.filters));
    j["config"] = mapping_to_json(state.config);
    j["filters"] = filters_to_json(state.filters);
    j["selected"] = state.selected ? detail_to_json(country_detail(dataset, *state.selected, state.year)) : Json(nullptr);
    return j;
}

Json detail_to_json(const CountryDetail& detail)
{
    Json values = Json::array();
    for (const auto& v : detail.values)
        values.push_back({{"indicator", v.indicator},
                          {"value", optional_number(v.value)},
                          {"source_year", v.source_year ? Json(*v.source_year) : Json(nullptr)},
                          {"carried", v.carried}});
    return {{"iso3", detail.iso3.str()}, {"name", detail.name}, {"year", detail.year}, {"values", std::move(values)}};
}

CountryDetail detail_from_json(const Json& j)
{
    return decoding("country detail", [&] {
        require_object(j, "country detail");
        CountryDetail d{Iso3(j.at("iso3").get<std::string>()), j.at("name").get<std::string>(),
                        j.at("year").get<int>(), {}};
        for (const auto& v : j.at("values"))
        {
            DetailValue dv{v.at("indicator").get<std::string>(), number_or_null(v.at("value")), std::nullopt,
                           v.at("carried").get<bool>()};
            if (!v.at("source_year").is_null())
                dv.source_year = v.at("source_year").get<int>();
            d.values.push_back(std::move(dv));
        }
        return d;
    });
}

Json suggestions_to_json(const std::vector<Suggestion>& suggestions)
{
    Json out = Json::array();
    for (const auto& s : suggestions)
        out.push_back({{"iso3", s.iso3.str()}, {"name", s.name}});
    return out;
}

std::vector<Suggestion> suggestions_from_json(const Json& j)
{
    return decoding("suggestions", [&] {
        std::vector<Suggestion> out;
        for (const auto& s : j)
            out.push_back({Iso3(s.at("iso3").get<std::string>()), s.at("name").get<std::string>()});
        return out;
    });
}

// ---------------------------------------------------------------------------
// Grey map

Json greymap_to_json(const GreyMap& greymap)
{
    Json j = Json::object();
    for (const auto& [level, code] : greymap.levels())
        j[std::to_string(level)] = code.str();
    return j;
}

GreyMap greymap_from_json(const Json& j)
{
    return decoding("grey map", [&] {
        require_object(j, "grey map");
        std::map<std::uint8_t, Iso3> levels;
        for (const auto& [key, value] : j.items())
        {
            int level = -1;
            try
            {
                std::size_t used = 0;
                level = std::stoi(key, &used);
                if (used != key.size())
                    level = -1;
            }
            catch (const std::exception&)
            {
            }
            if (level < 1 || level > 254)
                throw SchemaError("grey map key '" + key + "' is not a level in 1..254");
            levels.emplace(static_cast<std::uint8_t>(level), Iso3(value.get<std::string>()));
        }
        try
        {
            return GreyMap(std::move(levels));
        }
        catch (const ContractViolation& e)
        {
            throw SchemaError(std::string("grey map is not a bijection: ") + e.what());
        }
    });
}

} // namespace livingglobe
