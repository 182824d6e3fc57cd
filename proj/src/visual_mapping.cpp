#include "livingglobe/visual_mapping.hpp"

#include "livingglobe/errors.hpp"
#include "livingglobe/explore_query.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace livingglobe {

std::string Rgb::hex() const
{
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

std::optional<Rgb> Rgb::from_hex(std::string_view text)
{
    if (text.size() != 7 || text[0] != '#')
        return std::nullopt;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    };
    std::array<int, 3> channels{};
    for (std::size_t i = 0; i < 3; ++i)
    {
        const int hi = nibble(text[1 + 2 * i]);
        const int lo = nibble(text[2 + 2 * i]);
        if (hi < 0 || lo < 0)
            return std::nullopt;
        channels[i] = hi * 16 + lo;
    }
    return Rgb{static_cast<std::uint8_t>(channels[0]), static_cast<std::uint8_t>(channels[1]),
               static_cast<std::uint8_t>(channels[2])};
}

NormalizedValue::NormalizedValue(double v) : v_(v)
{
    if (!(v >= 0.0 && v <= 1.0))
        throw ContractViolation("normalized value " + std::to_string(v) + " outside [0, 1]");
}

ColorScale::ColorScale(std::string id, std::vector<ColorStop> stops) : id_(std::move(id)), stops_(std::move(stops))
{
    if (stops_.size() < 2)
        throw ConfigError("colour scale '" + id_ + "' needs at least two stops");
    if (stops_.front().position != 0.0 || stops_.back().position != 1.0)
        throw ConfigError("colour scale '" + id_ + "' must start at 0 and end at 1");
    for (std::size_t i = 1; i < stops_.size(); ++i)
        if (!(stops_[i].position > stops_[i - 1].position))
            throw ConfigError("colour scale '" + id_ + "' stop positions must increase strictly");
}

const ColorScale& red_green_scale()
{
    static const ColorScale scale("red_green", {{0.0, {255, 0, 0}}, {1.0, {0, 255, 0}}});
    return scale;
}

const ColorScale& blue_yellow_scale()
{
    static const ColorScale scale("blue_yellow", {{0.0, {0, 0, 255}}, {1.0, {255, 255, 0}}});
    return scale;
}

const ColorScale& viridis_scale()
{
    static const ColorScale scale("viridis", {{0.0, {0x44, 0x01, 0x54}},
                                              {0.25, {0x3b, 0x52, 0x8b}},
                                              {0.5, {0x21, 0x91, 0x8c}},
                                              {0.75, {0x5e, 0xc9, 0x62}},
                                              {1.0, {0xfd, 0xe7, 0x25}}});
    return scale;
}

const ColorScale& cividis_scale()
{
    static const ColorScale scale("cividis", {{0.0, {0x00, 0x20, 0x4d}},
                                              {0.25, {0x41, 0x4d, 0x6b}},
                                              {0.5, {0x7c, 0x7b, 0x78}},
                                              {0.75, {0xbc, 0xaf, 0x6f}},
                                              {1.0, {0xff, 0xea, 0x46}}});
    return scale;
}

const std::vector<ColorScale>& color_scale_presets()
{
    static const std::vector<ColorScale> presets = {red_green_scale(), blue_yellow_scale(), viridis_scale(),
                                                    cividis_scale()};
    return presets;
}

const ColorScale& find_color_scale(std::string_view id)
{
    for (const auto& scale : color_scale_presets())
        if (scale.id() == id)
            return scale;
    throw ConfigError("unknown colour scale '" + std::string(id) + "'");
}

const std::string& MappingConfig::variable(Channel c) const noexcept
{
    switch (c)
    {
    case Channel::Height:
        return height;
    case Channel::BarColor:
        return bar_color;
    case Channel::CountryColor:
        break;
    }
    return country_color;
}

MappingConfig default_mapping()
{
    return MappingConfig{"total_population", "population_density", "population_growth", red_green_scale(),
                         blue_yellow_scale()};
}

NormalizedValue normalize(double value, const Extent& extent)
{
    if (!(value >= extent.min && value <= extent.max))
        throw ContractViolation("value " + std::to_string(value) + " outside extent [" +
                                std::to_string(extent.min) + ", " + std::to_string(extent.max) + "]");
    if (extent.max == extent.min)
        return NormalizedValue(0.5);
    return NormalizedValue((value - extent.min) / (extent.max - extent.min));
}

Rgb scale_color(NormalizedValue v, const ColorScale& scale)
{
    const auto& stops = scale.stops();
    const double x = v.value();
    std::size_t k = 0;
    while (k + 2 < stops.size() && x > stops[k + 1].position)
        ++k;
    const ColorStop& a = stops[k];
    const ColorStop& b = stops[k + 1];
    const double t = (x - a.position) / (b.position - a.position);
    auto channel = [t](std::uint8_t c0, std::uint8_t c1) {
        const double c = c0 + t * (static_cast<double>(c1) - c0);
        return static_cast<std::uint8_t>(std::clamp(std::floor(c + 0.5), 0.0, 255.0));
    };
    return Rgb{channel(a.color.r, b.color.r), channel(a.color.g, b.color.g), channel(a.color.b, b.color.b)};
}

double bar_height(NormalizedValue v) noexcept
{
    return kMaxBarHeight * v.value();
}

VisualFrame build_frame(const Dataset& dataset, const MappingConfig& config, int year, const FilterState& filters)
{
    for (Channel c : kChannels)
        if (!dataset.find_indicator(config.variable(c)))
            throw ConfigError("unknown indicator '" + config.variable(c) + "' mapped to " +
                              std::string(channel_name(c)));
    const std::size_t yi = dataset.table.year_index(year);

    VisualFrame frame;
    frame.year = year;
    for (Channel c : kChannels)
        frame.extents[index_of(c)] =
            effective_extent(dataset.table, config.variable(c), year, filters.interval(c));

    std::set<Iso3> codes;
    for (const auto& record : dataset.countries)
        codes.insert(record.iso3);
    for (const auto& code : dataset.table.countries())
        codes.insert(code);

    for (const auto& code : codes)
    {
        FrameEntry entry;
        entry.passes_filters = true;
        std::array<bool, 3> shown{};
        for (Channel c : kChannels)
        {
            const std::size_t ci = index_of(c);
            const auto* row = dataset.table.find_row(config.variable(c), code);
            const auto raw = row ? row->values[yi] : std::nullopt;
            entry.raw[ci] = raw;

            const auto& filter = filters.interval(c);
            const bool passes = !filter || (raw && filter->contains(*raw));
            entry.passes_filters = entry.passes_filters && passes;

            const auto& extent = frame.extents[ci];
            if (raw && passes && extent)
            {
                entry.normalized[ci] = normalize(*raw, *extent).value();
                shown[ci] = true;
            }
        }

        const auto& norm = entry.normalized;
        if (shown[index_of(Channel::CountryColor)])
            entry.country_color =
                scale_color(NormalizedValue(*norm[index_of(Channel::CountryColor)]), config.country_scale);
        if (shown[index_of(Channel::Height)] && shown[index_of(Channel::BarColor)])
        {
            entry.bar_height = bar_height(NormalizedValue(*norm[index_of(Channel::Height)]));
            entry.bar_color = scale_color(NormalizedValue(*norm[index_of(Channel::BarColor)]), config.bar_scale);
        }
        entry.visible = entry.country_color.has_value() || entry.bar_height.has_value();
        frame.entries.emplace(code, std::move(entry));
    }
    return frame;
}

} // namespace livingglobe
