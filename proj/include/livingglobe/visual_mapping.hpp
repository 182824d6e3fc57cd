#pragma once

#include "livingglobe/demographic_store.hpp"
#include "livingglobe/filter_state.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace livingglobe {

struct Rgb
{
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    /// "#rrggbb", lowercase.
    std::string hex() const;
    static std::optional<Rgb> from_hex(std::string_view text);

    bool operator==(const Rgb&) const = default;
};

/// Colour of countries whose mapped value is missing or filtered out.
inline constexpr Rgb kNeutralGrey{160, 160, 160};

/// Height of the bar for the largest value in scene units.
inline constexpr double kMaxBarHeight = 100.0;

/// A value in [0, 1]. Construction outside that range is a contract violation.
class NormalizedValue
{
public:
    explicit NormalizedValue(double v);

    double value() const noexcept { return v_; }

    auto operator<=>(const NormalizedValue&) const = default;

private:
    double v_;
};

struct ColorStop
{
    double position = 0.0;
    Rgb color;

    bool operator==(const ColorStop&) const = default;
};

/// Piecewise-linear sRGB gradient. Stops start at 0, end at 1 and are
/// strictly increasing; the constructor throws ConfigError otherwise.
class ColorScale
{
public:
    ColorScale(std::string id, std::vector<ColorStop> stops);

    const std::string& id() const noexcept { return id_; }
    const std::vector<ColorStop>& stops() const noexcept { return stops_; }

    bool operator==(const ColorScale&) const = default;

private:
    std::string id_;
    std::vector<ColorStop> stops_;
};

// Built-in scales. red_green and blue_yellow are the defaults for country and
// bar colour; viridis and cividis are the colour-vision-deficiency safe
// alternatives, usable on either channel.
const ColorScale& red_green_scale();
const ColorScale& blue_yellow_scale();
const ColorScale& viridis_scale();
const ColorScale& cividis_scale();

const std::vector<ColorScale>& color_scale_presets();

/// Throws ConfigError for an unknown id.
const ColorScale& find_color_scale(std::string_view id);

struct MappingConfig
{
    std::string height;
    std::string bar_color;
    std::string country_color;
    ColorScale country_scale = red_green_scale();
    ColorScale bar_scale = blue_yellow_scale();

    const std::string& variable(Channel c) const noexcept;

    bool operator==(const MappingConfig&) const = default;
};

/// total population -> bar height, population density -> bar colour,
/// population growth -> country colour.
MappingConfig default_mapping();

/// (value - min) / (max - min); 0.5 when max == min. A value outside the
/// extent throws ContractViolation.
NormalizedValue normalize(double value, const Extent& extent);

/// Per-channel interpolation between the neighbouring stops, rounded half up.
Rgb scale_color(NormalizedValue v, const ColorScale& scale);

double bar_height(NormalizedValue v) noexcept;

using ChannelValues = std::array<std::optional<double>, 3>;

struct FrameEntry
{
    /// True when at least one encoding (bar or country colour) is drawn.
    bool visible = false;
    /// True when the country satisfies every active filter.
    bool passes_filters = false;
    /// nullopt renders as kNeutralGrey.
    std::optional<Rgb> country_color;
    std::optional<Rgb> bar_color;
    std::optional<double> bar_height;
    ChannelValues raw;
    ChannelValues normalized;

    bool operator==(const FrameEntry&) const = default;
};

struct VisualFrame
{
    int year = 0;
    /// Normalization extent per channel after filtering.
    std::array<std::optional<Extent>, 3> extents;
    std::map<Iso3, FrameEntry> entries;

    bool operator==(const VisualFrame&) const = default;
};

/// Render instructions for every country of the dataset at `year`.
///
/// Each channel normalizes over effective_extent() of its variable under its
/// own filter. A channel whose filter rejects the country, or whose value is
/// missing, is suppressed: no country colour for the country channel, no bar
/// when either bar channel is suppressed. Unknown variables in `config`
/// throw ConfigError; a year outside the table throws RangeError.
VisualFrame build_frame(const Dataset& dataset, const MappingConfig& config, int year, const FilterState& filters);

} // namespace livingglobe
