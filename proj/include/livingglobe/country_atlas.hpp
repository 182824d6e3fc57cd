#pragma once

#include "livingglobe/demographic_store.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace livingglobe {

/// Equirectangular texture coordinate: u grows eastwards from lon -180,
/// v grows southwards from lat 90.
struct UV
{
    double u = 0.0;
    double v = 0.0;

    bool operator==(const UV&) const = default;
};

/// Throws RangeError for coordinates outside [-90, 90] x [-180, 180].
UV latlon_to_uv(double lat, double lon);

/// Inverse of latlon_to_uv. Throws RangeError outside [0, 1]^2.
LonLat uv_to_latlon(UV uv);

/// Even-odd test of (lat, lon) against one country's rings (holes included).
bool rings_contain(const std::vector<Ring>& rings, double lat, double lon);

/// First record (in the given order) whose rings contain the point.
std::optional<Iso3> point_in_country(double lat, double lon, std::span<const CountryRecord> records);

/// Bijection between grey levels 1..254 and countries. Level 0 is sea and
/// 255 is reserved for the selection highlight.
class GreyMap
{
public:
    static constexpr std::uint8_t kSea = 0;
    static constexpr std::uint8_t kReserved = 255;
    static constexpr std::size_t kCapacity = 254;

    GreyMap() = default;
    /// Throws ContractViolation unless the map is a bijection over 1..254.
    explicit GreyMap(std::map<std::uint8_t, Iso3> levels);

    std::optional<std::uint8_t> level_of(const Iso3& iso3) const;
    std::optional<Iso3> country_at(std::uint8_t level) const;

    const std::map<std::uint8_t, Iso3>& levels() const noexcept { return levels_; }
    std::size_t size() const noexcept { return levels_.size(); }

    bool operator==(const GreyMap&) const = default;

private:
    std::map<std::uint8_t, Iso3> levels_;
    std::map<Iso3, std::uint8_t> by_country_;
};

/// Sorts by iso3 and spaces n countries evenly: level(i) = floor((i+1) * 255 / (n+1)).
/// More than 254 countries throws CapacityError.
GreyMap assign_grey_levels(std::span<const CountryRecord> records);

enum class AtlasKind
{
    Lookup,  // 1 channel, grey level per pixel
    Outline, // RGBA
    Blend,   // RGBA
};

struct AtlasImage
{
    AtlasKind kind = AtlasKind::Lookup;
    int width = 0;
    int height = 0;
    int channels = 1;
    /// Row-major, top row first.
    std::vector<std::uint8_t> pixels;

    static AtlasImage blank(AtlasKind kind, int width, int height);

    std::uint8_t* at(int x, int y) { return pixels.data() + (static_cast<std::size_t>(y) * width + x) * channels; }
    const std::uint8_t* at(int x, int y) const
    {
        return pixels.data() + (static_cast<std::size_t>(y) * width + x) * channels;
    }

    bool operator==(const AtlasImage&) const = default;
};

struct Rgba
{
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    std::uint8_t a = 255;

    bool operator==(const Rgba&) const = default;
};

inline constexpr int kDefaultAtlasWidth = 2048;
inline constexpr int kDefaultAtlasHeight = 1024;
inline constexpr int kMinAtlasWidth = 512;

inline constexpr Rgba kDefaultOutlineColor{24, 24, 24, 255};
inline constexpr Rgba kDefaultBlendTop{8, 32, 72, 255};
inline constexpr Rgba kDefaultBlendBottom{64, 128, 176, 255};

/// Things worth reporting from a lookup rasterization.
struct RasterLog
{
    /// "AAA/BBB: n px" for pixels claimed by both; the earlier iso3 keeps them.
    std::vector<std::string> conflicts;
    /// Countries too small to cover a pixel centre, stamped at their centroid.
    std::vector<Iso3> stamped;
};

/// Throws ContractViolation unless width == 2 * height and width >= 512.
void check_atlas_size(int width, int height);

/// Scanline even-odd fill at pixel centres. Records are painted in iso3
/// order and the first claim on a pixel wins.
AtlasImage rasterize_lookup(std::span<const CountryRecord> records, const GreyMap& greymap, int width, int height,
                            RasterLog* log = nullptr);

/// Frontier polylines with a square brush of `stroke` pixels on a
/// transparent background.
AtlasImage rasterize_outline(std::span<const CountryRecord> records, int width, int height, int stroke,
                             Rgba color = kDefaultOutlineColor);

/// Vertical gradient from `top` (first row) to `bottom` (last row).
AtlasImage make_blend(int width, int height, Rgba top = kDefaultBlendTop, Rgba bottom = kDefaultBlendBottom);

/// Nearest-pixel sample of the lookup image. Sea yields nullopt; a level
/// the grey map does not know throws AtlasCorruptionError.
std::optional<Iso3> pick_country(UV uv, const AtlasImage& lookup, const GreyMap& greymap);

/// 8-bit PNG: greyscale for lookup images, RGBA otherwise. Output carries no
/// timestamps, so equal images encode to equal bytes.
std::vector<std::uint8_t> encode_png(const AtlasImage& image);

/// Throws IoError for anything but an 8-bit greyscale or RGBA PNG.
AtlasImage decode_png(std::span<const std::uint8_t> bytes, AtlasKind kind);

} // namespace livingglobe
