#include "livingglobe/country_atlas.hpp"

#include "livingglobe/errors.hpp"
#include "ring_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace livingglobe {

namespace detail {

namespace {

double wrap_delta(double d) noexcept
{
    if (d > 180.0)
        return d - 360.0;
    if (d < -180.0)
        return d + 360.0;
    return d;
}

} // namespace

bool crosses_antimeridian(const Ring& ring) noexcept
{
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++)
        if (std::abs(ring[i].lon - ring[j].lon) > 180.0)
            return true;
    return false;
}

std::vector<PreparedRing> prepare_ring(const Ring& ring)
{
    std::vector<PreparedRing> out;
    if (ring.size() < 3)
        return out;

    PreparedRing base;
    base.points.reserve(ring.size() + 3);
    base.points.push_back(ring.front());
    double lat_sum = ring.front().lat;
    for (std::size_t i = 1; i < ring.size(); ++i)
    {
        const double d = wrap_delta(ring[i].lon - ring[i - 1].lon);
        base.points.push_back({base.points.back().lon + d, ring[i].lat});
        lat_sum += ring[i].lat;
    }
    const double closing_lon = base.points.back().lon + wrap_delta(ring.front().lon - ring.back().lon);
    if (std::abs(closing_lon - base.points.front().lon) > 1e-6)
    {
        // Winds around a pole: close the ring along it.
        const double pole = lat_sum > 0.0 ? 90.0 : -90.0;
        const double start_lon = base.points.front().lon;
        base.points.push_back({closing_lon, ring.front().lat});
        base.points.push_back({closing_lon, pole});
        base.points.push_back({start_lon, pole});
    }

    base.min_lon = base.max_lon = base.points.front().lon;
    base.min_lat = base.max_lat = base.points.front().lat;
    for (const auto& p : base.points)
    {
        base.min_lon = std::min(base.min_lon, p.lon);
        base.max_lon = std::max(base.max_lon, p.lon);
        base.min_lat = std::min(base.min_lat, p.lat);
        base.max_lat = std::max(base.max_lat, p.lat);
    }

    for (int k = -2; k <= 2; ++k)
    {
        const double shift = 360.0 * k;
        if (base.max_lon + shift <= -180.0 || base.min_lon + shift >= 180.0)
            continue;
        PreparedRing copy = base;
        if (k != 0)
        {
            for (auto& p : copy.points)
                p.lon += shift;
            copy.min_lon += shift;
            copy.max_lon += shift;
        }
        out.push_back(std::move(copy));
    }
    return out;
}

} // namespace detail

using detail::crossing_lon;
using detail::PreparedRing;
using detail::prepare_ring;

// ---------------------------------------------------------------------------
// Projection

UV latlon_to_uv(double lat, double lon)
{
    if (!(lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0))
        throw RangeError("coordinate (" + std::to_string(lat) + ", " + std::to_string(lon) + ") out of range");
    return UV{(lon + 180.0) / 360.0, (90.0 - lat) / 180.0};
}

LonLat uv_to_latlon(UV uv)
{
    if (!(uv.u >= 0.0 && uv.u <= 1.0 && uv.v >= 0.0 && uv.v <= 1.0))
        throw RangeError("uv (" + std::to_string(uv.u) + ", " + std::to_string(uv.v) + ") out of range");
    return LonLat{uv.u * 360.0 - 180.0, 90.0 - uv.v * 180.0};
}

// ---------------------------------------------------------------------------
// Point in polygon

namespace {

bool ring_crossings_odd(std::span<const LonLat> pts, double lat, double lon) noexcept
{
    bool inside = false;
    for (std::size_t i = 0, j = pts.size() - 1; i < pts.size(); j = i++)
    {
        const LonLat& a = pts[j];
        const LonLat& b = pts[i];
        if ((a.lat > lat) != (b.lat > lat) && lon < crossing_lon(a, b, lat))
            inside = !inside;
    }
    return inside;
}

} // namespace

bool rings_contain(const std::vector<Ring>& rings, double lat, double lon)
{
    bool inside = false;
    for (const auto& ring : rings)
    {
        if (ring.size() < 3)
            continue;
        if (!detail::crosses_antimeridian(ring))
        {
            inside ^= ring_crossings_odd(ring, lat, lon);
            continue;
        }
        for (const auto& copy : prepare_ring(ring))
            inside ^= ring_crossings_odd(copy.points, lat, lon);
    }
    return inside;
}

std::optional<Iso3> point_in_country(double lat, double lon, std::span<const CountryRecord> records)
{
    if (!(lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0))
        throw RangeError("coordinate (" + std::to_string(lat) + ", " + std::to_string(lon) + ") out of range");
    for (const auto& record : records)
        if (rings_contain(record.rings, lat, lon))
            return record.iso3;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Grey map

GreyMap::GreyMap(std::map<std::uint8_t, Iso3> levels) : levels_(std::move(levels))
{
    for (const auto& [level, code] : levels_)
    {
        if (level == kSea || level == kReserved)
            throw ContractViolation("grey level " + std::to_string(level) + " is reserved");
        if (!by_country_.emplace(code, level).second)
            throw ContractViolation("country " + code.str() + " has more than one grey level");
    }
}

std::optional<std::uint8_t> GreyMap::level_of(const Iso3& iso3) const
{
    auto it = by_country_.find(iso3);
    if (it == by_country_.end())
        return std::nullopt;
    return it->second;
}

std::optional<Iso3> GreyMap::country_at(std::uint8_t level) const
{
    auto it = levels_.find(level);
    if (it == levels_.end())
        return std::nullopt;
    return it->second;
}

GreyMap assign_grey_levels(std::span<const CountryRecord> records)
{
    std::set<Iso3> codes;
    for (const auto& r : records)
        codes.insert(r.iso3);
    const std::size_t n = codes.size();
    if (n > GreyMap::kCapacity)
        throw CapacityError(std::to_string(n) + " countries exceed the " + std::to_string(GreyMap::kCapacity) +
                            " available grey levels");
    std::map<std::uint8_t, Iso3> levels;
    std::size_t i = 0;
    for (const auto& code : codes)
    {
        const auto level = static_cast<std::uint8_t>((i + 1) * 255 / (n + 1));
        levels.emplace(level, code);
        ++i;
    }
    return GreyMap(std::move(levels));
}

// ---------------------------------------------------------------------------
// Images

AtlasImage AtlasImage::blank(AtlasKind kind, int width, int height)
{
    AtlasImage img;
    img.kind = kind;
    img.width = width;
    img.height = height;
    img.channels = kind == AtlasKind::Lookup ? 1 : 4;
    img.pixels.assign(static_cast<std::size_t>(width) * height * img.channels, 0);
    return img;
}

void check_atlas_size(int width, int height)
{
    if (width != 2 * height || width < kMinAtlasWidth)
        throw ContractViolation("atlas must be 2:1 with width >= " + std::to_string(kMinAtlasWidth) + ", got " +
                                std::to_string(width) + "x" + std::to_string(height));
}

namespace {

std::vector<const CountryRecord*> sorted_by_iso3(std::span<const CountryRecord> records)
{
    std::vector<const CountryRecord*> out;
    out.reserve(records.size());
    for (const auto& r : records)
        out.push_back(&r);
    std::stable_sort(out.begin(), out.end(),
                     [](const CountryRecord* a, const CountryRecord* b) { return a->iso3 < b->iso3; });
    return out;
}

} // namespace

AtlasImage rasterize_lookup(std::span<const CountryRecord> records, const GreyMap& greymap, int width, int height,
                            RasterLog* log)
{
    check_atlas_size(width, height);
    AtlasImage img = AtlasImage::blank(AtlasKind::Lookup, width, height);

    const double deg_per_px_x = 360.0 / width;
    const double deg_per_px_y = 180.0 / height;
    auto centre_lon = [&](int i) { return -180.0 + (i + 0.5) * deg_per_px_x; };
    auto centre_lat = [&](int j) { return 90.0 - (j + 0.5) * deg_per_px_y; };

    std::map<std::pair<Iso3, Iso3>, std::size_t> conflicts;
    std::vector<std::uint8_t> painted_levels(256, 0);
    std::vector<double> xs;

    const auto ordered = sorted_by_iso3(records);
    for (const CountryRecord* record : ordered)
    {
        const auto level = greymap.level_of(record->iso3);
        if (!level || record->rings.empty())
            continue;

        std::vector<PreparedRing> rings;
        for (const auto& ring : record->rings)
            for (auto& copy : prepare_ring(ring))
                rings.push_back(std::move(copy));
        if (rings.empty())
            continue;

        double min_lat = rings.front().min_lat, max_lat = rings.front().max_lat;
        for (const auto& r : rings)
        {
            min_lat = std::min(min_lat, r.min_lat);
            max_lat = std::max(max_lat, r.max_lat);
        }
        const int j0 = std::max(0, static_cast<int>(std::floor((90.0 - max_lat) / deg_per_px_y - 0.5)));
        const int j1 = std::min(height - 1, static_cast<int>(std::ceil((90.0 - min_lat) / deg_per_px_y - 0.5)));

        for (int j = j0; j <= j1; ++j)
        {
            const double lat = centre_lat(j);
            xs.clear();
            for (const auto& r : rings)
            {
                if (lat < r.min_lat || lat > r.max_lat)
                    continue;
                const auto& pts = r.points;
                for (std::size_t i = 0, k = pts.size() - 1; i < pts.size(); k = i++)
                    if ((pts[k].lat > lat) != (pts[i].lat > lat))
                        xs.push_back(crossing_lon(pts[k], pts[i], lat));
            }
            std::sort(xs.begin(), xs.end());

            for (std::size_t s = 0; s + 1 < xs.size(); s += 2)
            {
                const double from = xs[s];
                const double to = xs[s + 1];
                // Pixels whose centre lies in [from, to).
                int i0 = std::max(0, static_cast<int>(std::ceil((from + 180.0) / deg_per_px_x - 0.5)) - 1);
                while (i0 < width && centre_lon(i0) < from)
                    ++i0;
                for (int i = i0; i < width && centre_lon(i) < to; ++i)
                {
                    std::uint8_t& px = *img.at(i, j);
                    if (px == GreyMap::kSea)
                    {
                        px = *level;
                    }
                    else if (px != *level)
                    {
                        ++conflicts[{*greymap.country_at(px), record->iso3}];
                    }
                }
            }
        }
    }

    for (std::uint8_t px : img.pixels)
        painted_levels[px] = 1;
    for (const CountryRecord* record : ordered)
    {
        const auto level = greymap.level_of(record->iso3);
        if (!level || record->rings.empty() || painted_levels[*level])
            continue;
        const UV uv = latlon_to_uv(record->lat, record->lon);
        const int x = std::min(width - 1, static_cast<int>(uv.u * width));
        const int y = std::min(height - 1, static_cast<int>(uv.v * height));
        *img.at(x, y) = *level;
        painted_levels[*level] = 1;
        if (log)
            log->stamped.push_back(record->iso3);
    }

    if (log)
        for (const auto& [pair, count] : conflicts)
            log->conflicts.push_back(pair.first.str() + "/" + pair.second.str() + ": " + std::to_string(count) +
                                     " px");
    return img;
}

AtlasImage rasterize_outline(std::span<const CountryRecord> records, int width, int height, int stroke, Rgba color)
{
    check_atlas_size(width, height);
    if (stroke < 1)
        throw ContractViolation("outline stroke must be at least 1 pixel");
    AtlasImage img = AtlasImage::blank(AtlasKind::Outline, width, height);

    const int offset = (stroke - 1) / 2;
    auto stamp = [&](int cx, int cy) {
        for (int y = cy - offset; y < cy - offset + stroke; ++y)
        {
            if (y < 0 || y >= height)
                continue;
            for (int x = cx - offset; x < cx - offset + stroke; ++x)
            {
                if (x < 0 || x >= width)
                    continue;
                std::uint8_t* px = img.at(x, y);
                px[0] = color.r;
                px[1] = color.g;
                px[2] = color.b;
                px[3] = color.a;
            }
        }
    };
    // Pixel centres sit on integer coordinates.
    auto to_px = [&](const LonLat& p) {
        return std::pair{(p.lon + 180.0) / 360.0 * width - 0.5, (90.0 - p.lat) / 180.0 * height - 0.5};
    };

    for (const CountryRecord* record : sorted_by_iso3(records))
        for (const auto& ring : record->rings)
            for (const auto& copy : prepare_ring(ring))
            {
                const auto& pts = copy.points;
                for (std::size_t i = 0, k = pts.size() - 1; i < pts.size(); k = i++)
                {
                    const LonLat& a = pts[k];
                    const LonLat& b = pts[i];
                    // Pole closures and map-edge seams are not frontiers.
                    if (std::abs(a.lat) == 90.0 && a.lat == b.lat)
                        continue;
                    if (a.lon == b.lon && std::abs(std::remainder(a.lon, 360.0)) == 180.0)
                        continue;
                    const auto [x0, y0] = to_px(a);
                    const auto [x1, y1] = to_px(b);
                    const double dx = x1 - x0;
                    const double dy = y1 - y0;
                    const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(dx), std::abs(dy)))));
                    for (int s = 0; s <= steps; ++s)
                    {
                        const double t = static_cast<double>(s) / steps;
                        stamp(static_cast<int>(std::floor(x0 + dx * t + 0.5)),
                              static_cast<int>(std::floor(y0 + dy * t + 0.5)));
                    }
                }
            }
    return img;
}

AtlasImage make_blend(int width, int height, Rgba top, Rgba bottom)
{
    if (width < 1 || height < 1)
        throw ContractViolation("blend image needs a positive size");
    AtlasImage img = AtlasImage::blank(AtlasKind::Blend, width, height);
    auto mix = [](std::uint8_t a, std::uint8_t b, double t) {
        return static_cast<std::uint8_t>(std::floor(a + t * (static_cast<double>(b) - a) + 0.5));
    };
    for (int y = 0; y < height; ++y)
    {
        const double t = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
        const std::uint8_t row[4] = {mix(top.r, bottom.r, t), mix(top.g, bottom.g, t), mix(top.b, bottom.b, t),
                                     mix(top.a, bottom.a, t)};
        for (int x = 0; x < width; ++x)
            std::copy(row, row + 4, img.at(x, y));
    }
    return img;
}

std::optional<Iso3> pick_country(UV uv, const AtlasImage& lookup, const GreyMap& greymap)
{
    if (lookup.kind != AtlasKind::Lookup || lookup.channels != 1)
        throw ContractViolation("pick_country needs a lookup image");
    if (!(uv.u >= 0.0 && uv.u <= 1.0 && uv.v >= 0.0 && uv.v <= 1.0))
        throw RangeError("uv (" + std::to_string(uv.u) + ", " + std::to_string(uv.v) + ") out of range");
    const int x = std::min(lookup.width - 1, static_cast<int>(uv.u * lookup.width));
    const int y = std::min(lookup.height - 1, static_cast<int>(uv.v * lookup.height));
    const std::uint8_t level = *lookup.at(x, y);
    if (level == GreyMap::kSea)
        return std::nullopt;
    auto code = greymap.country_at(level);
    if (!code)
        throw AtlasCorruptionError("grey level " + std::to_string(level) + " at (" + std::to_string(x) + ", " +
                                   std::to_string(y) + ") is not in the grey map");
    return code;
}

} // namespace livingglobe
