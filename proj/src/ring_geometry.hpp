#pragma once

#include "livingglobe/demographic_store.hpp"

#include <vector>

namespace livingglobe::detail {

/// A ring with continuous longitudes, plus its bounding box. Longitudes may
/// leave [-180, 180] after unwrapping; callers place shifted copies.
struct PreparedRing
{
    std::vector<LonLat> points;
    double min_lon = 0.0;
    double max_lon = 0.0;
    double min_lat = 0.0;
    double max_lat = 0.0;
};

/// True when some edge (closing edge included) jumps more than 180 degrees
/// of longitude, i.e. the ring crosses the antimeridian.
bool crosses_antimeridian(const Ring& ring) noexcept;

/// Splits `ring` at the antimeridian by unwrapping its longitudes and
/// returning the copies (shifted by multiples of 360) that overlap
/// [-180, 180]. A ring that winds around a pole is closed along that pole.
std::vector<PreparedRing> prepare_ring(const Ring& ring);

/// x coordinate where edge a-b crosses latitude `lat`. The caller has
/// checked (a.lat > lat) != (b.lat > lat).
inline double crossing_lon(const LonLat& a, const LonLat& b, double lat) noexcept
{
    return (b.lon - a.lon) * (lat - a.lat) / (b.lat - a.lat) + a.lon;
}

} // namespace livingglobe::detail
