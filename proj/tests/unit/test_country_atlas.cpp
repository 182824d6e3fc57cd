#include "livingglobe/country_atlas.hpp"
#include "livingglobe/errors.hpp"
#include "livingglobe/globe_service.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

using namespace livingglobe;
using livingglobe::testing::box;
using livingglobe::testing::box_country;
using livingglobe::testing::reference_dataset;

namespace {

std::vector<CountryRecord> rendered(const Dataset& ds)
{
    std::vector<CountryRecord> out;
    for (const auto& c : ds.countries)
        if (!c.rings.empty())
            out.push_back(c);
    return out;
}

LonLat pixel_centre(int i, int j, int w, int h)
{
    return uv_to_latlon(UV{(i + 0.5) / w, (j + 0.5) / h});
}

std::size_t count_level(const AtlasImage& img, std::uint8_t level)
{
    return static_cast<std::size_t>(std::count(img.pixels.begin(), img.pixels.end(), level));
}

// Lon/lat of pixel centre i (or j) at 512x256; exact in binary.
double col_lon(int i)
{
    return -180.0 + (i + 0.5) * 360.0 / 512;
}
double row_lat(int j)
{
    return 90.0 - (j + 0.5) * 180.0 / 256;
}

} // namespace

// ---------------------------------------------------------------------------
// Projection

TEST(Projection, Examples)
{
    EXPECT_EQ(latlon_to_uv(0, 0), (UV{0.5, 0.5}));
    EXPECT_EQ(latlon_to_uv(90, -180), (UV{0.0, 0.0}));
    EXPECT_EQ(latlon_to_uv(-90, 180), (UV{1.0, 1.0}));
    EXPECT_THROW(latlon_to_uv(90.5, 0), RangeError);
    EXPECT_THROW(latlon_to_uv(0, -180.1), RangeError);
    EXPECT_THROW(latlon_to_uv(NAN, 0), RangeError);
    EXPECT_THROW(uv_to_latlon(UV{1.1, 0}), RangeError);
}

TEST(Projection, RoundTrip)
{
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> lat(-89.999, 89.999), lon(-180, 180);
    for (int i = 0; i < 100000; ++i)
    {
        const double a = lat(rng), o = lon(rng);
        const LonLat p = uv_to_latlon(latlon_to_uv(a, o));
        ASSERT_NEAR(p.lat, a, 1e-9);
        ASSERT_NEAR(p.lon, o, 1e-9);
    }
}

// ---------------------------------------------------------------------------
// point_in_country

TEST(PointInCountry, SquareCountry)
{
    const std::vector<CountryRecord> records = {box_country("SQR", 10, 10, 20, 20)};
    EXPECT_EQ(point_in_country(15, 15, records), Iso3("SQR"));
    EXPECT_EQ(point_in_country(25, 15, records), std::nullopt);
    EXPECT_EQ(point_in_country(15, 9.99, records), std::nullopt);
    EXPECT_THROW(point_in_country(95, 0, records), RangeError);
}

TEST(PointInCountry, HoleRingIsOutside)
{
    CountryRecord c = box_country("HOL", 0, 0, 10, 10);
    c.rings.push_back(box(4, 4, 6, 6));
    const std::vector<CountryRecord> records = {c};
    EXPECT_EQ(point_in_country(5, 5, records), std::nullopt);
    EXPECT_EQ(point_in_country(2, 2, records), Iso3("HOL"));
}

TEST(PointInCountry, AntimeridianRing)
{
    CountryRecord c{Iso3("FJI"), "Fiji", -17, 178, {Ring{{170, -20}, {-170, -20}, {-170, -10}, {170, -10}}}};
    const std::vector<CountryRecord> records = {c};
    EXPECT_EQ(point_in_country(-15, 179, records), Iso3("FJI"));
    EXPECT_EQ(point_in_country(-15, -179, records), Iso3("FJI"));
    EXPECT_EQ(point_in_country(-15, 180, records), Iso3("FJI"));
    EXPECT_EQ(point_in_country(-15, 0, records), std::nullopt);
    EXPECT_EQ(point_in_country(-15, 160, records), std::nullopt);
}

TEST(PointInCountry, PoleWindingRing)
{
    CountryRecord c{Iso3("ATA"), "Antarctica", -80, 0, {Ring{{-120, -60}, {0, -60}, {120, -60}}}};
    const std::vector<CountryRecord> records = {c};
    EXPECT_EQ(point_in_country(-70, 0, records), Iso3("ATA"));
    EXPECT_EQ(point_in_country(-89, 179, records), Iso3("ATA"));
    EXPECT_EQ(point_in_country(-50, 0, records), std::nullopt);
}

TEST(PointInCountry, ReferenceData)
{
    const auto& countries = reference_dataset().countries;
    EXPECT_EQ(point_in_country(38.72, -9.14, countries), Iso3("PRT"));
    EXPECT_EQ(point_in_country(0, 0, countries), std::nullopt);
    EXPECT_EQ(point_in_country(48.85, 2.35, countries), Iso3("FRA"));
    EXPECT_EQ(point_in_country(66, -175, countries), Iso3("RUS"));
    EXPECT_EQ(point_in_country(-85, 0, countries), Iso3("ATA"));
}

// ---------------------------------------------------------------------------
// Grey levels

TEST(AssignGreyLevels, SpacingExamples)
{
    const auto one = assign_grey_levels(std::vector{box_country("PRT", 0, 0, 1, 1)});
    EXPECT_EQ(one.level_of(Iso3("PRT")), 127);

    const auto two = assign_grey_levels(std::vector{box_country("AFG", 0, 0, 1, 1), box_country("ABW", 0, 0, 1, 1)});
    EXPECT_EQ(two.level_of(Iso3("ABW")), 85);
    EXPECT_EQ(two.level_of(Iso3("AFG")), 170);
    EXPECT_EQ(two.country_at(85), Iso3("ABW"));
    EXPECT_EQ(two.country_at(0), std::nullopt);
}

TEST(AssignGreyLevels, CapacityBoundary)
{
    std::vector<CountryRecord> records;
    for (const auto& code : livingglobe::testing::synthetic_codes(255))
        records.push_back(CountryRecord{code, code.str(), 0, 0, {}});
    EXPECT_THROW(assign_grey_levels(records), CapacityError);

    records.pop_back();
    const auto full = assign_grey_levels(records);
    ASSERT_EQ(full.size(), 254u);
    std::uint8_t expected = 1;
    for (const auto& [level, code] : full.levels())
        EXPECT_EQ(level, expected++);
}

TEST(AssignGreyLevels, BijectiveAndDeterministic)
{
    const auto records = rendered(reference_dataset());
    const auto a = assign_grey_levels(records);
    auto shuffled = records;
    std::mt19937_64 rng(41);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(assign_grey_levels(shuffled), a);
    EXPECT_EQ(a.size(), records.size());
    std::set<std::uint8_t> levels;
    for (const auto& r : records)
    {
        const auto l = a.level_of(r.iso3);
        ASSERT_TRUE(l);
        EXPECT_NE(*l, GreyMap::kSea);
        EXPECT_NE(*l, GreyMap::kReserved);
        EXPECT_TRUE(levels.insert(*l).second);
    }
    EXPECT_TRUE(std::is_sorted(a.levels().begin(), a.levels().end(),
                               [](const auto& x, const auto& y) { return x.second < y.second; }));
}

TEST(GreyMap, RejectsReservedAndDuplicates)
{
    EXPECT_THROW(GreyMap({{0, Iso3("AAA")}}), ContractViolation);
    EXPECT_THROW(GreyMap({{255, Iso3("AAA")}}), ContractViolation);
    EXPECT_THROW(GreyMap({{1, Iso3("AAA")}, {2, Iso3("AAA")}}), ContractViolation);
}

// ---------------------------------------------------------------------------
// Lookup rasterization

TEST(RasterizeLookup, HalfPlane)
{
    const std::vector<CountryRecord> records = {
        CountryRecord{Iso3("EST"), "East", 0, 90, {box(0, -90, 180, 90)}}};
    const auto gm = assign_grey_levels(records);
    const auto img = rasterize_lookup(records, gm, 512, 256);
    for (int j = 0; j < 256; ++j)
        for (int i = 0; i < 512; ++i)
            ASSERT_EQ(*img.at(i, j), i < 256 ? 0 : 127) << i << "," << j;
}

TEST(RasterizeLookup, EmptyRecords)
{
    const auto img = rasterize_lookup({}, GreyMap{}, 512, 256);
    EXPECT_EQ(img.kind, AtlasKind::Lookup);
    EXPECT_EQ(img.channels, 1);
    EXPECT_EQ(count_level(img, 0), 512u * 256u);
}

TEST(RasterizeLookup, SizeContract)
{
    EXPECT_THROW(rasterize_lookup({}, GreyMap{}, 1000, 700), ContractViolation);
    EXPECT_THROW(rasterize_lookup({}, GreyMap{}, 256, 128), ContractViolation);
    EXPECT_THROW(check_atlas_size(513, 256), ContractViolation);
    EXPECT_NO_THROW(check_atlas_size(512, 256));
}

TEST(RasterizeLookup, PixelCentreSampling)
{
    // Edges exactly on pixel centres: the western column and southern-most
    // covered row are filled (centre on the edge counts from the west;
    // rows strictly inside the latitude span).
    const std::vector<CountryRecord> records = {
        CountryRecord{Iso3("BOX"), "Box", 0, 0, {box(col_lon(100), row_lat(60), col_lon(110), row_lat(50))}}};
    const auto gm = assign_grey_levels(records);
    const auto img = rasterize_lookup(records, gm, 512, 256);
    std::size_t filled = 0;
    for (int j = 0; j < 256; ++j)
        for (int i = 0; i < 512; ++i)
            if (*img.at(i, j))
            {
                ++filled;
                EXPECT_TRUE(i >= 100 && i < 110 && j >= 50 && j <= 60) << i << "," << j;
            }
    EXPECT_GE(filled, 100u);
    EXPECT_LE(filled, 110u);
}

TEST(RasterizeLookup, OverlapFirstIsoWinsAndIsLogged)
{
    const std::vector<CountryRecord> records = {box_country("BBB", 0, 0, 20, 20), box_country("AAA", 10, 10, 30, 30)};
    const auto gm = assign_grey_levels(records);
    RasterLog log;
    const auto img = rasterize_lookup(records, gm, 512, 256, &log);
    const auto uv = latlon_to_uv(15, 15);
    EXPECT_EQ(pick_country(uv, img, gm), Iso3("AAA"));
    ASSERT_EQ(log.conflicts.size(), 1u);
    EXPECT_EQ(log.conflicts[0].rfind("AAA/BBB: ", 0), 0u);
}

TEST(RasterizeLookup, TinyIslandIsStampedAtItsCentroid)
{
    const std::vector<CountryRecord> records = {
        CountryRecord{Iso3("TNY"), "Tiny", 10.01, 20.01, {box(20.0, 10.0, 20.02, 10.02)}},
        box_country("BIG", -50, -50, -10, -10)};
    const auto gm = assign_grey_levels(records);
    RasterLog log;
    const auto img = rasterize_lookup(records, gm, 512, 256, &log);
    EXPECT_EQ(log.stamped, (std::vector<Iso3>{Iso3("TNY")}));
    EXPECT_EQ(count_level(img, *gm.level_of(Iso3("TNY"))), 1u);
    EXPECT_EQ(pick_country(latlon_to_uv(10.01, 20.01), img, gm), Iso3("TNY"));
}

TEST(RasterizeLookup, AntimeridianCountryFillsBothEdges)
{
    const std::vector<CountryRecord> records = {
        CountryRecord{Iso3("FJI"), "Fiji", -15, 178, {Ring{{170, -20}, {-170, -20}, {-170, -10}, {170, -10}}}}};
    const auto gm = assign_grey_levels(records);
    const auto img = rasterize_lookup(records, gm, 512, 256);
    EXPECT_EQ(pick_country(latlon_to_uv(-15, 179), img, gm), Iso3("FJI"));
    EXPECT_EQ(pick_country(latlon_to_uv(-15, -179), img, gm), Iso3("FJI"));
    EXPECT_EQ(pick_country(latlon_to_uv(-15, 0), img, gm), std::nullopt);
    // 20 degrees of longitude by 10 of latitude.
    const std::size_t expected = static_cast<std::size_t>(20.0 / 360 * 512) * static_cast<std::size_t>(10.0 / 180 * 256);
    EXPECT_NEAR(static_cast<double>(count_level(img, 127)), static_cast<double>(expected), 40.0);
}

TEST(RasterizeLookup, ReferenceAtlasProperties)
{
    const auto records = rendered(reference_dataset());
    const auto gm = assign_grey_levels(records);
    RasterLog log;
    const auto img = rasterize_lookup(records, gm, 2048, 1024, &log);

    std::array<std::size_t, 256> hist{};
    for (auto px : img.pixels)
        ++hist[px];
    std::size_t bins = 0;
    for (int level = 1; level < 256; ++level)
        if (hist[level])
        {
            ++bins;
            EXPECT_TRUE(gm.country_at(static_cast<std::uint8_t>(level))) << level;
        }
    EXPECT_EQ(bins, records.size());

    EXPECT_EQ(rasterize_lookup(records, gm, 2048, 1024), img);

    // Interior probes at least 2 px from any frontier.
    std::mt19937_64 rng(43);
    std::uniform_int_distribution<int> x(2, 2045), y(2, 1021);
    int probes = 0, agree = 0;
    while (probes < 50)
    {
        const int i = x(rng), j = y(rng);
        const LonLat c = pixel_centre(i, j, 2048, 1024);
        const auto truth = point_in_country(c.lat, c.lon, records);
        if (!truth)
            continue;
        bool interior = true;
        for (int dj = -2; dj <= 2 && interior; ++dj)
            for (int di = -2; di <= 2 && interior; ++di)
            {
                const LonLat n = pixel_centre(i + di, j + dj, 2048, 1024);
                interior = point_in_country(n.lat, n.lon, records) == truth;
            }
        if (!interior)
            continue;
        ++probes;
        agree += pick_country(latlon_to_uv(c.lat, c.lon), img, gm) == truth ? 1 : 0;
    }
    EXPECT_EQ(agree, probes);
}

TEST(PickCountry, LisbonFallsOnAnEstuaryPixel)
{
    // The pixel nearest to Lisbon at 2048x1024 has its centre in the Tagus
    // estuary, which is water in the border data; picking follows the pixel.
    const auto records = rendered(reference_dataset());
    const auto gm = assign_grey_levels(records);
    const auto img = rasterize_lookup(records, gm, 2048, 1024);
    const UV lisbon = latlon_to_uv(38.72, -9.14);
    const int i = static_cast<int>(lisbon.u * 2048), j = static_cast<int>(lisbon.v * 1024);
    const LonLat centre = pixel_centre(i, j, 2048, 1024);
    EXPECT_EQ(point_in_country(centre.lat, centre.lon, records), std::nullopt);
    EXPECT_EQ(pick_country(lisbon, img, gm), std::nullopt);

    // One pixel west is Lisbon itself.
    const LonLat west = pixel_centre(i - 1, j, 2048, 1024);
    EXPECT_EQ(point_in_country(west.lat, west.lon, records), Iso3("PRT"));
    EXPECT_EQ(pick_country(latlon_to_uv(west.lat, west.lon), img, gm), Iso3("PRT"));
}

// ---------------------------------------------------------------------------
// pick_country

TEST(PickCountry, SeaCentroidAndCorruption)
{
    const std::vector<CountryRecord> records = {box_country("SQR", 10, 10, 20, 20)};
    const auto gm = assign_grey_levels(records);
    auto img = rasterize_lookup(records, gm, 512, 256);
    EXPECT_EQ(pick_country(latlon_to_uv(-40, -40), img, gm), std::nullopt);
    EXPECT_EQ(pick_country(latlon_to_uv(15, 15), img, gm), Iso3("SQR"));
    EXPECT_EQ(pick_country(UV{1.0, 1.0}, img, gm), std::nullopt) << "edge clamps to the last pixel";

    *img.at(0, 0) = 200;
    EXPECT_THROW(pick_country(UV{0, 0}, img, gm), AtlasCorruptionError);
    EXPECT_THROW(pick_country(UV{0.5, 0.5}, make_blend(512, 256), gm), ContractViolation);
    EXPECT_THROW(pick_country(UV{-0.1, 0.5}, img, gm), RangeError);
}

// ---------------------------------------------------------------------------
// Outline

TEST(RasterizeOutline, EmptyIsTransparent)
{
    const auto img = rasterize_outline({}, 512, 256, 2);
    EXPECT_EQ(img.channels, 4);
    EXPECT_TRUE(std::all_of(img.pixels.begin(), img.pixels.end(), [](std::uint8_t b) { return b == 0; }));
    EXPECT_THROW(rasterize_outline({}, 512, 256, 0), ContractViolation);
}

TEST(RasterizeOutline, SquareGivesRectangleOfStroke)
{
    const std::vector<CountryRecord> records = {
        CountryRecord{Iso3("BOX"), "Box", 0, 0, {box(col_lon(100), row_lat(60), col_lon(140), row_lat(40))}}};
    for (int stroke : {1, 2, 3})
    {
        const auto img = rasterize_outline(records, 512, 256, stroke, Rgba{1, 2, 3, 255});
        const int lo = -(stroke - 1) / 2;
        const int hi = lo + stroke - 1;
        for (int j = 0; j < 256; ++j)
            for (int i = 0; i < 512; ++i)
            {
                const bool near_v = (i >= 100 + lo && i <= 100 + hi) || (i >= 140 + lo && i <= 140 + hi);
                const bool near_h = (j >= 40 + lo && j <= 40 + hi) || (j >= 60 + lo && j <= 60 + hi);
                const bool in_x = i >= 100 + lo && i <= 140 + hi;
                const bool in_y = j >= 40 + lo && j <= 60 + hi;
                const bool expected = (near_v && in_y) || (near_h && in_x);
                const std::uint8_t* px = img.at(i, j);
                ASSERT_EQ(px[3] != 0, expected) << "stroke " << stroke << " at " << i << "," << j;
                if (expected)
                    ASSERT_EQ((Rgba{px[0], px[1], px[2], px[3]}), (Rgba{1, 2, 3, 255}));
            }
    }
}

TEST(RasterizeOutline, ReferencePixelCountMatchesLengthEstimate)
{
    // Independent estimate: total length of the distinct frontier segments
    // at 2048x1024, simplified to half a pixel, times the stroke.
    constexpr double kEstimate = 2 * 73509.37726713458;
    const auto img = rasterize_outline(rendered(reference_dataset()), 2048, 1024, 2);
    std::size_t n = 0;
    for (std::size_t k = 3; k < img.pixels.size(); k += 4)
        n += img.pixels[k] ? 1 : 0;
    EXPECT_GT(static_cast<double>(n), 0.8 * kEstimate);
    EXPECT_LT(static_cast<double>(n), 1.2 * kEstimate);
}

// ---------------------------------------------------------------------------
// Blend

TEST(MakeBlend, EndRowsAreTheConfiguredColours)
{
    const auto img = make_blend(512, 256);
    for (int i = 0; i < 512; i += 37)
    {
        const auto* top = img.at(i, 0);
        const auto* bottom = img.at(i, 255);
        EXPECT_EQ((Rgba{top[0], top[1], top[2], top[3]}), kDefaultBlendTop);
        EXPECT_EQ((Rgba{bottom[0], bottom[1], bottom[2], bottom[3]}), kDefaultBlendBottom);
    }
    EXPECT_EQ(kDefaultBlendTop, (Rgba{8, 32, 72, 255}));
    EXPECT_EQ(kDefaultBlendBottom, (Rgba{64, 128, 176, 255}));
}

TEST(MakeBlend, TwoRows)
{
    const Rgba a{0, 0, 0, 255}, b{255, 255, 255, 255};
    const auto img = make_blend(1, 2, a, b);
    EXPECT_EQ((Rgba{img.at(0, 0)[0], img.at(0, 0)[1], img.at(0, 0)[2], img.at(0, 0)[3]}), a);
    EXPECT_EQ((Rgba{img.at(0, 1)[0], img.at(0, 1)[1], img.at(0, 1)[2], img.at(0, 1)[3]}), b);
    EXPECT_THROW(make_blend(0, 2), ContractViolation);
}

TEST(MakeBlend, MonotoneRows)
{
    const auto img = make_blend(4, 300);
    for (int j = 1; j < 300; ++j)
        for (int c = 0; c < 3; ++c)
            ASSERT_GE(img.at(0, j)[c], img.at(0, j - 1)[c]);
}

// ---------------------------------------------------------------------------
// PNG

TEST(Png, RoundTripAndDeterminism)
{
    const std::vector<CountryRecord> records = {box_country("SQR", 10, 10, 20, 20)};
    const auto gm = assign_grey_levels(records);
    const auto lookup = rasterize_lookup(records, gm, 512, 256);
    const auto outline = rasterize_outline(records, 512, 256, 2);

    const auto bytes = encode_png(lookup);
    EXPECT_EQ(encode_png(lookup), bytes);
    EXPECT_EQ(decode_png(bytes, AtlasKind::Lookup), lookup);
    EXPECT_EQ(decode_png(encode_png(outline), AtlasKind::Outline), outline);
    EXPECT_THROW(decode_png(bytes, AtlasKind::Blend), IoError);

    const std::vector<std::uint8_t> junk = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    EXPECT_THROW(decode_png(junk, AtlasKind::Lookup), IoError);
    auto truncated = bytes;
    truncated.resize(bytes.size() / 2);
    EXPECT_THROW(decode_png(truncated, AtlasKind::Lookup), IoError);
}
