#include "livingglobe/errors.hpp"
#include "livingglobe/explore_query.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <random>

using namespace livingglobe;
using livingglobe::testing::fixture_dataset;
using livingglobe::testing::random_table;
using livingglobe::testing::reference_dataset;

namespace {

IndicatorTable column(const std::vector<std::optional<double>>& values)
{
    IndicatorTable t({2000, 2000});
    const auto codes = livingglobe::testing::synthetic_codes(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        t.add_row({"x", codes[i], codes[i].str(), {values[i]}});
    return t;
}

/// Set comprehension over the raw table, written independently of
/// visible_countries.
CountrySet brute_force_visible(const Dataset& ds, const MappingConfig& config, int year, const FilterState& f)
{
    CountrySet out;
    for (const auto& code : ds.table.countries())
    {
        bool any = false;
        bool ok = true;
        for (Channel c : kChannels)
        {
            const auto v = ds.table.value(config.variable(c), code, year);
            any = any || v.has_value();
            if (const auto& i = f.interval(c))
                ok = ok && v && *v >= i->lo() && *v <= i->hi();
        }
        if (any && ok)
            out.insert(code);
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Interval and FilterState

TEST(Interval, Validation)
{
    EXPECT_NO_THROW(Interval(1, 1));
    EXPECT_THROW(Interval(2, 1), ContractViolation);
    EXPECT_THROW(Interval(NAN, 1), ContractViolation);
    EXPECT_THROW(Interval(0, NAN), ContractViolation);
    const Interval i(0, 10);
    EXPECT_TRUE(i.contains(0.0));
    EXPECT_TRUE(i.contains(10.0));
    EXPECT_FALSE(i.contains(10.000001));
    EXPECT_TRUE(i.contains(Interval(2, 3)));
    EXPECT_FALSE(i.contains(Interval(-1, 3)));
}

TEST(FilterState, DefaultsToStickyAndInactive)
{
    FilterState f;
    EXPECT_TRUE(f.sticky);
    EXPECT_FALSE(f.any_active());
    f.set(Channel::BarColor, Interval(0, 1));
    EXPECT_TRUE(f.any_active());
    EXPECT_EQ(f.interval(Channel::BarColor), Interval(0, 1));
}

TEST(Channel, Names)
{
    for (Channel c : kChannels)
        EXPECT_EQ(parse_channel(channel_name(c)), c);
    EXPECT_EQ(channel_name(Channel::BarColor), "bar_color");
    EXPECT_EQ(parse_channel("colour"), std::nullopt);
}

// ---------------------------------------------------------------------------
// effective_extent

TEST(EffectiveExtent, SubsetRule)
{
    const auto t = column({1.0, 2.0, 3.0, 1000.0});
    EXPECT_EQ(effective_extent(t, "x", 2000, Interval(0, 10)), (Extent{1, 3, 3}));
    EXPECT_EQ(effective_extent(t, "x", 2000, std::nullopt), (Extent{1, 1000, 4}));
    EXPECT_EQ(effective_extent(t, "x", 2000, Interval(4, 5)), std::nullopt);
}

TEST(EffectiveExtent, ReferencePopulationBelowChinaAndIndia)
{
    const auto e = effective_extent(reference_dataset().table, "total_population", 2014, Interval(0, 1.2e9));
    ASSERT_TRUE(e);
    EXPECT_EQ(e->max, 321227170.0);
    EXPECT_EQ(e->count, 226u);
}

// ---------------------------------------------------------------------------
// visible_countries

TEST(VisibleCountries, NoFiltersMeansEveryCountryWithData)
{
    const auto& ds = fixture_dataset();
    EXPECT_EQ(visible_countries(ds, default_mapping(), 2002, {}),
              (CountrySet{Iso3("ESP"), Iso3("FRA"), Iso3("PRT")}));
}

TEST(VisibleCountries, PointInterval)
{
    const auto& ds = fixture_dataset();
    FilterState f;
    f.set(Channel::BarColor, Interval(113.2, 113.2));
    EXPECT_EQ(visible_countries(ds, default_mapping(), 2001, f), (CountrySet{Iso3("PRT")}));
}

TEST(VisibleCountries, MissingValueUnderAFilterHides)
{
    const auto& ds = fixture_dataset();
    FilterState f;
    f.set(Channel::CountryColor, Interval(-100, 100));
    EXPECT_EQ(visible_countries(ds, default_mapping(), 2002, f), (CountrySet{Iso3("FRA"), Iso3("PRT")}));
}

TEST(VisibleCountries, ReferencePopulationFilterDropsExactlyChinaAndIndia)
{
    const auto& ds = reference_dataset();
    const auto all = visible_countries(ds, default_mapping(), 2014, {});
    FilterState f;
    f.set(Channel::Height, Interval(0, 1.2e9));
    auto filtered = visible_countries(ds, default_mapping(), 2014, f);
    CountrySet expected = all;
    // Countries without a 2014 population cannot pass a population filter.
    for (auto it = expected.begin(); it != expected.end();)
        it = ds.table.value("total_population", *it, 2014) ? std::next(it) : expected.erase(it);
    expected.erase(Iso3("CHN"));
    expected.erase(Iso3("IND"));
    EXPECT_EQ(filtered, expected);
    EXPECT_EQ(filtered.size(), 226u);
}

TEST(VisibleCountries, MatchesBruteForceAndNarrowingNeverAdds)
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial)
    {
        auto t = random_table(rng, {"total_population", "population_density", "population_growth"}, 30,
                              {2000, 2002}, 0.2);
        const Dataset ds = make_dataset(std::move(t), {});
        const int year = 2000 + trial % 3;
        FilterState f;
        FilterState narrow;
        for (Channel c : kChannels)
        {
            if (u(rng) < 0.4)
                continue;
            const auto e = indicator_extent(ds.table, default_mapping().variable(c), year);
            if (!e)
                continue;
            const double span = e->max - e->min;
            double lo = e->min + u(rng) * span, hi = e->min + u(rng) * span;
            if (lo > hi)
                std::swap(lo, hi);
            f.set(c, Interval(lo, hi));
            const double nlo = lo + u(rng) * (hi - lo);
            narrow.set(c, Interval(nlo, nlo + u(rng) * (hi - nlo)));
        }
        const auto visible = visible_countries(ds, default_mapping(), year, f);
        ASSERT_EQ(visible, brute_force_visible(ds, default_mapping(), year, f));
        const auto narrowed = visible_countries(ds, default_mapping(), year, narrow);
        ASSERT_TRUE(std::includes(visible.begin(), visible.end(), narrowed.begin(), narrowed.end()));
    }
}

TEST(VisibleCountries, FilterOrderDoesNotMatter)
{
    const auto& ds = reference_dataset();
    const std::array<std::pair<Channel, Interval>, 3> filters = {
        std::pair{Channel::Height, Interval(1e6, 1e9)},
        std::pair{Channel::BarColor, Interval(10, 500)},
        std::pair{Channel::CountryColor, Interval(0, 3)},
    };
    std::array<int, 3> order = {0, 1, 2};
    std::optional<CountrySet> first;
    do
    {
        FilterState f;
        for (int i : order)
            f.set(filters[i].first, filters[i].second);
        const auto v = visible_countries(ds, default_mapping(), 1995, f);
        if (first)
            EXPECT_EQ(v, *first);
        else
            first = v;
    } while (std::next_permutation(order.begin(), order.end()));
}

// ---------------------------------------------------------------------------
// set_year

TEST(SetYear, StickyFiltersSurvive)
{
    const auto& ds = reference_dataset();
    ExploreState s = initial_state(ds);
    EXPECT_EQ(s.year, 2014);
    s = set_year(s, 1985, ds);
    s.filters.set(Channel::Height, Interval(0, 5e8));
    s.selected = Iso3("PRT");

    const auto moved = set_year(s, 2014, ds);
    EXPECT_EQ(moved.year, 2014);
    EXPECT_EQ(moved.filters, s.filters);
    EXPECT_EQ(moved.selected, s.selected);

    EXPECT_EQ(set_year(moved, 1985, ds), s);
    EXPECT_EQ(set_year(s, 1985, ds), s);
}

TEST(SetYear, NonStickyFiltersReset)
{
    const auto& ds = reference_dataset();
    ExploreState s = set_year(initial_state(ds), 1985, ds);
    s.filters.sticky = false;
    s.filters.set(Channel::Height, Interval(0, 5e8));
    const auto moved = set_year(s, 2014, ds);
    EXPECT_FALSE(moved.filters.any_active());
    EXPECT_FALSE(moved.filters.sticky);
    EXPECT_EQ(set_year(s, 1985, ds), s) << "same year is a no-op";
}

TEST(SetYear, OutOfRange)
{
    const auto& ds = fixture_dataset();
    EXPECT_THROW(set_year(initial_state(ds), 1999, ds), RangeError);
    EXPECT_THROW(set_year(initial_state(ds), 2003, ds), RangeError);
}

TEST(SetYear, RandomStickyRoundTrips)
{
    const auto& ds = reference_dataset();
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> year(1980, 2014);
    std::uniform_real_distribution<double> u(0, 1e9);
    for (int i = 0; i < 200; ++i)
    {
        ExploreState s = set_year(initial_state(ds), year(rng), ds);
        const double a = u(rng), b = u(rng);
        s.filters.set(Channel::Height, Interval(std::min(a, b), std::max(a, b)));
        EXPECT_EQ(set_year(set_year(s, year(rng), ds), s.year, ds), s);
    }
}

// ---------------------------------------------------------------------------
// suggest_countries

TEST(SuggestCountries, Examples)
{
    const auto& countries = reference_dataset().countries;
    const auto por = suggest_countries("por", countries);
    EXPECT_TRUE(std::any_of(por.begin(), por.end(), [](const Suggestion& s) { return s.iso3 == Iso3("PRT"); }));
    EXPECT_TRUE(suggest_countries("", countries).empty());
    EXPECT_TRUE(suggest_countries("zzzz", countries).empty());
    const auto by_code = suggest_countries("prt", countries);
    ASSERT_FALSE(by_code.empty());
    EXPECT_EQ(by_code.front().iso3, Iso3("PRT"));
}

TEST(SuggestCountries, SortedCappedAndPrefixed)
{
    const auto& countries = reference_dataset().countries;
    for (const char* prefix : {"s", "B", "ma", "Ni", "u", "a", "G", "co"})
    {
        const auto out = suggest_countries(prefix, countries);
        EXPECT_LE(out.size(), kMaxSuggestions);
        EXPECT_TRUE(std::is_sorted(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
            return a.name != b.name ? a.name < b.name : a.iso3 < b.iso3;
        }));
        const std::string p = prefix;
        auto folded_prefix = [&](const std::string& s) {
            if (s.size() < p.size())
                return false;
            for (std::size_t i = 0; i < p.size(); ++i)
                if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(p[i])))
                    return false;
            return true;
        };
        for (const auto& s : out)
            EXPECT_TRUE(folded_prefix(s.name) || folded_prefix(s.iso3.str())) << prefix << " -> " << s.name;
    }
    EXPECT_EQ(suggest_countries("s", countries).size(), kMaxSuggestions);
}

// ---------------------------------------------------------------------------
// select_country / country_detail

TEST(SelectCountry, PortugalIn1985)
{
    const auto& ds = reference_dataset();
    const ExploreState s = set_year(initial_state(ds), 1985, ds);
    const auto [next, detail] = select_country(s, Iso3("PRT"), ds);
    EXPECT_EQ(next.selected, Iso3("PRT"));
    EXPECT_EQ(detail.name, "Portugal");
    EXPECT_EQ(detail.year, 1985);

    const std::map<std::string, double> expected = {
        {"total_population", 9962255},  {"population_density", 108.18}, {"population_growth", 0.073},
        {"crude_birth_rate", 12.363},   {"crude_death_rate", 11.159},    {"life_expectancy", 73.26},
        {"age_0_14", 23.656},           {"age_15_64", 64.184},           {"age_65_plus", 12.16},
    };
    ASSERT_EQ(detail.values.size(), 10u);
    for (const auto& v : detail.values)
    {
        if (v.indicator == "net_migration")
        {
            EXPECT_EQ(v.value, 218678.0);
            EXPECT_EQ(v.source_year, 1982);
            EXPECT_TRUE(v.carried);
            continue;
        }
        EXPECT_EQ(v.value, expected.at(v.indicator)) << v.indicator;
        EXPECT_EQ(v.source_year, 1985);
        EXPECT_FALSE(v.carried);
    }

    const auto [again, detail2] = select_country(next, Iso3("PRT"), ds);
    EXPECT_EQ(again, next);
    EXPECT_EQ(detail2, detail);
}

TEST(SelectCountry, NoDataIsAllMissing)
{
    const auto& ds = reference_dataset();
    // Antarctica has borders but no indicators.
    const auto detail = country_detail(ds, Iso3("ATA"), 2000);
    EXPECT_EQ(detail.name, "Antarctica");
    for (const auto& v : detail.values)
    {
        EXPECT_EQ(v.value, std::nullopt);
        EXPECT_EQ(v.source_year, std::nullopt);
        EXPECT_FALSE(v.carried);
    }
}

TEST(SelectCountry, UnknownCountryIsNotFound)
{
    const auto& ds = fixture_dataset();
    EXPECT_THROW(select_country(initial_state(ds), Iso3("XYZ"), ds), NotFoundError);
    EXPECT_THROW(country_detail(ds, Iso3("PRT"), 1990), RangeError);
}
