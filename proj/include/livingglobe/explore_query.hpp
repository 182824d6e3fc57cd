#pragma once

#include "livingglobe/demographic_store.hpp"
#include "livingglobe/filter_state.hpp"
#include "livingglobe/visual_mapping.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace livingglobe {

inline constexpr std::size_t kMaxSuggestions = 10;

struct ExploreState
{
    int year = 0;
    MappingConfig config;
    FilterState filters;
    std::optional<Iso3> selected;

    bool operator==(const ExploreState&) const = default;
};

/// Latest year, default mapping, no filters (sticky), nothing selected.
ExploreState initial_state(const Dataset& dataset);

struct Suggestion
{
    Iso3 iso3;
    std::string name;

    bool operator==(const Suggestion&) const = default;
};

struct DetailValue
{
    std::string indicator;
    std::optional<double> value;
    /// Year the value was observed in; differs from the requested year when
    /// the value is carried forward.
    std::optional<int> source_year;
    bool carried = false;

    bool operator==(const DetailValue&) const = default;
};

struct CountryDetail
{
    Iso3 iso3;
    std::string name;
    int year = 0;
    std::vector<DetailValue> values;

    bool operator==(const CountryDetail&) const = default;
};

/// Extent of `indicator` at `year` over the countries whose value lies in
/// `filter`, or over all countries without one.
std::optional<Extent> effective_extent(const IndicatorTable& table, std::string_view indicator, int year,
                                       const std::optional<Interval>& filter);

/// Countries that have a value for at least one mapped variable at `year`
/// and, for every channel with an active filter, a value inside it.
CountrySet visible_countries(const Dataset& dataset, const MappingConfig& config, int year,
                             const FilterState& filters);

/// Moves to `year`. Sticky filters carry over; otherwise they reset.
/// Throws RangeError for a year outside the dataset.
ExploreState set_year(const ExploreState& state, int year, const Dataset& dataset);

/// Case-insensitive prefix match on name or iso3, sorted by name, at most
/// kMaxSuggestions entries. An empty prefix yields nothing.
std::vector<Suggestion> suggest_countries(std::string_view prefix, std::span<const CountryRecord> records);

/// Every indicator of `iso3` at `year`, carried forward where the year has
/// no observation. Throws NotFoundError for an unknown country.
CountryDetail country_detail(const Dataset& dataset, const Iso3& iso3, int year);

std::pair<ExploreState, CountryDetail> select_country(const ExploreState& state, const Iso3& iso3,
                                                      const Dataset& dataset);

} // namespace livingglobe
