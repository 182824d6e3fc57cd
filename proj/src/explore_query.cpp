#include "livingglobe/explore_query.hpp"

#include "livingglobe/errors.hpp"

#include <algorithm>
#include <cmath>

namespace livingglobe {

std::string_view channel_name(Channel c) noexcept
{
    switch (c)
    {
    case Channel::Height:
        return "height";
    case Channel::BarColor:
        return "bar_color";
    case Channel::CountryColor:
        break;
    }
    return "country_color";
}

std::optional<Channel> parse_channel(std::string_view name) noexcept
{
    for (Channel c : kChannels)
        if (channel_name(c) == name)
            return c;
    return std::nullopt;
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (std::isnan(lo) || std::isnan(hi) || lo > hi)
        throw ContractViolation("filter interval needs lo <= hi, got [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
}

ExploreState initial_state(const Dataset& dataset)
{
    return ExploreState{dataset.table.years().last, default_mapping(), FilterState{}, std::nullopt};
}

std::optional<Extent> effective_extent(const IndicatorTable& table, std::string_view indicator, int year,
                                       const std::optional<Interval>& filter)
{
    if (!filter)
        return indicator_extent(table, indicator, year);

    const std::size_t yi = table.year_index(year);
    CountrySet survivors;
    for (const auto* row : table.rows_of(indicator))
        if (row->values[yi] && filter->contains(*row->values[yi]))
            survivors.insert(row->iso3);
    return indicator_extent(table, indicator, year, survivors);
}

CountrySet visible_countries(const Dataset& dataset, const MappingConfig& config, int year,
                             const FilterState& filters)
{
    const std::size_t yi = dataset.table.year_index(year);

    CountrySet candidates;
    for (Channel c : kChannels)
        for (const auto* row : dataset.table.rows_of(config.variable(c)))
            if (row->values[yi])
                candidates.insert(row->iso3);

    CountrySet visible;
    for (const auto& code : candidates)
    {
        bool ok = true;
        for (Channel c : kChannels)
        {
            const auto& filter = filters.interval(c);
            if (!filter)
                continue;
            const auto* row = dataset.table.find_row(config.variable(c), code);
            if (!row || !row->values[yi] || !filter->contains(*row->values[yi]))
            {
                ok = false;
                break;
            }
        }
        if (ok)
            visible.insert(code);
    }
    return visible;
}

ExploreState set_year(const ExploreState& state, int year, const Dataset& dataset)
{
    if (!dataset.table.years().contains(year))
        throw RangeError("year " + std::to_string(year) + " outside the dataset range " +
                         std::to_string(dataset.table.years().first) + "-" +
                         std::to_string(dataset.table.years().last));
    ExploreState next = state;
    next.year = year;
    if (!state.filters.sticky && year != state.year)
        next.filters.intervals = {};
    return next;
}

namespace {

char fold(char c) noexcept
{
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool starts_with_folded(std::string_view text, std::string_view prefix) noexcept
{
    if (prefix.size() > text.size())
        return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (fold(text[i]) != fold(prefix[i]))
            return false;
    return true;
}

} // namespace

std::vector<Suggestion> suggest_countries(std::string_view prefix, std::span<const CountryRecord> records)
{
    std::vector<Suggestion> out;
    if (prefix.empty())
        return out;
    for (const auto& r : records)
        if (starts_with_folded(r.name, prefix) || starts_with_folded(r.iso3.str(), prefix))
            out.push_back({r.iso3, r.name});
    std::sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
        return a.name != b.name ? a.name < b.name : a.iso3 < b.iso3;
    });
    if (out.size() > kMaxSuggestions)
        out.erase(out.begin() + kMaxSuggestions, out.end());
    return out;
}

CountryDetail country_detail(const Dataset& dataset, const Iso3& iso3, int year)
{
    dataset.table.year_index(year);

    std::string name;
    if (const auto* record = dataset.find_country(iso3))
    {
        name = record->name;
    }
    else
    {
        bool found = false;
        for (const auto& id : dataset.indicators)
            if (const auto* row = dataset.table.find_row(id.key, iso3))
            {
                name = row->country_name;
                found = true;
                break;
            }
        if (!found)
            throw NotFoundError("unknown country " + iso3.str());
    }

    CountryDetail detail{iso3, std::move(name), year, {}};
    for (const auto& id : dataset.indicators)
    {
        DetailValue dv{id.key, std::nullopt, std::nullopt, false};
        if (auto carried = value_with_carry(dataset.table, id.key, iso3, year))
        {
            dv.value = carried->value;
            dv.source_year = carried->source_year;
            dv.carried = carried->source_year != year;
        }
        detail.values.push_back(std::move(dv));
    }
    return detail;
}

std::pair<ExploreState, CountryDetail> select_country(const ExploreState& state, const Iso3& iso3,
                                                      const Dataset& dataset)
{
    CountryDetail detail = country_detail(dataset, iso3, state.year);
    ExploreState next = state;
    next.selected = iso3;
    return {std::move(next), std::move(detail)};
}

} // namespace livingglobe
