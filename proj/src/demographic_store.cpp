#include "livingglobe/demographic_store.hpp"

#include "csv.hpp"
#include "livingglobe/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace livingglobe {

using detail::CsvReader;
using detail::parse_number;
using detail::trim;

Iso3::Iso3(std::string_view code) : code_(code)
{
    if (!valid(code))
        throw SchemaError("invalid ISO 3166 alpha-3 code '" + std::string(code) + "'");
}

bool Iso3::valid(std::string_view code) noexcept
{
    return code.size() == 3 && std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

const std::vector<IndicatorId>& canonical_indicators()
{
    static const std::vector<IndicatorId> catalogue = {
        {"total_population", "Total population", "people"},
        {"population_density", "Population density", "people per km2"},
        {"population_growth", "Population growth", "% per year"},
        {"crude_birth_rate", "Crude birth rate", "per 1,000 people"},
        {"crude_death_rate", "Crude death rate", "per 1,000 people"},
        {"life_expectancy", "Life expectancy at birth", "years"},
        {"net_migration", "Net migration", "people per 5 years"},
        {"age_0_14", "Population ages 0-14", "% of total"},
        {"age_15_64", "Population ages 15-64", "% of total"},
        {"age_65_plus", "Population ages 65 and above", "% of total"},
    };
    return catalogue;
}

std::optional<IndicatorId> find_canonical_indicator(std::string_view key)
{
    for (const auto& id : canonical_indicators())
        if (id.key == key)
            return id;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// IndicatorTable

IndicatorTable::IndicatorTable(YearRange years) : years_(years)
{
    if (years.last < years.first)
        throw SchemaError("empty year range");
}

std::size_t IndicatorTable::year_index(int year) const
{
    if (!years_.contains(year))
        throw RangeError("year " + std::to_string(year) + " outside " + std::to_string(years_.first) + "-" +
                         std::to_string(years_.last));
    return static_cast<std::size_t>(year - years_.first);
}

void IndicatorTable::add_row(Row row)
{
    if (row.values.size() != years_.size())
        throw ContractViolation("row for " + row.iso3.str() + "/" + row.indicator + " has " +
                                std::to_string(row.values.size()) + " values, expected " +
                                std::to_string(years_.size()));
    auto& by_country = index_[row.indicator];
    if (by_country.contains(row.iso3))
        throw DatasetError("duplicate row for (" + row.indicator + ", " + row.iso3.str() + ")");
    by_country.emplace(row.iso3, rows_.size());
    rows_.push_back(std::move(row));
}

const IndicatorTable::Row* IndicatorTable::find_row(std::string_view indicator, const Iso3& iso3) const
{
    auto it = index_.find(indicator);
    if (it == index_.end())
        return nullptr;
    auto jt = it->second.find(iso3);
    return jt == it->second.end() ? nullptr : &rows_[jt->second];
}

std::optional<double> IndicatorTable::value(std::string_view indicator, const Iso3& iso3, int year) const
{
    const std::size_t i = year_index(year);
    const Row* row = find_row(indicator, iso3);
    return row ? row->values[i] : std::nullopt;
}

std::vector<const IndicatorTable::Row*> IndicatorTable::rows_of(std::string_view indicator) const
{
    std::vector<const Row*> out;
    auto it = index_.find(indicator);
    if (it == index_.end())
        return out;
    out.reserve(it->second.size());
    for (const auto& [code, i] : it->second)
        out.push_back(&rows_[i]);
    return out;
}

std::vector<std::string> IndicatorTable::indicator_keys() const
{
    std::vector<std::string> keys;
    keys.reserve(index_.size());
    for (const auto& [key, rows] : index_)
        keys.push_back(key);
    return keys;
}

std::vector<Iso3> IndicatorTable::countries() const
{
    std::set<Iso3> codes;
    for (const auto& row : rows_)
        codes.insert(row.iso3);
    return {codes.begin(), codes.end()};
}

// ---------------------------------------------------------------------------
// Indicator CSV

namespace {

std::optional<int> parse_year(std::string_view field)
{
    field = trim(field);
    int year = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), year);
    if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
        return std::nullopt;
    return year;
}

} // namespace

ParsedTable parse_indicator_table(std::string_view text, const TableSchema& schema)
{
    CsvReader reader(text);
    auto header = reader.next();
    if (!header)
        throw SchemaError("indicator table has no header row");

    std::optional<std::size_t> name_col, code_col, indicator_col;
    std::vector<std::pair<std::size_t, int>> year_cols;
    for (std::size_t i = 0; i < header->fields.size(); ++i)
    {
        const std::string_view name = trim(header->fields[i]);
        if (name == schema.name_column)
            name_col = i;
        else if (name == schema.code_column)
            code_col = i;
        else if (name == schema.indicator_column)
            indicator_col = i;
        else if (auto year = parse_year(name))
            year_cols.emplace_back(i, *year);
        else
            throw SchemaError("unexpected header column '" + std::string(name) + "'");
    }
    if (!code_col || !indicator_col)
        throw SchemaError("header must name the '" + schema.code_column + "' and '" + schema.indicator_column +
                          "' columns");
    if (year_cols.empty())
        throw SchemaError("header has no year columns");
    for (std::size_t i = 1; i < year_cols.size(); ++i)
        if (year_cols[i].second != year_cols[i - 1].second + 1)
            throw SchemaError("year columns must be consecutive and ascending");

    const YearRange years{year_cols.front().second, year_cols.back().second};
    if (schema.expected_years && *schema.expected_years != years)
        throw SchemaError("header years " + std::to_string(years.first) + "-" + std::to_string(years.last) +
                          " differ from the configured span " + std::to_string(schema.expected_years->first) +
                          "-" + std::to_string(schema.expected_years->last));

    ParsedTable result{IndicatorTable(years), {}};
    auto& report = result.report;
    const std::size_t width = header->fields.size();

    while (auto record = reader.next())
    {
        ++report.rows;
        const auto& f = record->fields;
        const std::string where = "line " + std::to_string(record->line);
        if (f.size() != width)
        {
            report.rejected_rows.push_back(record->line);
            report.warnings.push_back(where + ": expected " + std::to_string(width) + " fields, found " +
                                      std::to_string(f.size()));
            continue;
        }
        const std::string_view code = trim(f[*code_col]);
        const std::string_view indicator = trim(f[*indicator_col]);
        if (!Iso3::valid(code) || indicator.empty())
        {
            report.rejected_rows.push_back(record->line);
            report.warnings.push_back(where + ": invalid country code or indicator");
            continue;
        }

        IndicatorTable::Row row{std::string(indicator), Iso3(code),
                                name_col ? std::string(trim(f[*name_col])) : std::string(), {}};
        row.values.reserve(year_cols.size());
        for (const auto& [col, year] : year_cols)
        {
            const std::string_view cell = trim(f[col]);
            if (cell.empty())
            {
                row.values.emplace_back();
                ++report.missing;
                continue;
            }
            auto number = parse_number(cell);
            if (!number)
            {
                report.warnings.push_back(where + ": non-numeric value '" + std::string(cell) + "' for " +
                                          std::to_string(year) + " stored as missing");
                ++report.missing;
            }
            else
            {
                ++report.stored;
            }
            row.values.push_back(number);
        }
        result.table.add_row(std::move(row));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Geography

namespace {

bool in_bounds(double lat, double lon)
{
    return std::isfinite(lat) && std::isfinite(lon) && lat >= -90.0 && lat <= 90.0 && lon >= -180.0 &&
           lon <= 180.0;
}

std::size_t distinct_vertices(const Ring& ring)
{
    std::vector<std::pair<double, double>> pts;
    pts.reserve(ring.size());
    for (const auto& p : ring)
        pts.emplace_back(p.lon, p.lat);
    std::sort(pts.begin(), pts.end());
    return static_cast<std::size_t>(std::unique(pts.begin(), pts.end()) - pts.begin());
}

} // namespace

ParsedGeography parse_country_geography(std::string_view locations_csv, std::string_view borders_json)
{
    ParsedGeography result;
    auto& report = result.report;

    CsvReader reader(locations_csv);
    auto header = reader.next();
    if (!header || header->fields.size() != 4 || trim(header->fields[0]) != "iso3" ||
        trim(header->fields[1]) != "name" || trim(header->fields[2]) != "latitude" ||
        trim(header->fields[3]) != "longitude")
        throw SchemaError("locations header must be 'iso3,name,latitude,longitude'");

    std::map<Iso3, CountryRecord> records;
    while (auto record = reader.next())
    {
        const auto& f = record->fields;
        const std::string where = "locations line " + std::to_string(record->line);
        if (f.size() != 4 || !Iso3::valid(trim(f[0])))
        {
            report.rejected.push_back(where + ": malformed row");
            continue;
        }
        Iso3 code(trim(f[0]));
        auto lat = parse_number(f[2]);
        auto lon = parse_number(f[3]);
        if (!lat || !lon || !in_bounds(*lat, *lon))
        {
            report.rejected.push_back(where + ": " + code.str() + " coordinate out of range");
            continue;
        }
        if (records.contains(code))
            throw DatasetError("duplicate location row for " + code.str());
        records.emplace(code, CountryRecord{code, std::string(trim(f[1])), *lat, *lon, {}});
    }

    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(borders_json);
    }
    catch (const nlohmann::json::parse_error& e)
    {
        throw SchemaError(std::string("borders file is not valid JSON: ") + e.what());
    }
    if (!doc.is_array())
        throw SchemaError("borders file must be a JSON array");

    std::set<Iso3> bad_geometry;
    std::set<Iso3> with_borders;
    for (std::size_t i = 0; i < doc.size(); ++i)
    {
        const auto& entry = doc[i];
        const std::string where = "borders entry " + std::to_string(i);
        if (!entry.is_object() || !entry.contains("iso3") || !entry["iso3"].is_string() ||
            !entry.contains("rings") || !entry["rings"].is_array())
            throw SchemaError(where + ": expected {\"iso3\": ..., \"rings\": [...]}");
        const std::string code_text = entry["iso3"].get<std::string>();
        if (!Iso3::valid(code_text))
        {
            report.rejected.push_back(where + ": invalid iso3 '" + code_text + "'");
            continue;
        }
        Iso3 code(code_text);
        auto rec = records.find(code);
        if (rec == records.end())
        {
            report.unmatched.push_back(code.str() + ": border without location row");
            continue;
        }

        for (const auto& ring_json : entry["rings"])
        {
            if (!ring_json.is_array())
                throw SchemaError(where + ": ring must be an array of [lon, lat] pairs");
            Ring ring;
            ring.reserve(ring_json.size());
            bool ok = true;
            for (const auto& pt : ring_json)
            {
                if (!pt.is_array() || pt.size() < 2 || !pt[0].is_number() || !pt[1].is_number())
                    throw SchemaError(where + ": vertex must be [lon, lat]");
                const double lon = pt[0].get<double>();
                const double lat = pt[1].get<double>();
                if (!in_bounds(lat, lon))
                    ok = false;
                ring.push_back({lon, lat});
            }
            if (!ok)
            {
                report.rejected.push_back(where + ": " + code.str() + " has a vertex out of range");
                bad_geometry.insert(code);
                break;
            }
            if (ring.size() > 1 && ring.front() == ring.back())
                ring.pop_back();
            if (distinct_vertices(ring) < 3)
            {
                report.rejected.push_back(where + ": " + code.str() + " ring with fewer than 3 vertices");
                continue;
            }
            rec->second.rings.push_back(std::move(ring));
        }
        with_borders.insert(code);
    }

    for (const auto& code : bad_geometry)
        records.erase(code);
    for (auto& [code, rec] : records)
    {
        if (!with_borders.contains(code))
            report.unmatched.push_back(code.str() + ": location without borders");
        result.records.push_back(std::move(rec));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Dataset

const CountryRecord* Dataset::find_country(const Iso3& iso3) const
{
    auto it = std::lower_bound(countries.begin(), countries.end(), iso3,
                               [](const CountryRecord& r, const Iso3& c) { return r.iso3 < c; });
    return it != countries.end() && it->iso3 == iso3 ? &*it : nullptr;
}

const IndicatorId* Dataset::find_indicator(std::string_view key) const
{
    for (const auto& id : indicators)
        if (id.key == key)
            return &id;
    return nullptr;
}

Dataset make_dataset(IndicatorTable table, std::vector<CountryRecord> countries)
{
    std::sort(countries.begin(), countries.end(),
              [](const CountryRecord& a, const CountryRecord& b) { return a.iso3 < b.iso3; });
    for (std::size_t i = 1; i < countries.size(); ++i)
        if (countries[i].iso3 == countries[i - 1].iso3)
            throw DatasetError("duplicate country record " + countries[i].iso3.str());

    const auto keys = table.indicator_keys();
    std::vector<IndicatorId> indicators;
    for (const auto& id : canonical_indicators())
        if (std::find(keys.begin(), keys.end(), id.key) != keys.end())
            indicators.push_back(id);
    for (const auto& key : keys)
        if (!find_canonical_indicator(key))
            indicators.push_back({key, key, ""});

    return Dataset{std::move(table), std::move(countries), std::move(indicators)};
}

// ---------------------------------------------------------------------------
// Queries

std::optional<double> lookup_value(const IndicatorTable& table, std::string_view indicator, const Iso3& iso3,
                                   int year)
{
    return table.value(indicator, iso3, year);
}

std::optional<CarriedValue> value_with_carry(const IndicatorTable& table, std::string_view indicator,
                                             const Iso3& iso3, int year)
{
    const std::size_t last = table.year_index(year);
    const auto* row = table.find_row(indicator, iso3);
    if (!row)
        return std::nullopt;
    for (std::size_t i = last + 1; i-- > 0;)
        if (row->values[i])
            return CarriedValue{*row->values[i], table.years().first + static_cast<int>(i)};
    return std::nullopt;
}

namespace {

template <typename Include>
std::optional<Extent> extent_where(const IndicatorTable& table, std::string_view indicator, int year,
                                   Include&& include)
{
    const std::size_t i = table.year_index(year);
    Extent e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0};
    for (const auto* row : table.rows_of(indicator))
    {
        const auto& v = row->values[i];
        if (!v || !include(row->iso3))
            continue;
        e.min = std::min(e.min, *v);
        e.max = std::max(e.max, *v);
        ++e.count;
    }
    if (e.count == 0)
        return std::nullopt;
    return e;
}

} // namespace

std::optional<Extent> indicator_extent(const IndicatorTable& table, std::string_view indicator, int year)
{
    return extent_where(table, indicator, year, [](const Iso3&) { return true; });
}

std::optional<Extent> indicator_extent(const IndicatorTable& table, std::string_view indicator, int year,
                                       const CountrySet& domain)
{
    return extent_where(table, indicator, year, [&](const Iso3& c) { return domain.contains(c); });
}

} // namespace livingglobe
