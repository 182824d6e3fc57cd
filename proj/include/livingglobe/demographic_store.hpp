#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace livingglobe {

/// ISO 3166-1 alpha-3 country code, always three uppercase ASCII letters.
class Iso3
{
public:
    /// Throws SchemaError unless `code` matches ^[A-Z]{3}$.
    explicit Iso3(std::string_view code);

    static bool valid(std::string_view code) noexcept;

    const std::string& str() const noexcept { return code_; }

    auto operator<=>(const Iso3&) const = default;
    bool operator==(const Iso3&) const = default;

private:
    std::string code_;
};

inline std::ostream& operator<<(std::ostream& os, const Iso3& code)
{
    return os << code.str();
}

using CountrySet = std::set<Iso3>;

/// Inclusive span of years covered by a table.
struct YearRange
{
    int first = 0;
    int last = -1;

    bool contains(int year) const noexcept { return year >= first && year <= last; }
    std::size_t size() const noexcept { return last < first ? 0 : static_cast<std::size_t>(last - first + 1); }
    bool operator==(const YearRange&) const = default;
};

struct IndicatorId
{
    std::string key;
    std::string label;
    std::string unit;

    bool operator==(const IndicatorId&) const = default;
};

/// The ten demographic indicators the globe knows how to label.
const std::vector<IndicatorId>& canonical_indicators();

/// Canonical metadata for `key`, or nullopt for keys outside the catalogue.
std::optional<IndicatorId> find_canonical_indicator(std::string_view key);

struct LonLat
{
    double lon = 0.0;
    double lat = 0.0;

    bool operator==(const LonLat&) const = default;
};

/// Open ring: the closing edge from back() to front() is implicit.
using Ring = std::vector<LonLat>;

struct CountryRecord
{
    Iso3 iso3;
    std::string name;
    double lat = 0.0;
    double lon = 0.0;
    std::vector<Ring> rings;

    bool operator==(const CountryRecord&) const = default;
};

/// Indicator x country x year values. Absent cells are missing, never zero.
class IndicatorTable
{
public:
    struct Row
    {
        std::string indicator;
        Iso3 iso3;
        std::string country_name;
        /// One slot per year of the table's range.
        std::vector<std::optional<double>> values;

        bool operator==(const Row&) const = default;
    };

    explicit IndicatorTable(YearRange years);

    const YearRange& years() const noexcept { return years_; }

    /// Throws DatasetError when (indicator, iso3) already has a row.
    void add_row(Row row);

    /// Throws RangeError when `year` is outside the table's range.
    std::optional<double> value(std::string_view indicator, const Iso3& iso3, int year) const;

    const Row* find_row(std::string_view indicator, const Iso3& iso3) const;

    std::span<const Row> rows() const noexcept { return rows_; }

    /// Every row of one indicator, ordered by iso3.
    std::vector<const Row*> rows_of(std::string_view indicator) const;

    std::vector<std::string> indicator_keys() const;
    std::vector<Iso3> countries() const;

    bool empty() const noexcept { return rows_.empty(); }

    bool operator==(const IndicatorTable& other) const
    {
        return years_ == other.years_ && rows_ == other.rows_;
    }

    std::size_t year_index(int year) const;

private:
    YearRange years_;
    std::vector<Row> rows_;
    std::map<std::string, std::map<Iso3, std::size_t>, std::less<>> index_;
};

struct TableSchema
{
    std::string name_column = "country_name";
    std::string code_column = "iso3";
    std::string indicator_column = "indicator";
    /// When set, the header's year columns must cover exactly this range.
    std::optional<YearRange> expected_years;
};

struct ParseReport
{
    std::size_t rows = 0;
    std::size_t stored = 0;
    std::size_t missing = 0;
    /// 1-based line numbers of rows that were skipped.
    std::vector<std::size_t> rejected_rows;
    std::vector<std::string> warnings;
};

struct ParsedTable
{
    IndicatorTable table;
    ParseReport report;
};

/// Parses the indicator CSV (`country_name,iso3,indicator,<year>...`).
/// Malformed headers throw SchemaError, duplicate rows DatasetError; bad
/// cells and rows degrade to warnings in the report.
ParsedTable parse_indicator_table(std::string_view text, const TableSchema& schema = {});

struct GeographyReport
{
    std::vector<std::string> rejected;
    /// iso3 codes present in only one of the two inputs.
    std::vector<std::string> unmatched;
};

struct ParsedGeography
{
    std::vector<CountryRecord> records;
    GeographyReport report;
};

/// Joins `iso3,name,latitude,longitude` rows with the borders JSON
/// (`[{"iso3": ..., "rings": [[[lon, lat], ...], ...]}, ...]`). Records are
/// returned sorted by iso3.
ParsedGeography parse_country_geography(std::string_view locations_csv, std::string_view borders_json);

/// The immutable snapshot every query runs against.
struct Dataset
{
    IndicatorTable table;
    std::vector<CountryRecord> countries;
    std::vector<IndicatorId> indicators;

    const CountryRecord* find_country(const Iso3& iso3) const;
    const IndicatorId* find_indicator(std::string_view key) const;

    bool operator==(const Dataset&) const = default;
};

/// Sorts countries by iso3 and derives the indicator list from the table
/// (canonical ones first, in catalogue order).
Dataset make_dataset(IndicatorTable table, std::vector<CountryRecord> countries);

struct Extent
{
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;

    bool operator==(const Extent&) const = default;
};

struct CarriedValue
{
    double value = 0.0;
    int source_year = 0;

    bool operator==(const CarriedValue&) const = default;
};

std::optional<double> lookup_value(const IndicatorTable& table, std::string_view indicator, const Iso3& iso3, int year);

/// Latest observation at or before `year`, tagged with the year it came from.
std::optional<CarriedValue> value_with_carry(const IndicatorTable& table, std::string_view indicator,
                                             const Iso3& iso3, int year);

/// Min/max over the non-missing values of `indicator` at `year`.
std::optional<Extent> indicator_extent(const IndicatorTable& table, std::string_view indicator, int year);

/// Same, restricted to the countries in `domain`.
std::optional<Extent> indicator_extent(const IndicatorTable& table, std::string_view indicator, int year,
                                       const CountrySet& domain);

} // namespace livingglobe

template <>
struct std::hash<livingglobe::Iso3>
{
    std::size_t operator()(const livingglobe::Iso3& code) const noexcept
    {
        return std::hash<std::string>{}(code.str());
    }
};
