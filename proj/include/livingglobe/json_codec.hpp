#pragma once

#include "livingglobe/country_atlas.hpp"
#include "livingglobe/demographic_store.hpp"
#include "livingglobe/explore_query.hpp"
#include "livingglobe/visual_mapping.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace livingglobe {

using Json = nlohmann::json;

// Wire formats shared by the dataset bundle, the HTTP API and the CLI.
// Missing values are JSON null, colours are "#rrggbb", channels are keyed by
// channel_name(). Decoders throw SchemaError on malformed input and
// ConfigError on unknown indicators or colour scales.

inline constexpr std::string_view kBundleFormat = "livingglobe-bundle";
inline constexpr int kBundleVersion = 1;

Json dataset_to_json(const Dataset& dataset);
Dataset dataset_from_json(const Json& j);

/// Serialized text of a bundle; equal datasets give equal bytes.
std::string dump_bundle(const Dataset& dataset);
Dataset parse_bundle(std::string_view text);

Json indicators_to_json(const std::vector<IndicatorId>& indicators);

/// iso3, name and centroid per country (no rings).
Json countries_to_json(const std::vector<CountryRecord>& countries);

/// {"height": ..., "bar_color": ..., "country_color": ..., "country_scale": id, "bar_scale": id}
Json mapping_to_json(const MappingConfig& config);
/// Absent keys keep their default_mapping() value.
MappingConfig mapping_from_json(const Json& j);

/// {"height": [lo, hi] | null, "bar_color": ..., "country_color": ...}
Json filters_to_json(const FilterState& filters);
/// Absent channels are inactive. The result is sticky.
FilterState filters_from_json(const Json& j);

/// {"year", "config", "filters", "sticky", "selected": iso3 | null}.
/// Decoding defaults a missing config, sticky flag or selection.
Json state_to_json(const ExploreState& state);
ExploreState state_from_json(const Json& j);

Json extent_to_json(const std::optional<Extent>& extent);
std::optional<Extent> extent_from_json(const Json& j);

Json frame_to_json(const VisualFrame& frame);
VisualFrame frame_from_json(const Json& j);

/// Frame of `state` plus the echoed config and filters and, when a country
/// is selected, its detail under "selected". Shared by /api/frame and
/// export-frame.
Json frame_document(const Dataset& dataset, const ExploreState& state);

Json detail_to_json(const CountryDetail& detail);
CountryDetail detail_from_json(const Json& j);

Json suggestions_to_json(const std::vector<Suggestion>& suggestions);
std::vector<Suggestion> suggestions_from_json(const Json& j);

/// {"127": "PRT", ...}
Json greymap_to_json(const GreyMap& greymap);
GreyMap greymap_from_json(const Json& j);

/// Parses JSON text, mapping syntax errors to SchemaError.
Json parse_json(std::string_view text, std::string_view what);

} // namespace livingglobe
