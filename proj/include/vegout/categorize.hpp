#pragma once

#include <cstddef>
#include <vector>

#include "vegout/geo_cluster.hpp"
#include "vegout/ingest.hpp"

namespace vegout::categorize {

enum class Category : std::uint8_t { growth, weather };

std::string_view category_name(Category c) noexcept;

struct CategorizedOutage {
    ingest::OutageRecord record;
    AreaId area = 0;
    Category category = Category::growth;
    bool uncovered = false;  // no weather data anywhere in the area during the window
};

struct Options {
    double gust_threshold_mph = 8.0;  // strict: a gust event needs gust > threshold
    int lookback_hours = 3;
};

struct Result {
    std::vector<CategorizedOutage> outages;  // vegetation outages only, corpus order
    std::size_t growth = 0;
    std::size_t weather = 0;
    std::size_t uncovered = 0;
};

/// Hourly weather-event predicate shared by categorization and the indices.
inline bool gust_event(double gust_mph, double threshold) noexcept { return gust_mph > threshold; }

/// Hourly event and coverage flags for one area: an hour is an event when any
/// station serving the area reports a gust above threshold or a storm.
struct AreaEventSeries {
    std::vector<std::uint8_t> event;
    std::vector<std::uint8_t> covered;
};

AreaEventSeries area_events(const ingest::WeatherGrid& grid, const geo::AreaMap& areas, AreaId area,
                            double gust_threshold_mph);

/// An outage at hour t is weather-related iff an event occurs in the area
/// during [t - lookback, t]; otherwise growth-related. Outages with no weather
/// coverage in the window default to growth and are logged.
Result categorize_outages(const ingest::Corpus& corpus, const geo::AreaMap& areas, const Options& options);

}  // namespace vegout::categorize
