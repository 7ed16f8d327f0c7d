#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vegout/categorize.hpp"
#include "vegout/common.hpp"
#include "vegout/geo_cluster.hpp"
#include "vegout/ingest.hpp"

namespace vegout::features {

/// A calendar month optionally restricted to a day range and an hour-of-day
/// range (both inclusive). Day bounds are clipped to the month length.
struct MonthWindow {
    YearMonth month;
    int day_start = 1;
    int day_end = 31;
    int hour_start = 0;
    int hour_end = 23;

    [[nodiscard]] int days() const noexcept;            // D_m
    [[nodiscard]] int hours_per_day() const noexcept;   // H
    [[nodiscard]] bool contains(timeutil::HourIndex h) const noexcept;
    /// Every hour index inside the window, ascending.
    [[nodiscard]] std::vector<timeutil::HourIndex> hours() const;
};

struct MonthlyFeatureRow {
    int year = 0;
    int month = 0;
    AreaId area = 0;
    long gvoci = 0;
    long wvoci = 0;
    double gci = 0.0;
    double gii = 0.0;
    double sci = 0.0;
    double aoi = 0.0;
    double moi = 0.0;
    int substations = 1;    // S_a
    int days = 1;           // D_m
    int hours_per_day = 24; // H

    [[nodiscard]] YearMonth ym() const noexcept { return {year, month}; }
};

/// Growth-related outage count of an area within the window.
long compute_gvoci(const categorize::Result& categorized, const geo::AreaMap& areas, AreaId area,
                   const MonthWindow& window);
/// Weather-related outage count of an area within the window.
long compute_wvoci(const categorize::Result& categorized, const geo::AreaMap& areas, AreaId area,
                   const MonthWindow& window);

struct WeatherIndices {
    double gci = 0.0;  // gust hours per substation
    double gii = 0.0;  // mean gust intensity over all substation-hours, mph
    double sci = 0.0;  // storm hours per substation
};

/// Each substation reads its nearest station. GI counts the gust speed only in
/// hours above the threshold and 0 otherwise, averaged over S_a * D_m * H.
/// Throws DataError when no station of the area has data inside the window.
WeatherIndices compute_weather_indices(const ingest::WeatherGrid& grid, const geo::AreaMap& areas, AreaId area,
                                       const MonthWindow& window, double gust_threshold_mph);

/// Sum of WVOCI over sum of (GCI + SCI) for one area across the given rows.
/// Returns 0 (with a warning) when the area saw no weather events.
double compute_aoi(std::span<const MonthlyFeatureRow> training_rows, AreaId area);
/// Same ratio over all areas and years for one calendar month.
double compute_moi(std::span<const MonthlyFeatureRow> training_rows, int month);

struct Bin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    std::optional<double> mean_target;  // empty bins carry no mean
};

/// Equal-width bins over [min, max] of `values`; the last bin is closed.
/// Throws std::invalid_argument for n_bins < 2, mismatched inputs, or a
/// constant feature.
std::vector<Bin> binned_frequency(std::span<const double> values, std::span<const double> targets, int n_bins = 8);

struct TableOptions {
    double gust_threshold_mph = 8.0;
    int day_start = 1;
    int day_end = 31;
    int hour_start = 0;
    int hour_end = 23;
};

struct FeatureTable {
    std::vector<MonthlyFeatureRow> rows;  // sorted by (year, month, area)
    std::vector<double> aoi;              // per area, frozen on training months
    std::vector<double> moi;              // index 1..12, frozen on training months
};

/// Builds one row per (area, month) for `months`, then fills AOI/MOI from the
/// rows whose month lies in [train_first, train_last].
FeatureTable build_feature_table(const ingest::Corpus& corpus, const geo::AreaMap& areas,
                                 const categorize::Result& categorized, std::span<const YearMonth> months,
                                 YearMonth train_first, YearMonth train_last, const TableOptions& options);

}  // namespace vegout::features
