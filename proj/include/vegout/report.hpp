#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "vegout/common.hpp"

namespace vegout::report {

struct LonLat {
    double lon = 0.0;
    double lat = 0.0;
    auto operator<=>(const LonLat&) const = default;
};

/// Counter-clockwise hull without collinear points, starting at the lowest
/// (lon, lat). Fewer than three distinct non-collinear inputs return the
/// distinct points themselves.
std::vector<LonLat> convex_hull(std::vector<LonLat> points);

/// 25th, 50th and 75th percentiles (linear interpolation).
std::vector<double> quartile_thresholds(std::span<const double> values);

/// Level 1..thresholds.size()+1: one plus the number of thresholds strictly
/// below `value`. Order-preserving by construction.
int risk_level(double value, std::span<const double> thresholds) noexcept;

std::string_view level_name(int level) noexcept;

struct RiskEntry {
    AreaId area = 0;
    double toci_hat = 0.0;
    int level = 1;
    LonLat centroid;
    std::vector<LonLat> substations;
};

struct RiskReport {
    YearMonth month;
    std::vector<double> thresholds;
    std::vector<RiskEntry> entries;  // ascending area
};

/// Categorises every area; `thresholds` empty means quartiles of the
/// predictions. Throws std::invalid_argument for unsorted thresholds.
RiskReport build_risk_report(YearMonth month, std::vector<RiskEntry> entries, std::vector<double> thresholds);

/// FeatureCollection with one Feature per area; polygon hull when the area
/// has at least three non-collinear substations, otherwise a Point at the
/// centroid.
nlohmann::json to_geojson(const RiskReport& report);

}  // namespace vegout::report
