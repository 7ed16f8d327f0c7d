#include "vegout/report.hpp"

#include <algorithm>
#include <stdexcept>

#include "vegout/ingest.hpp"

namespace vegout::report {

namespace {

double cross(const LonLat& o, const LonLat& a, const LonLat& b) noexcept {
    return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

}  // namespace

std::vector<LonLat> convex_hull(std::vector<LonLat> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() < 3) return points;
    std::vector<LonLat> hull(2 * points.size());
    std::size_t k = 0;
    for (const auto& p : points) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);
    return hull;
}

std::vector<double> quartile_thresholds(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("quartiles of an empty set");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return {ingest::quantile_type7(sorted, 0.25), ingest::quantile_type7(sorted, 0.5),
            ingest::quantile_type7(sorted, 0.75)};
}

int risk_level(double value, std::span<const double> thresholds) noexcept {
    int level = 1;
    for (double t : thresholds)
        if (value > t) ++level;
    return level;
}

std::string_view level_name(int level) noexcept {
    switch (level) {
        case 1: return "low";
        case 2: return "moderate";
        case 3: return "high";
        case 4: return "critical";
        default: return "level";
    }
}

RiskReport build_risk_report(YearMonth month, std::vector<RiskEntry> entries, std::vector<double> thresholds) {
    if (entries.empty()) throw std::invalid_argument("risk report needs at least one area");
    if (!std::is_sorted(thresholds.begin(), thresholds.end()))
        throw std::invalid_argument("risk thresholds must be ascending");
    if (thresholds.empty()) {
        std::vector<double> v;
        for (const auto& e : entries) v.push_back(e.toci_hat);
        thresholds = quartile_thresholds(v);
    }
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.area < b.area; });
    for (auto& e : entries) e.level = risk_level(e.toci_hat, thresholds);
    return {month, std::move(thresholds), std::move(entries)};
}

nlohmann::json to_geojson(const RiskReport& report) {
    using nlohmann::json;
    json features = json::array();
    for (const auto& e : report.entries) {
        const auto hull = convex_hull(e.substations);
        json geometry;
        if (hull.size() >= 3) {
            json ring = json::array();
            for (const auto& p : hull) ring.push_back({p.lon, p.lat});
            ring.push_back({hull.front().lon, hull.front().lat});
            geometry = {{"type", "Polygon"}, {"coordinates", json::array({ring})}};
        } else {
            geometry = {{"type", "Point"}, {"coordinates", {e.centroid.lon, e.centroid.lat}}};
        }
        features.push_back({{"type", "Feature"},
                            {"geometry", geometry},
                            {"properties",
                             {{"area", e.area},
                              {"toci_hat", e.toci_hat},
                              {"category", e.level},
                              {"category_name", level_name(e.level)},
                              {"centroid", {e.centroid.lon, e.centroid.lat}}}}});
    }
    return {{"type", "FeatureCollection"},
            {"properties", {{"month", report.month.str()}, {"thresholds", report.thresholds}}},
            {"features", features}};
}

}  // namespace vegout::report
