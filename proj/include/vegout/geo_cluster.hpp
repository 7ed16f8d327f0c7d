#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vegout/common.hpp"
#include "vegout/ingest.hpp"

namespace vegout::geo {

/// Substation location in raw degrees; clustering treats (lat, lon) as a plane.
struct Point {
    double lat = 0.0;
    double lon = 0.0;
    auto operator<=>(const Point&) const = default;
};

struct ClusterModel {
    int k = 0;
    std::vector<Point> centroids;
    std::vector<int> assignment;  // point index -> cluster index
    /// Sum of squared Euclidean distances to assigned centroids, squared degrees.
    double objective = 0.0;
    int iterations = 0;
};

struct KMeansOptions {
    int restarts = 10;
    int max_iter = 300;
};

/// Squared-error objective for a given assignment and centroids.
double objective(std::span<const Point> points, std::span<const int> assignment, std::span<const Point> centroids);

/// Single Lloyd run from the given initial centroids. When `trace` is non-null
/// the objective after every update step is appended to it.
ClusterModel lloyd(std::span<const Point> points, std::vector<Point> initial, int max_iter,
                   std::vector<double>* trace = nullptr);

/// Best of `restarts` Lloyd runs, each seeded with k distinct points drawn
/// uniformly without replacement and polished by single-point transfers
/// between clusters. Throws std::invalid_argument for an empty
/// point set or k outside [1, distinct points].
ClusterModel kmeans(std::span<const Point> points, int k, std::uint64_t seed, const KMeansOptions& options = {});

struct ElbowCurve {
    std::vector<std::pair<int, double>> curve;  // (k, J)
    int chosen_k = 1;
    std::vector<ClusterModel> models;  // one per scanned k, same order as curve
};

/// Scans k in [k_min, k_max]. The chosen k is the smallest k whose step to k+1
/// improves J by less than `relative_drop_threshold` of J(k); a zero J stops
/// immediately. The range is clipped to the number of distinct points.
ElbowCurve select_k(std::span<const Point> points, int k_min, int k_max, double relative_drop_threshold,
                    std::uint64_t seed, const KMeansOptions& options = {});

/// Great-circle distance in kilometres.
double haversine_km(double lat1, double lon1, double lat2, double lon2) noexcept;

/// Nearest station per substation by great-circle distance; ties go to the
/// lexicographically smallest station_id. Throws std::invalid_argument when
/// either set is empty.
std::vector<std::string> map_stations(std::span<const ingest::SubstationInfo> substations,
                                      std::span<const ingest::StationInfo> stations);

struct AreaMap {
    int area_count = 0;
    std::vector<std::string> substation_ids;      // corpus order
    std::vector<AreaId> area_of;                  // parallel to substation_ids
    std::vector<std::string> station_of;          // nearest station, parallel
    std::vector<std::vector<int>> members;        // area -> substation indices
    std::map<std::string, int> index_of;          // substation id -> index

    [[nodiscard]] AreaId area(const std::string& substation_id) const;
    /// Distinct stations serving an area, sorted.
    [[nodiscard]] std::vector<std::string> stations_in(AreaId a) const;
};

AreaMap build_area_map(std::span<const ingest::SubstationInfo> substations,
                       std::span<const ingest::StationInfo> stations, const ClusterModel& model);

}  // namespace vegout::geo
