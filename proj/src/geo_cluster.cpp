#include "vegout/geo_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "vegout/random.hpp"

namespace vegout::geo {

namespace {

inline double sq_dist(const Point& a, const Point& b) noexcept {
    const double dl = a.lat - b.lat;
    const double dn = a.lon - b.lon;
    return dl * dl + dn * dn;
}

std::vector<Point> distinct_points(std::span<const Point> points) {
    std::vector<Point> d(points.begin(), points.end());
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
}

int nearest(const Point& p, std::span<const Point> centroids) noexcept {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.size(); ++j) {
        const double d = sq_dist(p, centroids[j]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(j);
        }
    }
    return best;
}

/// Single-point transfers between clusters (Hartigan's rule) until none lowers
/// the objective. Moving x from A to B changes J by
/// n_B/(n_B+1)|x-mu_B|^2 - n_A/(n_A-1)|x-mu_A|^2, so a stable result is also a
/// Lloyd fixed point. Returns the number of moves made.
int transfer_refine(std::span<const Point> points, ClusterModel& m) {
    const std::size_t k = m.centroids.size();
    std::vector<double> count(k, 0.0);
    for (int a : m.assignment) count[static_cast<std::size_t>(a)] += 1.0;
    int moves = 0;
    for (bool improved = true; improved && moves < 100000;) {
        improved = false;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto a = static_cast<std::size_t>(m.assignment[i]);
            if (count[a] < 2.0) continue;
            const double remove_gain = count[a] / (count[a] - 1.0) * sq_dist(points[i], m.centroids[a]);
            std::size_t best = a;
            double best_delta = -1e-12 * std::max(1.0, remove_gain);
            for (std::size_t b = 0; b < k; ++b) {
                if (b == a) continue;
                const double delta = count[b] / (count[b] + 1.0) * sq_dist(points[i], m.centroids[b]) - remove_gain;
                if (delta < best_delta) {
                    best_delta = delta;
                    best = b;
                }
            }
            if (best == a) continue;
            const Point& x = points[i];
            auto& ca = m.centroids[a];
            auto& cb = m.centroids[best];
            ca = {(ca.lat * count[a] - x.lat) / (count[a] - 1.0), (ca.lon * count[a] - x.lon) / (count[a] - 1.0)};
            cb = {(cb.lat * count[best] + x.lat) / (count[best] + 1.0), (cb.lon * count[best] + x.lon) / (count[best] + 1.0)};
            count[a] -= 1.0;
            count[best] += 1.0;
            m.assignment[i] = static_cast<int>(best);
            ++moves;
            improved = true;
        }
    }
    return moves;
}

}  // namespace

double objective(std::span<const Point> points, std::span<const int> assignment, std::span<const Point> centroids) {
    double j = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) j += sq_dist(points[i], centroids[static_cast<std::size_t>(assignment[i])]);
    return j;
}

ClusterModel lloyd(std::span<const Point> points, std::vector<Point> initial, int max_iter, std::vector<double>* trace) {
    const std::size_t n = points.size();
    const std::size_t k = initial.size();
    ClusterModel m;
    m.k = static_cast<int>(k);
    m.centroids = std::move(initial);
    m.assignment.assign(n, -1);

    std::vector<std::size_t> counts(k);
    int it = 0;
    for (; it < max_iter; ++it) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const int c = nearest(points[i], m.centroids);
            if (c != m.assignment[i]) {
                m.assignment[i] = c;
                changed = true;
            }
        }
        if (!changed) break;

        std::fill(counts.begin(), counts.end(), 0);
        for (int a : m.assignment) ++counts[static_cast<std::size_t>(a)];
        // Empty cluster: move the point farthest from its centroid into it.
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] != 0) continue;
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto a = static_cast<std::size_t>(m.assignment[i]);
                if (counts[a] < 2) continue;
                const double d = sq_dist(points[i], m.centroids[a]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far == n) continue;
            --counts[static_cast<std::size_t>(m.assignment[far])];
            m.assignment[far] = static_cast<int>(j);
            counts[j] = 1;
            m.centroids[j] = points[far];
        }

        std::vector<Point> sums(k);
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = sums[static_cast<std::size_t>(m.assignment[i])];
            s.lat += points[i].lat;
            s.lon += points[i].lon;
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] == 0) continue;
            m.centroids[j] = {sums[j].lat / static_cast<double>(counts[j]), sums[j].lon / static_cast<double>(counts[j])};
        }
        if (trace) trace->push_back(objective(points, m.assignment, m.centroids));
    }
    m.iterations = it;
    m.objective = objective(points, m.assignment, m.centroids);
    return m;
}

ClusterModel kmeans(std::span<const Point> points, int k, std::uint64_t seed, const KMeansOptions& options) {
    if (points.empty()) throw std::invalid_argument("kmeans: empty point set");
    if (options.restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
    const std::vector<Point> distinct = distinct_points(points);
    if (k < 1 || static_cast<std::size_t>(k) > distinct.size())
        throw std::invalid_argument(fmt::format("kmeans: k = {} outside [1, {}] distinct points", k, distinct.size()));

    auto converge = [&](std::vector<Point> init) {
        ClusterModel m = lloyd(points, std::move(init), options.max_iter);
        if (transfer_refine(points, m) > 0) {
            // Recompute the centroids exactly and confirm the partition.
            m = lloyd(points, m.centroids, options.max_iter);
        }
        return m;
    };

    ClusterModel best;
    best.objective = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(distinct.size());
    for (int r = 0; r < options.restarts; ++r) {
        std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        // Partial Fisher-Yates: the first k entries are a uniform sample without replacement.
        for (int j = 0; j < k; ++j) {
            std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(j), idx.size() - 1);
            std::swap(idx[static_cast<std::size_t>(j)], idx[pick(rng)]);
        }
        std::vector<Point> init(static_cast<std::size_t>(k));
        for (int j = 0; j < k; ++j) init[static_cast<std::size_t>(j)] = distinct[idx[static_cast<std::size_t>(j)]];
        ClusterModel m = converge(std::move(init));
        if (m.objective < best.objective) best = std::move(m);
    }

    // Jump search on the winner: move one centroid onto a data point and
    // re-converge; keep any improvement. Escapes the local optima that all
    // restarts can share on tiny or awkward point sets.
    const double eps = 1e-12 * std::max(1.0, best.objective);
    for (int round = 0; round < 10; ++round) {
        bool improved = false;
        for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) {
            for (const Point& p : distinct) {
                std::vector<Point> init = best.centroids;
                init[j] = p;
                ClusterModel m = converge(init);
                if (m.objective < best.objective - eps) {
                    best = std::move(m);
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }
    return best;
}

ElbowCurve select_k(std::span<const Point> points, int k_min, int k_max, double relative_drop_threshold,
                    std::uint64_t seed, const KMeansOptions& options) {
    if (points.empty()) throw std::invalid_argument("select_k: empty point set");
    const int distinct = static_cast<int>(distinct_points(points).size());
    k_min = std::max(k_min, 1);
    k_max = std::min(k_max, distinct);
    if (k_min > k_max) throw std::invalid_argument("select_k: empty k range");

    ElbowCurve e;
    for (int k = k_min; k <= k_max; ++k) {
        ClusterModel m = kmeans(points, k, derive_seed(seed, static_cast<std::uint64_t>(1000 + k)), options);
        // Keep the curve non-increasing: a larger k can always match the previous partition
        // by splitting one cluster, so a worse result means the restarts missed it.
        if (!e.models.empty() && m.objective > e.models.back().objective) {
            ClusterModel alt = lloyd(points, [&] {
                auto init = e.models.back().centroids;
                // Split the cluster with the largest spread by adding its farthest member.
                std::size_t far = 0;
                double far_d = -1.0;
                const auto& prev = e.models.back();
                for (std::size_t i = 0; i < points.size(); ++i) {
                    const double d = sq_dist(points[i], prev.centroids[static_cast<std::size_t>(prev.assignment[i])]);
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                init.push_back(points[far]);
                return init;
            }(), options.max_iter);
            if (alt.objective < m.objective) m = std::move(alt);
        }
        e.curve.emplace_back(k, m.objective);
        e.models.push_back(std::move(m));
    }

    e.chosen_k = e.curve.back().first;
    for (std::size_t i = 0; i < e.curve.size(); ++i) {
        const double j = e.curve[i].second;
        if (j <= 0.0) {
            e.chosen_k = e.curve[i].first;
            break;
        }
        if (i + 1 < e.curve.size() && (j - e.curve[i + 1].second) / j < relative_drop_threshold) {
            e.chosen_k = e.curve[i].first;
            break;
        }
    }
    return e;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) noexcept {
    constexpr double kEarthRadiusKm = 6371.0088;
    constexpr double kRad = 3.14159265358979323846 / 180.0;
    const double dlat = (lat2 - lat1) * kRad;
    const double dlon = (lon2 - lon1) * kRad;
    const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(lat1 * kRad) * std::cos(lat2 * kRad) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

std::vector<std::string> map_stations(std::span<const ingest::SubstationInfo> substations,
                                      std::span<const ingest::StationInfo> stations) {
    if (substations.empty()) throw std::invalid_argument("map_stations: no substations");
    if (stations.empty()) throw std::invalid_argument("map_stations: no weather stations");
    std::vector<std::string> out;
    out.reserve(substations.size());
    for (const auto& s : substations) {
        const ingest::StationInfo* best = nullptr;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& st : stations) {
            const double d = haversine_km(s.lat, s.lon, st.lat, st.lon);
            const double tol = 1e-12 * std::max(1.0, best_d);
            if (best == nullptr || d < best_d - tol || (std::abs(d - best_d) <= tol && st.id < best->id)) {
                best = &st;
                best_d = std::min(d, best_d);
            }
        }
        out.push_back(best->id);
    }
    return out;
}

AreaId AreaMap::area(const std::string& substation_id) const {
    const auto it = index_of.find(substation_id);
    if (it == index_of.end()) throw std::out_of_range("substation '" + substation_id + "' not in area map");
    return area_of[static_cast<std::size_t>(it->second)];
}

std::vector<std::string> AreaMap::stations_in(AreaId a) const {
    std::set<std::string> s;
    for (int i : members.at(static_cast<std::size_t>(a))) s.insert(station_of[static_cast<std::size_t>(i)]);
    return {s.begin(), s.end()};
}

AreaMap build_area_map(std::span<const ingest::SubstationInfo> substations,
                       std::span<const ingest::StationInfo> stations, const ClusterModel& model) {
    if (model.assignment.size() != substations.size())
        throw std::invalid_argument("build_area_map: assignment size does not match substations");
    AreaMap m;
    m.area_count = model.k;
    m.station_of = map_stations(substations, stations);
    m.members.resize(static_cast<std::size_t>(model.k));
    for (std::size_t i = 0; i < substations.size(); ++i) {
        m.substation_ids.push_back(substations[i].id);
        m.area_of.push_back(model.assignment[i]);
        m.members[static_cast<std::size_t>(model.assignment[i])].push_back(static_cast<int>(i));
        m.index_of.emplace(substations[i].id, static_cast<int>(i));
    }
    return m;
}

}  // namespace vegout::geo
