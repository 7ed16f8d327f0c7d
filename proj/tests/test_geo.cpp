#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "vegout/geo_cluster.hpp"

using namespace vegout;
using namespace vegout::geo;

namespace {

/// Global optimum of the squared-error objective by enumerating every
/// labelling with k non-empty clusters.
double brute_force_optimum(const std::vector<Point>& pts, int k) {
    const std::size_t n = pts.size();
    std::vector<int> label(n, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<double> sl(static_cast<std::size_t>(k)), sn(static_cast<std::size_t>(k));
        std::vector<int> cnt(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(label[i]);
            sl[c] += pts[i].lat;
            sn[c] += pts[i].lon;
            ++cnt[c];
        }
        if (std::all_of(cnt.begin(), cnt.end(), [](int c) { return c > 0; })) {
            double j = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto c = static_cast<std::size_t>(label[i]);
                const double ml = sl[c] / cnt[c], mn = sn[c] / cnt[c];
                j += (pts[i].lat - ml) * (pts[i].lat - ml) + (pts[i].lon - mn) * (pts[i].lon - mn);
            }
            best = std::min(best, j);
        }
        std::size_t pos = 0;
        while (pos < n && ++label[pos] == k) label[pos++] = 0;
        if (pos == n) break;
    }
    return best;
}

std::vector<Point> blobs(const std::vector<Point>& centres, int per_blob, double spread, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Point> pts;
    for (const auto& c : centres)
        for (int i = 0; i < per_blob; ++i) pts.push_back({c.lat + spread * g(rng), c.lon + spread * g(rng)});
    return pts;
}

double spherical_cosine_km(double lat1, double lon1, double lat2, double lon2) {
    constexpr double r = std::numbers::pi / 180.0;
    const double c = std::sin(lat1 * r) * std::sin(lat2 * r) +
                     std::cos(lat1 * r) * std::cos(lat2 * r) * std::cos((lon2 - lon1) * r);
    return 6371.0088 * std::acos(std::clamp(c, -1.0, 1.0));
}

}  // namespace

TEST_CASE("two well-separated pairs") {
    const std::vector<Point> pts{{0, 0}, {0, 1}, {10, 10}, {10, 11}};
    const ClusterModel m = kmeans(pts, 2, 1);
    CHECK(m.objective == doctest::Approx(1.0).epsilon(1e-12));
    auto c = m.centroids;
    std::sort(c.begin(), c.end());
    CHECK(c[0].lat == doctest::Approx(0.0));
    CHECK(c[0].lon == doctest::Approx(0.5));
    CHECK(c[1].lat == doctest::Approx(10.0));
    CHECK(c[1].lon == doctest::Approx(10.5));
    CHECK(m.assignment[0] == m.assignment[1]);
    CHECK(m.assignment[2] == m.assignment[3]);
    CHECK(m.assignment[0] != m.assignment[2]);
}

TEST_CASE("k equal to the number of distinct points gives zero objective") {
    const std::vector<Point> pts{{1, 2}, {3, 4}, {5, 7}, {3, 4}};
    const ClusterModel m = kmeans(pts, 3, 9);
    CHECK(m.objective == 0.0);
    CHECK_THROWS_AS(kmeans(pts, 4, 9), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(std::vector<Point>{}, 1, 9), std::invalid_argument);
    CHECK_THROWS_AS(kmeans(pts, 0, 9), std::invalid_argument);
}

TEST_CASE("objective matches a hand computation") {
    const std::vector<Point> pts{{0, 0}, {2, 0}, {0, 3}};
    const std::vector<int> a{0, 0, 1};
    const std::vector<Point> c{{1, 0}, {0, 2}};
    CHECK(objective(pts, a, c) == doctest::Approx(1 + 1 + 1));
}

TEST_CASE("kmeans reaches the exhaustive optimum on small fixtures") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int rep = 0; rep < 400; ++rep) {
        const int n = 4 + static_cast<int>(rng() % 5);
        std::vector<Point> pts(static_cast<std::size_t>(n));
        for (auto& p : pts) p = {u(rng), u(rng)};
        for (int k = 1; k <= 3; ++k) {
            const double best = brute_force_optimum(pts, k);
            const ClusterModel m = kmeans(pts, k, rng());
            CHECK(m.objective == doctest::Approx(best).epsilon(1e-9));
        }
    }
}

TEST_CASE("Lloyd iterations never increase the objective") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<Point> pts(40);
        for (auto& p : pts) p = {u(rng), u(rng)};
        std::vector<Point> init(pts.begin(), pts.begin() + 5);
        std::vector<double> trace;
        (void)lloyd(pts, init, 300, &trace);
        REQUIRE_FALSE(trace.empty());
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
    }
}

TEST_CASE("converged assignments are nearest and centroids are member means") {
    const auto pts = blobs({{0, 0}, {1, 1}, {0, 1}}, 12, 0.2, 4);
    const ClusterModel m = kmeans(pts, 3, 77);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& p = pts[i];
        double own = 0, best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < m.centroids.size(); ++c) {
            const double d = std::pow(p.lat - m.centroids[c].lat, 2) + std::pow(p.lon - m.centroids[c].lon, 2);
            best = std::min(best, d);
            if (static_cast<int>(c) == m.assignment[i]) own = d;
        }
        CHECK(own == doctest::Approx(best).epsilon(1e-12));
    }
    for (int c = 0; c < m.k; ++c) {
        double sl = 0, sn = 0;
        int cnt = 0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (m.assignment[i] == c) {
                sl += pts[i].lat;
                sn += pts[i].lon;
                ++cnt;
            }
        REQUIRE(cnt > 0);
        CHECK(m.centroids[static_cast<std::size_t>(c)].lat == doctest::Approx(sl / cnt).epsilon(1e-12));
        CHECK(m.centroids[static_cast<std::size_t>(c)].lon == doctest::Approx(sn / cnt).epsilon(1e-12));
    }
}

TEST_CASE("translation shifts centroids and keeps assignments and objective") {
    const auto pts = blobs({{0, 0}, {3, 0}, {0, 3}}, 10, 0.3, 12);
    auto shifted = pts;
    for (auto& p : shifted) {
        p.lat += 12.5;
        p.lon -= 80.25;
    }
    const ClusterModel a = kmeans(pts, 3, 5);
    const ClusterModel b = kmeans(shifted, 3, 5);
    CHECK(a.assignment == b.assignment);
    CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-9));
    for (std::size_t c = 0; c < 3; ++c) {
        CHECK(b.centroids[c].lat == doctest::Approx(a.centroids[c].lat + 12.5).epsilon(1e-12));
        CHECK(b.centroids[c].lon == doctest::Approx(a.centroids[c].lon - 80.25).epsilon(1e-12));
    }
}

TEST_CASE("kmeans is deterministic for a seed") {
    const auto pts = blobs({{0, 0}, {1, 0}}, 15, 0.4, 3);
    const ClusterModel a = kmeans(pts, 4, 123);
    const ClusterModel b = kmeans(pts, 4, 123);
    CHECK(a.assignment == b.assignment);
    CHECK(a.objective == b.objective);
}

TEST_CASE("select_k finds three tight far-apart blobs") {
    // Coincident members: J(3) = 0 ends the scan.
    const auto tight = blobs({{0, 0}, {5, 5}, {0, 10}}, 10, 0.0, 6);
    CHECK(select_k(tight, 1, 8, 0.10, 31).chosen_k == 3);

    // With Gaussian members, splitting one of three blobs removes about
    // (2/pi)/2/3 ~ 10.6% of J(3), so the threshold has to sit above that.
    const auto pts = blobs({{0, 0}, {5, 5}, {0, 10}}, 40, 0.05, 6);
    const ElbowCurve e = select_k(pts, 1, 8, 0.20, 31);
    CHECK(e.chosen_k == 3);
    REQUIRE(e.curve.size() == 8);
    CHECK(e.curve.front().first == 1);
    CHECK(e.models.size() == e.curve.size());
    for (std::size_t i = 1; i < e.curve.size(); ++i) CHECK(e.curve[i].second <= e.curve[i - 1].second + 1e-12);
}

TEST_CASE("select_k on a single repeated point") {
    const std::vector<Point> pts(5, Point{35.2, -80.8});
    const ElbowCurve e = select_k(pts, 1, 20, 0.10, 1);
    CHECK(e.chosen_k == 1);
    CHECK(e.curve.front().second == 0.0);
}

TEST_CASE("haversine agrees with the spherical law of cosines") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> lat(-80, 80), lon(-180, 180);
    for (int i = 0; i < 500; ++i) {
        const double a = lat(rng), b = lon(rng), c = lat(rng), d = lon(rng);
        CHECK(haversine_km(a, b, c, d) == doctest::Approx(spherical_cosine_km(a, b, c, d)).epsilon(1e-7));
    }
    CHECK(haversine_km(35, -80, 35, -80) == 0.0);
    // One degree of latitude.
    CHECK(haversine_km(35, -80, 36, -80) == doctest::Approx(6371.0088 * std::numbers::pi / 180).epsilon(1e-12));
}

TEST_CASE("map_stations picks the nearest station") {
    const std::vector<ingest::SubstationInfo> subs{{"S1", 35, -80}, {"S2", 36, -81.1}};
    const std::vector<ingest::StationInfo> near_far{{"W1", 35, -80.1}, {"W2", 36, -81}};
    // Hand distances: S1 to W1 ~ 9.1 km, S1 to W2 ~ 143 km.
    CHECK(spherical_cosine_km(35, -80, 35, -80.1) < spherical_cosine_km(35, -80, 36, -81));
    CHECK(map_stations(subs, near_far) == std::vector<std::string>{"W1", "W2"});

    const std::vector<ingest::StationInfo> one{{"ONLY", 10, 10}};
    CHECK(map_stations(subs, one) == std::vector<std::string>{"ONLY", "ONLY"});

    const std::vector<ingest::SubstationInfo> mid{{"S", 35, -80}};
    const std::vector<ingest::StationInfo> tie{{"B", 35, -79}, {"A", 35, -81}};
    CHECK(map_stations(mid, tie) == std::vector<std::string>{"A"});

    CHECK_THROWS_AS(map_stations(subs, std::vector<ingest::StationInfo>{}), std::invalid_argument);
}

TEST_CASE("build_area_map wires substations, areas and stations") {
    const std::vector<ingest::SubstationInfo> subs{{"S1", 0, 0}, {"S2", 0, 0.01}, {"S3", 5, 5}};
    const std::vector<ingest::StationInfo> stations{{"WA", 0, 0}, {"WB", 5, 5}};
    std::vector<Point> pts;
    for (const auto& s : subs) pts.push_back({s.lat, s.lon});
    const ClusterModel m = kmeans(pts, 2, 4);
    const AreaMap map = build_area_map(subs, stations, m);
    CHECK(map.area_count == 2);
    CHECK(map.area("S1") == map.area("S2"));
    CHECK(map.area("S1") != map.area("S3"));
    CHECK(map.stations_in(map.area("S1")) == std::vector<std::string>{"WA"});
    CHECK(map.stations_in(map.area("S3")) == std::vector<std::string>{"WB"});
    std::size_t members = 0;
    for (const auto& m2 : map.members) members += m2.size();
    CHECK(members == 3);
}
