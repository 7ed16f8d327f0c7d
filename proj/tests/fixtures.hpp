#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "vegout/geo_cluster.hpp"
#include "vegout/ingest.hpp"
#include "vegout/timeutil.hpp"

namespace vegout::testing {

/// Area map from an explicit substation -> area labelling.
inline geo::AreaMap area_map(const std::vector<ingest::SubstationInfo>& subs,
                             const std::vector<ingest::StationInfo>& stations, const std::vector<int>& labels) {
    geo::ClusterModel m;
    m.k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    m.assignment = labels;
    m.centroids.resize(static_cast<std::size_t>(m.k));
    return geo::build_area_map(subs, stations, m);
}

/// Ingest options that keep every weather reading (fixtures use extreme gusts on purpose).
inline ingest::IngestOptions lenient_ingest() {
    ingest::IngestOptions o;
    o.iqr_multiplier = 1e6;
    return o;
}

struct RandomCorpus {
    ingest::Corpus corpus;
    geo::AreaMap areas;
};

/// Small random corpus: six substations in two areas, three stations, 240
/// hours of weather and a few dozen outages.
inline RandomCorpus random_corpus(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ingest::RawTables raw;
    raw.substations = {{"S1", 35.0, -80.0}, {"S2", 35.01, -80.0}, {"S3", 35.0, -80.01},
                       {"S4", 36.0, -81.0}, {"S5", 36.01, -81.0}, {"S6", 36.0, -81.01}};
    raw.stations = {{"W1", 35.0, -80.0}, {"W2", 35.02, -80.02}, {"W3", 36.0, -81.0}};
    const timeutil::HourIndex h0 = timeutil::hour_from_civil(2013, 6, 28, 0);
    std::uniform_real_distribution<double> gust(0, 14);
    std::bernoulli_distribution storm(0.04), missing(0.05);
    for (const auto& st : raw.stations) {
        for (int h = 0; h < 240; ++h) {
            if (missing(rng)) continue;
            ingest::WeatherObservation w;
            w.timestamp = (h0 + h) * 3600;
            w.station_id = st.id;
            w.gust_mph = std::round(gust(rng) * 10) / 10;
            w.storm = storm(rng);
            raw.weather.push_back(w);
        }
    }
    std::uniform_int_distribution<int> hour(-10, 250), sub(0, 5);
    std::bernoulli_distribution veg(0.8);
    for (int i = 0; i < 60; ++i) {
        ingest::OutageRecord o;
        o.timestamp = (h0 + hour(rng)) * 3600 + 60 * static_cast<int>(rng() % 60);
        o.substation_id = raw.substations[static_cast<std::size_t>(sub(rng))].id;
        o.cause = veg(rng) ? ingest::Cause::vegetation : ingest::Cause::other;
        raw.outages.push_back(o);
    }
    const auto subs = raw.substations;
    const auto stations = raw.stations;
    RandomCorpus rc{ingest::build_corpus(std::move(raw), lenient_ingest()), {}};
    rc.areas = area_map(subs, stations, {0, 0, 0, 1, 1, 1});
    return rc;
}

}  // namespace vegout::testing
