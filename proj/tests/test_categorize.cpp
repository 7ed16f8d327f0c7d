#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "vegout/categorize.hpp"

using namespace vegout;
using namespace vegout::categorize;

namespace {

struct Scenario {
    ingest::Corpus corpus;
    geo::AreaMap areas;
};

/// One area with two substations and two stations; the outage is at 12:00.
Scenario scenario(double w2_gust_at_minus2, bool storm_at_minus2 = false) {
    ingest::RawTables raw;
    raw.substations = {{"S1", 35.0, -80.0}, {"S2", 35.1, -80.1}};
    raw.stations = {{"W1", 35.0, -80.0}, {"W2", 35.1, -80.1}};
    for (int h = 0; h < 24; ++h) {
        for (const char* id : {"W1", "W2"}) {
            ingest::WeatherObservation w;
            w.timestamp = timeutil::hour_from_civil(2013, 7, 1, static_cast<unsigned>(h)) * 3600;
            w.station_id = id;
            w.gust_mph = 1.0 + h % 5;  // calm but varied, so the IQR fences stay wide
            w.storm = false;
            if (h == 10 && std::string(id) == "W2") {
                w.gust_mph = w2_gust_at_minus2;
                w.storm = storm_at_minus2;
            }
            raw.weather.push_back(w);
        }
    }
    raw.outages.push_back({timeutil::hour_from_civil(2013, 7, 1, 12) * 3600 + 1200, "S1", ingest::Cause::vegetation});
    raw.outages.push_back({timeutil::hour_from_civil(2013, 7, 1, 12) * 3600, "S1", ingest::Cause::other});
    const auto subs = raw.substations;
    const auto stations = raw.stations;
    Scenario s{ingest::build_corpus(std::move(raw), testing::lenient_ingest()), {}};
    s.areas = testing::area_map(subs, stations, {0, 0});
    return s;
}

Category only_category(const Result& r) {
    REQUIRE(r.outages.size() == 1);
    return r.outages[0].category;
}

/// Direct evaluation of the rule from station readings.
std::vector<Category> oracle(const ingest::Corpus& corpus, const geo::AreaMap& areas, int lookback, double threshold) {
    const auto& grid = corpus.weather();
    std::vector<Category> out;
    for (const auto& o : corpus.outages()) {
        if (o.cause != ingest::Cause::vegetation) continue;
        const AreaId a = areas.area(o.substation_id);
        bool event = false;
        for (const auto& station : areas.stations_in(a)) {
            const auto& s = grid.stations[static_cast<std::size_t>(grid.find(station))];
            for (auto h = o.hour() - lookback; h <= o.hour(); ++h) {
                if (!grid.covers(h)) continue;
                const auto i = static_cast<std::size_t>(h - grid.first_hour);
                if (!s.present[i]) continue;
                if (s.gust_mph[i] > threshold || s.storm[i]) event = true;
            }
        }
        out.push_back(event ? Category::weather : Category::growth);
    }
    return out;
}

}  // namespace

TEST_CASE("calm weather gives growth") {
    const auto s = scenario(3.0);
    const Result r = categorize_outages(s.corpus, s.areas, {});
    CHECK(only_category(r) == Category::growth);
    CHECK(r.growth == 1);
    CHECK(r.weather == 0);
}

TEST_CASE("a 20 mph gust two hours earlier at another area station gives weather") {
    const auto s = scenario(20.0);
    CHECK(only_category(categorize_outages(s.corpus, s.areas, {})) == Category::weather);
}

TEST_CASE("the gust threshold is strict") {
    CHECK(only_category(categorize_outages(scenario(8.0).corpus, scenario(8.0).areas, {})) == Category::growth);
    const auto s = scenario(8.01);
    CHECK(only_category(categorize_outages(s.corpus, s.areas, {})) == Category::weather);
}

TEST_CASE("a storm report alone is an event") {
    const auto s = scenario(3.0, true);
    CHECK(only_category(categorize_outages(s.corpus, s.areas, {})) == Category::weather);
}

TEST_CASE("an event outside the lookback window does not count") {
    const auto s = scenario(20.0);
    Options o;
    o.lookback_hours = 1;
    CHECK(only_category(categorize_outages(s.corpus, s.areas, o)) == Category::growth);
}

TEST_CASE("outages without weather coverage default to growth") {
    ingest::RawTables raw;
    raw.substations = {{"S1", 35.0, -80.0}};
    raw.stations = {{"W1", 35.0, -80.0}};
    for (int h = 0; h < 4; ++h)
        raw.weather.push_back({timeutil::hour_from_civil(2013, 7, 1, static_cast<unsigned>(h)) * 3600, "W1", 20.0, true});
    raw.outages.push_back({timeutil::hour_from_civil(2013, 7, 3, 0) * 3600, "S1", ingest::Cause::vegetation});
    const auto subs = raw.substations;
    const auto st = raw.stations;
    const auto corpus = ingest::build_corpus(std::move(raw), testing::lenient_ingest());
    const Result r = categorize_outages(corpus, testing::area_map(subs, st, {0}), {});
    CHECK(r.uncovered == 1);
    CHECK(only_category(r) == Category::growth);
    CHECK(r.outages[0].uncovered);
}

TEST_CASE("categorization matches a direct evaluation of the rule") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        const auto rc = testing::random_corpus(seed);
        for (int lookback : {1, 3, 6}) {
            for (double thr : {6.0, 8.0, 12.0}) {
                Options o;
                o.lookback_hours = lookback;
                o.gust_threshold_mph = thr;
                const Result r = categorize_outages(rc.corpus, rc.areas, o);
                const auto expected = oracle(rc.corpus, rc.areas, lookback, thr);
                REQUIRE(r.outages.size() == expected.size());
                for (std::size_t i = 0; i < expected.size(); ++i) CHECK(r.outages[i].category == expected[i]);
            }
        }
    }
}

TEST_CASE("partition and monotonicity in lookback and threshold") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const auto rc = testing::random_corpus(seed);
        std::size_t vegetation = 0;
        for (const auto& o : rc.corpus.outages()) vegetation += o.cause == ingest::Cause::vegetation;

        std::vector<Category> previous;
        for (int lookback : {1, 3, 6, 12}) {
            Options o;
            o.lookback_hours = lookback;
            const Result r = categorize_outages(rc.corpus, rc.areas, o);
            CHECK(r.growth + r.weather == vegetation);
            CHECK(r.outages.size() == vegetation);
            if (!previous.empty())
                for (std::size_t i = 0; i < previous.size(); ++i)
                    if (previous[i] == Category::weather) CHECK(r.outages[i].category == Category::weather);
            previous.clear();
            for (const auto& c : r.outages) previous.push_back(c.category);
        }

        previous.clear();
        for (double thr : {4.0, 8.0, 10.0, 13.0}) {
            Options o;
            o.gust_threshold_mph = thr;
            const Result r = categorize_outages(rc.corpus, rc.areas, o);
            if (!previous.empty())
                for (std::size_t i = 0; i < previous.size(); ++i)
                    if (previous[i] == Category::growth) CHECK(r.outages[i].category == Category::growth);
            previous.clear();
            for (const auto& c : r.outages) previous.push_back(c.category);
        }
    }
}

TEST_CASE("category names") {
    CHECK(category_name(Category::growth) == "growth");
    CHECK(category_name(Category::weather) == "weather");
}
