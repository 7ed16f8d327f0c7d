#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "support.hpp"
#include "vegout/categorize.hpp"
#include "vegout/csv.hpp"
#include "vegout/features.hpp"
#include "vegout/synth.hpp"
#include "vegout/timeutil.hpp"

using namespace vegout;

namespace {

synth::SynthSpec small_spec(std::uint64_t seed) {
    synth::SynthSpec s;
    s.seed = seed;
    s.n_substations = 12;
    s.n_stations = 4;
    s.n_areas_true = 4;
    s.train_years = 1;
    s.test_months = 2;
    return s;
}

std::size_t data_rows(const std::filesystem::path& p) {
    const std::string text = testing::read_file(p);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) - 1;
}

struct Loaded {
    ingest::Corpus corpus;
    geo::AreaMap areas;
};

/// Corpus with the generator's own blob labels as areas.
Loaded load_with_truth(const std::filesystem::path& dir, const synth::Truth& truth) {
    Loaded l;
    l.corpus = ingest::load_corpus(ingest::CorpusPaths::in_directory(dir));
    std::vector<int> labels;
    for (const auto& s : l.corpus.substations()) {
        const auto it = std::find(truth.substation_ids.begin(), truth.substation_ids.end(), s.id);
        labels.push_back(truth.substation_blob[static_cast<std::size_t>(it - truth.substation_ids.begin())]);
    }
    l.areas = testing::area_map(l.corpus.substations(), l.corpus.stations(), labels);
    return l;
}

}  // namespace

TEST_CASE("generated files follow the ingest schemas") {
    testing::TempDir dir;
    const auto truth = synth::generate(small_spec(3), dir.path());
    for (const char* f : {"outages.csv", "weather.csv", "substations.csv", "stations.csv", "truth.csv"})
        CHECK(std::filesystem::exists(dir / f));
    CHECK(data_rows(dir / "outages.csv") == truth.outages_written);
    CHECK(data_rows(dir / "weather.csv") == truth.weather_rows_written);
    CHECK(data_rows(dir / "substations.csv") == 12);
    CHECK(truth.blob_centres.size() == 4);
    CHECK(truth.substation_blob.size() == 12);

    const auto corpus = ingest::load_corpus(ingest::CorpusPaths::in_directory(dir.path()));
    CHECK(corpus.substations().size() == 12);
    CHECK(corpus.stations().size() == 4);
    CHECK(corpus.report().outliers_removed >= 12 + 1);
}

TEST_CASE("zero outage rates give an empty outage file") {
    auto spec = small_spec(4);
    spec.growth_base = 0;
    spec.weather_base = 0;
    spec.other_cause_base = 0;
    spec.injected_bursts = 0;
    testing::TempDir dir;
    const auto truth = synth::generate(spec, dir.path());
    CHECK(truth.outages_written == 0);
    CHECK(data_rows(dir / "outages.csv") == 0);
    CHECK(truth.weather_rows_written > 0);
    CHECK(data_rows(dir / "weather.csv") == truth.weather_rows_written);
}

TEST_CASE("no weather episodes means every vegetation outage is growth") {
    auto spec = small_spec(5);
    spec.episodes_per_month = 0;
    spec.weather_base = 1.0;
    testing::TempDir dir;
    const auto truth = synth::generate(spec, dir.path());
    const auto l = load_with_truth(dir.path(), truth);
    const auto cat = categorize::categorize_outages(l.corpus, l.areas, {});
    CHECK(cat.outages.size() > 0);
    CHECK(cat.weather == 0);
    CHECK(cat.growth == cat.outages.size());
}

TEST_CASE("identical specs write byte-identical files") {
    testing::TempDir a, b, c;
    synth::generate(small_spec(9), a.path());
    synth::generate(small_spec(9), b.path());
    synth::generate(small_spec(10), c.path());
    for (const char* f : {"outages.csv", "weather.csv", "substations.csv", "stations.csv", "truth.csv"})
        CHECK(testing::read_file(a / f) == testing::read_file(b / f));
    CHECK(testing::read_file(a / "outages.csv") != testing::read_file(c / "outages.csv"));
}

TEST_CASE("invalid specs are rejected") {
    auto s = small_spec(1);
    s.growth_trend = 0.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec(1);
    s.growth_trend = 1.5;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec(1);
    s.growth_base = -1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec(1);
    s.n_areas_true = 13;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = small_spec(1);
    s.storm_probability = 1.2;
    testing::TempDir dir;
    CHECK_THROWS_AS(synth::generate(s, dir.path()), std::invalid_argument);
}

TEST_CASE("monthly growth counts follow the seasonal profile") {
    // Growth-only corpora; pooled counts per calendar month are Poisson with
    // mean seeds * substations * base * seasonal(month).
    constexpr int kSeeds = 20;
    std::array<double, 12> count{};
    synth::Truth truth;
    synth::SynthSpec spec;
    for (int seed = 1; seed <= kSeeds; ++seed) {
        spec = small_spec(static_cast<std::uint64_t>(seed));
        spec.weather_base = 0;
        spec.other_cause_base = 0;
        spec.injected_bursts = 0;
        spec.test_months = 0;
        testing::TempDir dir;
        truth = synth::generate(spec, dir.path());
        csv::Reader r(dir / "outages.csv");
        std::vector<std::string> row;
        while (r.next(row)) {
            const auto ts = timeutil::parse_iso8601(row[0]);
            count[static_cast<std::size_t>(timeutil::month_of(timeutil::floor_hour(ts)).month - 1)] += 1;
        }
    }
    for (int m = 0; m < 12; ++m) {
        const double mean = kSeeds * spec.n_substations * spec.growth_base * truth.growth_seasonal[static_cast<std::size_t>(m)];
        CAPTURE(m);
        CHECK(std::abs(count[static_cast<std::size_t>(m)] - mean) <= 3 * std::sqrt(mean));
    }
    CHECK(truth.growth_seasonal[6] == doctest::Approx(1 + spec.growth_seasonal_amplitude));
    CHECK(*std::max_element(truth.growth_seasonal.begin(), truth.growth_seasonal.end()) == truth.growth_seasonal[6]);
}

TEST_CASE("fitted AOI ranks areas like the true vulnerability") {
    auto spec = small_spec(21);
    spec.n_substations = 20;
    spec.train_years = 2;
    spec.test_months = 0;
    spec.weather_base = 0.1;
    spec.area_vulnerability_min = 0.2;
    spec.area_vulnerability_max = 4.0;
    testing::TempDir dir;
    const auto truth = synth::generate(spec, dir.path());
    const auto l = load_with_truth(dir.path(), truth);
    const auto cat = categorize::categorize_outages(l.corpus, l.areas, {});
    std::vector<YearMonth> months;
    for (int i = 0; i < 24; ++i) months.push_back(YearMonth{spec.start_year, 1}.plus(i));
    const auto table = features::build_feature_table(l.corpus, l.areas, cat, months, months.front(), months.back(), {});

    int compared = 0;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            const double va = truth.area_vulnerability[a], vb = truth.area_vulnerability[b];
            if (va < 2 * vb) continue;
            CAPTURE(va);
            CAPTURE(vb);
            CHECK(table.aoi[a] > table.aoi[b]);
            ++compared;
        }
    CHECK(compared >= 2);
}
