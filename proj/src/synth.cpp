#include "vegout/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "vegout/csv.hpp"
#include "vegout/geo_cluster.hpp"
#include "vegout/random.hpp"
#include "vegout/timeutil.hpp"

namespace vegout::synth {

namespace {

using Rng = std::mt19937_64;

enum Stream : std::uint64_t { kGeo = 1, kWeather = 2, kGrowth = 3, kWeatherOutage = 4, kOther = 5, kBurst = 6 };

double seasonal(int month, double amplitude) {
    return 1.0 + amplitude * std::cos(2.0 * std::numbers::pi * (month - 7) / 12.0);
}

struct Outage {
    timeutil::UnixSeconds ts;
    int substation;
    bool vegetation;
    auto operator<=>(const Outage&) const = default;
};

struct StationHour {
    double gust;
    bool storm;
    bool event;
};

}  // namespace

void SynthSpec::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(fmt::format("synth: {} must be >= 0", name));
    };
    if (n_substations < 1 || n_areas_true < 1 || n_areas_true > n_substations)
        throw std::invalid_argument("synth: need 1 <= n_areas_true <= n_substations");
    if (n_stations < 1) throw std::invalid_argument("synth: need at least one station");
    if (train_years < 1 || test_months < 0) throw std::invalid_argument("synth: invalid year span");
    if (!(growth_trend > 0.0 && growth_trend <= 1.0)) throw std::invalid_argument("synth: growth_trend must be in (0, 1]");
    positive(episodes_per_month, "episodes_per_month");
    positive(growth_base, "growth_base");
    positive(weather_base, "weather_base");
    positive(other_cause_base, "other_cause_base");
    positive(blob_spread, "blob_spread");
    if (!(episode_mean_hours >= 1.0)) throw std::invalid_argument("synth: episode_mean_hours must be >= 1");
    if (!(area_vulnerability_min > 0.0 && area_vulnerability_max >= area_vulnerability_min))
        throw std::invalid_argument("synth: invalid vulnerability range");
    for (double v : month_vulnerability) positive(v, "month_vulnerability");
    for (double p : {event_gust_probability, storm_probability, missing_gust_rate, missing_row_rate})
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("synth: probabilities must lie in [0, 1]");
    if (std::abs(episode_seasonal_amplitude) > 1.0 || std::abs(growth_seasonal_amplitude) > 1.0)
        throw std::invalid_argument("synth: seasonal amplitudes must lie in [-1, 1]");
}

Truth generate(const SynthSpec& spec, const std::filesystem::path& dir) {
    spec.validate();
    std::filesystem::create_directories(dir);
    Truth truth;
    truth.month_vulnerability = spec.month_vulnerability;
    for (int m = 1; m <= 12; ++m)
        truth.growth_seasonal[static_cast<std::size_t>(m - 1)] = seasonal(m, spec.growth_seasonal_amplitude);

    // Geography.
    Rng geo(derive_seed(spec.seed, kGeo));
    std::uniform_real_distribution<double> box(-spec.region_half_width, spec.region_half_width);
    for (int b = 0; b < spec.n_areas_true; ++b) {
        std::array<double, 2> c{};
        for (int attempt = 0;; ++attempt) {
            c = {spec.centre_lat + box(geo), spec.centre_lon + box(geo)};
            const bool clear = std::all_of(truth.blob_centres.begin(), truth.blob_centres.end(), [&](const auto& o) {
                return std::hypot(o[0] - c[0], o[1] - c[1]) >= spec.min_blob_separation;
            });
            if (clear) break;
            if (attempt > 10000) throw std::invalid_argument("synth: cannot place blobs with the requested separation");
        }
        truth.blob_centres.push_back(c);
    }
    const double log_lo = std::log(spec.area_vulnerability_min), log_hi = std::log(spec.area_vulnerability_max);
    std::uniform_real_distribution<double> vul(log_lo, log_hi);
    for (int b = 0; b < spec.n_areas_true; ++b) truth.area_vulnerability.push_back(std::exp(vul(geo)));

    std::vector<int> blob_of(static_cast<std::size_t>(spec.n_substations));
    for (int s = 0; s < spec.n_substations; ++s) blob_of[static_cast<std::size_t>(s)] = s % spec.n_areas_true;
    std::shuffle(blob_of.begin(), blob_of.end(), geo);
    std::normal_distribution<double> jitter(0.0, spec.blob_spread);
    std::vector<std::array<double, 2>> substations;
    {
        csv::Writer w(dir / "substations.csv", {"substation_id", "lat", "lon"});
        for (int s = 0; s < spec.n_substations; ++s) {
            const auto& c = truth.blob_centres[static_cast<std::size_t>(blob_of[static_cast<std::size_t>(s)])];
            const std::string id = fmt::format("S{:03d}", s + 1);
            substations.push_back({c[0] + jitter(geo), c[1] + jitter(geo)});
            w.row({id, csv::num(substations.back()[0]), csv::num(substations.back()[1])});
            truth.substation_ids.push_back(id);
        }
    }
    truth.substation_blob = blob_of;

    std::vector<std::array<double, 2>> stations;
    for (int k = 0; k < spec.n_stations; ++k) {
        if (k < spec.n_areas_true) {
            const auto& c = truth.blob_centres[static_cast<std::size_t>(k)];
            stations.push_back({c[0] + 0.5 * jitter(geo), c[1] + 0.5 * jitter(geo)});
        } else {
            stations.push_back({spec.centre_lat + box(geo), spec.centre_lon + box(geo)});
        }
    }
    {
        csv::Writer w(dir / "stations.csv", {"station_id", "lat", "lon"});
        for (std::size_t k = 0; k < stations.size(); ++k)
            w.row({fmt::format("W{:02d}", k + 1), csv::num(stations[k][0]), csv::num(stations[k][1])});
    }

    std::vector<std::size_t> station_of(substations.size());
    for (std::size_t s = 0; s < substations.size(); ++s) {
        double best = 1e300;
        for (std::size_t k = 0; k < stations.size(); ++k) {
            const double d = geo::haversine_km(substations[s][0], substations[s][1], stations[k][0], stations[k][1]);
            if (d < best) best = d, station_of[s] = k;
        }
    }

    // Weather.
    const timeutil::HourIndex first_hour = timeutil::hour_from_civil(spec.start_year, 1, 1, 0);
    const YearMonth first_month{spec.start_year, 1};
    const YearMonth end_month = first_month.plus(spec.total_months());
    const timeutil::HourIndex end_hour = timeutil::month_start(end_month);
    const std::size_t hours = static_cast<std::size_t>(end_hour - first_hour);

    std::vector<std::vector<StationHour>> weather(stations.size(), std::vector<StationHour>(hours));
    for (std::size_t k = 0; k < stations.size(); ++k) {
        Rng rng(derive_seed(derive_seed(spec.seed, kWeather), k));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        int remaining = 0;
        for (std::size_t h = 0; h < hours; ++h) {
            const auto civil = timeutil::civil_from_hour(first_hour + static_cast<timeutil::HourIndex>(h));
            if (remaining == 0) {
                const double rate = spec.episodes_per_month * seasonal(static_cast<int>(civil.month), spec.episode_seasonal_amplitude) /
                                    (timeutil::days_in_month(civil.year, civil.month) * 24.0);
                if (u(rng) < rate) {
                    std::geometric_distribution<int> len(1.0 / spec.episode_mean_hours);
                    remaining = 1 + len(rng);
                }
            }
            StationHour& sh = weather[k][h];
            if (remaining > 0) {
                --remaining;
                const bool gusty = u(rng) < spec.event_gust_probability;
                sh.storm = u(rng) < spec.storm_probability;
                sh.gust = gusty ? spec.gust_threshold_mph + 0.5 + 2.5 * u(rng) : spec.gust_threshold_mph * u(rng);
                sh.event = gusty || sh.storm;
            } else {
                sh.gust = spec.gust_threshold_mph * u(rng);
                sh.storm = false;
                sh.event = false;
            }
        }
    }
    {
        csv::Writer w(dir / "weather.csv", {"timestamp", "station_id", "gust_mph", "condition"});
        static constexpr const char* calm[] = {"Clear", "Partly Cloudy", "Overcast", "Light Rain"};
        static constexpr const char* stormy[] = {"Thunderstorm", "Heavy Rain", "Heavy Rain with Thunder"};
        for (std::size_t k = 0; k < stations.size(); ++k) {
            Rng rng(derive_seed(derive_seed(spec.seed, kWeather + 100), k));
            std::uniform_real_distribution<double> u(0.0, 1.0);
            std::vector<std::size_t> glitches;
            std::uniform_int_distribution<std::size_t> pick(0, hours - 1);
            for (int g = 0; g < spec.glitch_gusts; ++g) glitches.push_back(pick(rng));
            const std::string id = fmt::format("W{:02d}", k + 1);
            for (std::size_t h = 0; h < hours; ++h) {
                const StationHour& sh = weather[k][h];
                if (u(rng) < spec.missing_row_rate) continue;
                const bool blank = u(rng) < spec.missing_gust_rate;
                double gust = sh.gust;
                if (std::find(glitches.begin(), glitches.end(), h) != glitches.end()) gust = 150.0 + 50.0 * u(rng);
                const int variant = static_cast<int>(u(rng) * 3.0);
                const std::string cond = sh.storm ? stormy[variant % 3] : calm[variant % 4];
                const auto ts = timeutil::format_iso8601((first_hour + static_cast<timeutil::HourIndex>(h)) * 3600);
                w.row({ts, id, blank ? std::string() : csv::num(gust, 1), cond});
                ++truth.weather_rows_written;
            }
        }
    }

    // Outages.
    std::vector<Outage> outages;
    auto stamp = [&](Rng& rng, timeutil::HourIndex hour) {
        std::uniform_int_distribution<int> minute(0, 59);
        return hour * 3600 + minute(rng) * 60;
    };
    for (int s = 0; s < spec.n_substations; ++s) {
        Rng rng(derive_seed(derive_seed(spec.seed, kGrowth), static_cast<std::uint64_t>(s)));
        for (int mi = 0; mi < spec.total_months(); ++mi) {
            const YearMonth ym = first_month.plus(mi);
            const int year_index = ym.year - spec.start_year;
            const double mean = spec.growth_base * std::pow(spec.growth_trend, year_index) *
                                truth.growth_seasonal[static_cast<std::size_t>(ym.month - 1)];
            const int count = mean > 0.0 ? std::poisson_distribution<int>(mean)(rng) : 0;
            const auto h0 = timeutil::month_start(ym);
            std::uniform_int_distribution<long> hour(0, timeutil::days_in_month(ym.year, static_cast<unsigned>(ym.month)) * 24L - 1);
            for (int c = 0; c < count; ++c) outages.push_back({stamp(rng, h0 + hour(rng)), s, true});
            if (spec.other_cause_base > 0.0) {
                const int other = std::poisson_distribution<int>(spec.other_cause_base)(rng);
                for (int c = 0; c < other; ++c) outages.push_back({stamp(rng, h0 + hour(rng)), s, false});
            }
        }
    }
    for (int s = 0; s < spec.n_substations; ++s) {
        Rng rng(derive_seed(derive_seed(spec.seed, kWeatherOutage), static_cast<std::uint64_t>(s)));
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const auto& series = weather[station_of[static_cast<std::size_t>(s)]];
        const double area_v = truth.area_vulnerability[static_cast<std::size_t>(blob_of[static_cast<std::size_t>(s)])];
        for (std::size_t h = 0; h < hours; ++h) {
            if (!series[h].event) continue;
            const auto hour = first_hour + static_cast<timeutil::HourIndex>(h);
            const int month = timeutil::month_of(hour).month;
            const double p = std::min(
                1.0, spec.weather_base * area_v * spec.month_vulnerability[static_cast<std::size_t>(month - 1)]);
            if (u(rng) < p) outages.push_back({stamp(rng, hour), s, true});
        }
    }
    {
        Rng rng(derive_seed(spec.seed, kBurst));
        std::uniform_int_distribution<int> sub(0, spec.n_substations - 1);
        std::uniform_int_distribution<std::size_t> hour(0, hours - 1);
        std::uniform_int_distribution<int> minute(0, 59);
        for (int b = 0; b < spec.injected_bursts; ++b) {
            const int s = sub(rng);
            const auto h = first_hour + static_cast<timeutil::HourIndex>(hour(rng));
            for (int r = 0; r < 12; ++r) outages.push_back({h * 3600 + minute(rng) * 60 + r, s, true});
        }
    }
    std::sort(outages.begin(), outages.end());
    {
        csv::Writer w(dir / "outages.csv", {"timestamp", "substation_id", "cause"});
        for (const auto& o : outages)
            w.row({timeutil::format_iso8601(o.ts), truth.substation_ids[static_cast<std::size_t>(o.substation)],
                   o.vegetation ? "vegetation" : "other"});
        truth.outages_written = outages.size();
    }

    {
        csv::Writer w(dir / "truth.csv", {"parameter", "index", "value"});
        for (std::size_t b = 0; b < truth.area_vulnerability.size(); ++b) {
            w.row({"blob_lat", std::to_string(b), csv::num(truth.blob_centres[b][0])});
            w.row({"blob_lon", std::to_string(b), csv::num(truth.blob_centres[b][1])});
            w.row({"area_vulnerability", std::to_string(b), csv::num(truth.area_vulnerability[b])});
        }
        for (std::size_t m = 0; m < 12; ++m) {
            w.row({"month_vulnerability", std::to_string(m + 1), csv::num(truth.month_vulnerability[m])});
            w.row({"growth_seasonal", std::to_string(m + 1), csv::num(truth.growth_seasonal[m])});
        }
        for (std::size_t s = 0; s < truth.substation_ids.size(); ++s)
            w.row({"substation_blob", truth.substation_ids[s], std::to_string(truth.substation_blob[s])});
        w.row({"growth_base", "", csv::num(spec.growth_base)});
        w.row({"growth_trend", "", csv::num(spec.growth_trend)});
        w.row({"weather_base", "", csv::num(spec.weather_base)});
        w.row({"start_year", "", std::to_string(spec.start_year)});
        w.row({"train_years", "", std::to_string(spec.train_years)});
        w.row({"test_months", "", std::to_string(spec.test_months)});
    }
    return truth;
}

}  // namespace vegout::synth
