#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vegout/common.hpp"

namespace vegout::synth {

struct SynthSpec {
    std::uint64_t seed = 42;
    int n_substations = 85;
    int n_stations = 20;  // one near each blob centre, the rest scattered
    int n_areas_true = 14;
    int start_year = 2011;
    int train_years = 3;
    int test_months = 7;

    // Geography, degrees.
    double centre_lat = 40.0;
    double centre_lon = -83.0;
    double region_half_width = 0.9;
    double blob_spread = 0.02;       // sd of substations around a blob centre
    double min_blob_separation = 0.2;

    // Weather: episodes per station-month and their seasonal swing.
    double episodes_per_month = 4.0;
    double episode_seasonal_amplitude = 0.5;  // peak in July
    double episode_mean_hours = 4.0;
    double event_gust_probability = 0.8;      // gust above threshold within an episode hour
    double storm_probability = 0.5;           // storm report within an episode hour
    double gust_threshold_mph = 8.0;
    double missing_gust_rate = 0.01;
    double missing_row_rate = 0.005;
    int glitch_gusts = 6;                     // implausible readings per station

    // Growth outages: Poisson per substation-month.
    double growth_base = 1.2;
    double growth_trend = 0.75;               // yearly multiplicative factor, in (0, 1]
    double growth_seasonal_amplitude = 0.6;   // peak in July

    // Weather outages: Bernoulli per substation and event hour.
    double weather_base = 0.05;
    double area_vulnerability_min = 0.3;
    double area_vulnerability_max = 3.0;
    std::array<double, 12> month_vulnerability{0.6, 0.6, 0.8, 1.0, 1.2, 1.4, 1.5, 1.4, 1.2, 1.0, 0.8, 0.6};

    double other_cause_base = 0.4;            // non-vegetation outages per substation-month
    int injected_bursts = 4;                  // duplicated-record bursts to be removed as outliers

    /// Throws std::invalid_argument.
    void validate() const;
    [[nodiscard]] int total_months() const noexcept { return train_years * 12 + test_months; }
};

/// Ground truth used by the generator.
struct Truth {
    std::vector<std::array<double, 2>> blob_centres;  // lat, lon
    std::vector<double> area_vulnerability;           // per blob
    std::vector<int> substation_blob;                 // per substation, in file order
    std::vector<std::string> substation_ids;
    std::array<double, 12> growth_seasonal{};
    std::array<double, 12> month_vulnerability{};
    std::size_t outages_written = 0;
    std::size_t weather_rows_written = 0;
};

/// Writes outages.csv, weather.csv, substations.csv, stations.csv and
/// truth.csv into `dir`. Identical specs produce byte-identical files.
Truth generate(const SynthSpec& spec, const std::filesystem::path& dir);

}  // namespace vegout::synth
