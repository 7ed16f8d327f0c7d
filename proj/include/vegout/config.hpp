#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vegout {

/// Pipeline settings. Loaded from a flat `key = value` file; `#` starts a comment.
///
/// Documented keys:
///   timezone             corpus timezone for timestamps without an offset ("UTC", "-05:00")
///   iqr_multiplier       IQR fence width (1.5)
///   storm_keywords       comma list matched case-insensitively against weather conditions
///   gust_threshold_mph   gust event threshold, strict (8)
///   lookback_hours       categorization lookback window (3)
///   seed                 master seed, fanned out to every stochastic stage
///   k_min, k_max         elbow scan range (1, 20)
///   elbow_threshold      relative-drop threshold for choosing k (0.10)
///   kmeans_restarts      (10)
///   kmeans_max_iter      (300)
///   train_years          whole calendar years used for fitting (3)
///   hour_start, hour_end inclusive hour-of-day restriction for the indices (0, 23)
///   day_start, day_end   inclusive day-of-month restriction (1, 31)
///   ts_cv_window         validation window of the rolling-origin search, months (12)
///   ts_cv_step           spacing between rolling origins, months (4)
///   ts_cv_min_train      shortest training prefix, months (24)
///   ml_folds             k for the two-stream regressors (5)
///   benchmark_folds      k for the benchmark ensemble (10)
///   mlp_epochs           (2000)
///   mlp_learning_rate    (0.01)
///   svr_epsilon          tube width on standardized targets (0.1)
///   importance_repetitions (10)
///   risk_thresholds      three ascending absolute cut points; empty means quartiles
struct Config {
    std::string timezone = "UTC";
    double iqr_multiplier = 1.5;
    std::vector<std::string> storm_keywords{"thunderstorm", "heavy rain"};
    double gust_threshold_mph = 8.0;
    int lookback_hours = 3;
    std::uint64_t seed = 42;

    int k_min = 1;
    int k_max = 20;
    double elbow_threshold = 0.10;
    int kmeans_restarts = 10;
    int kmeans_max_iter = 300;

    int train_years = 3;
    int hour_start = 0;
    int hour_end = 23;
    int day_start = 1;
    int day_end = 31;

    int ts_cv_window = 12;
    int ts_cv_step = 4;
    int ts_cv_min_train = 24;

    int ml_folds = 5;
    int benchmark_folds = 10;
    int mlp_epochs = 2000;
    double mlp_learning_rate = 0.01;
    double svr_epsilon = 0.1;
    int importance_repetitions = 10;

    std::vector<double> risk_thresholds;  // empty => quartiles

    /// Throws std::invalid_argument for out-of-range settings.
    void validate() const;

    /// Parses a config file. Unknown keys and bad values throw std::invalid_argument.
    static Config load(const std::filesystem::path& path);
    static Config parse(const std::string& text);
};

}  // namespace vegout
