#pragma once

#include <span>
#include <string>
#include <vector>

#include "vegout/timeseries/holt_winters.hpp"
#include "vegout/timeseries/sarima.hpp"

namespace vegout::ts {

struct CandidateSpec {
    enum class Family { sarima, hws, seasonal_naive };
    Family family = Family::sarima;
    SarimaOrders orders;
    SeasonalMode mode = SeasonalMode::additive;

    [[nodiscard]] int parameter_count() const noexcept;
    [[nodiscard]] std::string label() const;
    bool operator==(const CandidateSpec&) const = default;
};

/// p, q, P, Q, d, D in {0, 1} with at most 4 coefficients, then additive and
/// multiplicative Holt-Winters.
std::vector<CandidateSpec> default_grid();

struct CvOptions {
    std::size_t window = 12;
    std::size_t step = 4;
    std::size_t min_train = 24;
};

struct Fold {
    std::size_t train_size;
    std::size_t validation_size;
};

/// Expanding origins at min_train, min_train + step, ... while data remain;
/// each validation window is min(window, remaining months).
std::vector<Fold> rolling_folds(std::size_t length, const CvOptions& options);

struct CandidateScore {
    CandidateSpec spec;
    std::vector<double> fold_nmae;
    double mean_nmae = 0.0;
    bool failed = false;
};

struct Selection {
    CandidateSpec best;
    double best_nmae = 0.0;
    std::vector<CandidateScore> scores;  // grid order
};

/// Scores every candidate on every fold of every series and picks the lowest
/// mean NMAE; ties go to fewer parameters, then grid order. Candidates that
/// fail to fit on any fold are skipped. Throws std::invalid_argument for an
/// empty grid, a series with no fold, or when every candidate fails.
Selection rolling_cv_select(std::span<const std::vector<double>> series_set, std::span<const CandidateSpec> grid,
                            const CvOptions& options = {});
Selection rolling_cv_select(std::span<const double> series, std::span<const CandidateSpec> grid,
                            const CvOptions& options = {});

/// Same month one season earlier, repeated for longer horizons.
std::vector<double> seasonal_naive(std::span<const double> series, int horizon);

/// Fits the candidate on the whole series and forecasts `horizon` months.
std::vector<double> fit_and_forecast(const CandidateSpec& spec, std::span<const double> series, int horizon);

}  // namespace vegout::ts
