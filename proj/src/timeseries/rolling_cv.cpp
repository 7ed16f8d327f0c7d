#include "vegout/timeseries/rolling_cv.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "vegout/common.hpp"
#include "vegout/log.hpp"
#include "vegout/metrics.hpp"

namespace vegout::ts {

int CandidateSpec::parameter_count() const noexcept {
    switch (family) {
        case Family::sarima: return orders.coefficient_count();
        case Family::hws: return 3;
        case Family::seasonal_naive: return 0;
    }
    return 0;
}

std::string CandidateSpec::label() const {
    switch (family) {
        case Family::sarima: return orders.label();
        case Family::hws: return fmt::format("HWS({})", mode_name(mode));
        case Family::seasonal_naive: return "SeasonalNaive";
    }
    return {};
}

std::vector<CandidateSpec> default_grid() {
    std::vector<CandidateSpec> grid;
    for (int d = 0; d <= 1; ++d)
        for (int D = 0; D <= 1; ++D)
            for (int p = 0; p <= 1; ++p)
                for (int q = 0; q <= 1; ++q)
                    for (int P = 0; P <= 1; ++P)
                        for (int Q = 0; Q <= 1; ++Q) {
                            CandidateSpec c;
                            c.orders = {p, d, q, P, D, Q, kSeasonLength};
                            if (c.orders.coefficient_count() <= 4) grid.push_back(c);
                        }
    CandidateSpec hws;
    hws.family = CandidateSpec::Family::hws;
    grid.push_back(hws);
    hws.mode = SeasonalMode::multiplicative;
    grid.push_back(hws);
    return grid;
}

std::vector<Fold> rolling_folds(std::size_t length, const CvOptions& options) {
    if (options.window == 0 || options.step == 0 || options.min_train == 0)
        throw std::invalid_argument("cross-validation window, step and minimum training size must be positive");
    std::vector<Fold> folds;
    for (std::size_t origin = options.min_train; origin < length; origin += options.step)
        folds.push_back({origin, std::min(options.window, length - origin)});
    return folds;
}

std::vector<double> seasonal_naive(std::span<const double> series, int horizon) {
    if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    if (series.empty()) throw std::invalid_argument("seasonal naive needs at least one value");
    std::vector<double> out;
    const std::size_t n = series.size();
    const std::size_t m = kSeasonLength;
    for (int h = 1; h <= horizon; ++h) {
        // Histories shorter than a season fall back to the last value.
        const double v = n >= m ? series[n - m + (static_cast<std::size_t>(h) - 1) % m] : series[n - 1];
        out.push_back(std::max(0.0, v));
    }
    return out;
}

std::vector<double> fit_and_forecast(const CandidateSpec& spec, std::span<const double> series, int horizon) {
    switch (spec.family) {
        case CandidateSpec::Family::sarima: return forecast_sarima(fit_sarima(series, spec.orders), series, horizon);
        case CandidateSpec::Family::hws: return forecast_hws(fit_hws(series, spec.mode), horizon);
        case CandidateSpec::Family::seasonal_naive: return seasonal_naive(series, horizon);
    }
    throw std::logic_error("unknown candidate family");
}

Selection rolling_cv_select(std::span<const std::vector<double>> series_set, std::span<const CandidateSpec> grid,
                            const CvOptions& options) {
    if (grid.empty()) throw std::invalid_argument("candidate grid is empty");
    if (series_set.empty()) throw std::invalid_argument("no series to cross-validate");
    std::vector<std::vector<Fold>> folds;
    for (const auto& s : series_set) {
        folds.push_back(rolling_folds(s.size(), options));
        if (folds.back().empty())
            throw std::invalid_argument(
                fmt::format("series of length {} is too short for rolling validation (minimum training {})", s.size(),
                            options.min_train));
    }

    Selection sel;
    const CandidateScore* best = nullptr;
    for (const CandidateSpec& spec : grid) {
        CandidateScore score{spec, {}, 0.0, false};
        for (std::size_t k = 0; k < series_set.size() && !score.failed; ++k) {
            const std::span<const double> s(series_set[k]);
            for (const Fold& f : folds[k]) {
                try {
                    const auto fc = fit_and_forecast(spec, s.first(f.train_size), static_cast<int>(f.validation_size));
                    const double e = nmae(fc, s.subspan(f.train_size, f.validation_size));
                    if (!std::isfinite(e)) throw NumericError("non-finite validation error");
                    score.fold_nmae.push_back(e);
                } catch (const std::exception& ex) {
                    logger().debug("{} skipped: {}", spec.label(), ex.what());
                    score.failed = true;
                    break;
                }
            }
        }
        if (!score.failed) {
            double sum = 0.0;
            for (double e : score.fold_nmae) sum += e;
            score.mean_nmae = sum / static_cast<double>(score.fold_nmae.size());
        }
        sel.scores.push_back(std::move(score));
    }
    for (const CandidateScore& s : sel.scores) {
        if (s.failed) continue;
        if (!best || s.mean_nmae < best->mean_nmae ||
            (s.mean_nmae == best->mean_nmae && s.spec.parameter_count() < best->spec.parameter_count()))
            best = &s;
    }
    if (!best) throw NumericError("every time-series candidate failed to fit");
    sel.best = best->spec;
    sel.best_nmae = best->mean_nmae;
    return sel;
}

Selection rolling_cv_select(std::span<const double> series, std::span<const CandidateSpec> grid,
                            const CvOptions& options) {
    const std::vector<std::vector<double>> one{std::vector<double>(series.begin(), series.end())};
    return rolling_cv_select(std::span<const std::vector<double>>(one), grid, options);
}

}  // namespace vegout::ts
