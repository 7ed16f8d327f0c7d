#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "vegout/timeseries/series.hpp"

namespace vegout::ts {

enum class SeasonalMode { additive, multiplicative };

std::string_view mode_name(SeasonalMode mode) noexcept;

struct HwsWeights {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

struct HwsState {
    double level = 0.0;
    double trend = 0.0;
    std::array<double, kSeasonLength> seasonal{};  // indexed by series position mod 12
};

/// Fitted smoothing model. `next_position` is the series position of the
/// first forecast step, so seasonal[(next_position + h - 1) % 12] serves h.
struct HwsParams {
    HwsWeights weights;
    SeasonalMode mode = SeasonalMode::additive;
    HwsState state;
    std::size_t next_position = 0;
    double sse = 0.0;
};

struct HwsUpdate {
    double level, trend, seasonal;
};

/// One recursion step from (L_{t-1}, B_{t-1}, S_{t-12}) and y_t.
HwsUpdate hws_update(double level, double trend, double seasonal, double y, const HwsWeights& w,
                     SeasonalMode mode) noexcept;

/// States after the first season: trend from the difference of the first two
/// seasonal means, level projected to the end of the first season, seasonal
/// states as deviations (or ratios) from that line.
HwsState initial_state(std::span<const double> series, SeasonalMode mode);

/// Runs the recursions with fixed weights from position 12 onward.
HwsParams run_hws(std::span<const double> series, SeasonalMode mode, const HwsWeights& weights);

/// Grid search over [0,1]^3 at `step` minimising in-sample one-step SSE.
/// Throws std::invalid_argument for fewer than 24 values or, in
/// multiplicative mode, non-positive values.
HwsParams fit_hws(std::span<const double> series, SeasonalMode mode, double step = 0.05);

/// Forecasts clamped at zero.
std::vector<double> forecast_hws(const HwsParams& params, int horizon);

}  // namespace vegout::ts
