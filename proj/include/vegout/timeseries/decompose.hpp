#pragma once

#include <array>
#include <span>
#include <vector>

#include "vegout/timeseries/series.hpp"

namespace vegout::ts {

/// Additive classical decomposition. Entries where the centred moving average
/// is undefined (the first and last six months) hold NaN in `trend` and
/// `residual`.
struct Decomposition {
    std::vector<double> trend;
    std::array<double, kSeasonLength> seasonal_effects{};  // indexed by position mod 12, zero-mean
    std::vector<double> seasonal;                          // effects laid out along the series
    std::vector<double> residual;
};

/// Trend by the centred 2x12 moving average; seasonal effects are the
/// position-wise means of the detrended values, centred to zero mean.
/// Throws std::invalid_argument for fewer than 24 observations.
Decomposition decompose(std::span<const double> series);

}  // namespace vegout::ts
