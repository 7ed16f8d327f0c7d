#include "vegout/timeseries/decompose.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vegout::ts {

Decomposition decompose(std::span<const double> series) {
    constexpr int m = kSeasonLength;
    const std::size_t n = series.size();
    if (n < 2 * static_cast<std::size_t>(m)) throw std::invalid_argument("decompose: need at least two seasons");

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    Decomposition d;
    d.trend.assign(n, nan);
    d.residual.assign(n, nan);
    d.seasonal.assign(n, 0.0);

    const std::size_t half = m / 2;
    for (std::size_t t = half; t + half < n; ++t) {
        double s = 0.5 * (series[t - half] + series[t + half]);
        for (std::size_t j = t - half + 1; j < t + half; ++j) s += series[j];
        d.trend[t] = s / m;
    }

    std::array<double, m> sum{};
    std::array<int, m> cnt{};
    for (std::size_t t = 0; t < n; ++t) {
        if (std::isnan(d.trend[t])) continue;
        sum[t % m] += series[t] - d.trend[t];
        ++cnt[t % m];
    }
    double mean = 0.0;
    for (int i = 0; i < m; ++i) {
        d.seasonal_effects[static_cast<std::size_t>(i)] = cnt[static_cast<std::size_t>(i)] ? sum[static_cast<std::size_t>(i)] / cnt[static_cast<std::size_t>(i)] : 0.0;
        mean += d.seasonal_effects[static_cast<std::size_t>(i)];
    }
    mean /= m;
    for (auto& e : d.seasonal_effects) e -= mean;

    for (std::size_t t = 0; t < n; ++t) {
        d.seasonal[t] = d.seasonal_effects[t % m];
        if (!std::isnan(d.trend[t])) d.residual[t] = series[t] - d.trend[t] - d.seasonal[t];
    }
    return d;
}

}  // namespace vegout::ts
