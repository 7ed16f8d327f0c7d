#include "vegout/timeseries/holt_winters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace vegout::ts {

namespace {

constexpr std::size_t m = kSeasonLength;

void validate(std::span<const double> series, SeasonalMode mode) {
    if (series.size() < 2 * m) throw std::invalid_argument("Holt-Winters needs at least two seasons");
    if (mode == SeasonalMode::multiplicative &&
        std::any_of(series.begin(), series.end(), [](double v) { return !(v > 0.0); }))
        throw std::invalid_argument("multiplicative Holt-Winters requires strictly positive values");
}

// Moves the seasonal mean into the level so the states stay centred.
void normalise(HwsState& s, SeasonalMode mode) {
    const double mean = std::accumulate(s.seasonal.begin(), s.seasonal.end(), 0.0) / m;
    if (mode == SeasonalMode::additive) {
        for (double& v : s.seasonal) v -= mean;
        s.level += mean;
    } else if (mean > 0.0) {
        for (double& v : s.seasonal) v /= mean;
        s.level *= mean;
        s.trend *= mean;
    }
}

}  // namespace

std::string_view mode_name(SeasonalMode mode) noexcept {
    return mode == SeasonalMode::additive ? "additive" : "multiplicative";
}

HwsUpdate hws_update(double level, double trend, double seasonal, double y, const HwsWeights& w,
                     SeasonalMode mode) noexcept {
    HwsUpdate u{};
    if (mode == SeasonalMode::additive) {
        u.level = w.alpha * (y - seasonal) + (1.0 - w.alpha) * (level + trend);
        u.seasonal = w.gamma * (y - level - trend) + (1.0 - w.gamma) * seasonal;
    } else {
        u.level = w.alpha * (y / seasonal) + (1.0 - w.alpha) * (level + trend);
        u.seasonal = w.gamma * (y / (level + trend)) + (1.0 - w.gamma) * seasonal;
    }
    u.trend = w.beta * (u.level - level) + (1.0 - w.beta) * trend;
    return u;
}

HwsState initial_state(std::span<const double> series, SeasonalMode mode) {
    validate(series, mode);
    const double mean1 = std::accumulate(series.begin(), series.begin() + m, 0.0) / m;
    const double mean2 = std::accumulate(series.begin() + m, series.begin() + 2 * m, 0.0) / m;
    HwsState s;
    s.trend = (mean2 - mean1) / static_cast<double>(m);
    const double centre = (static_cast<double>(m) - 1.0) / 2.0;
    s.level = mean1 + centre * s.trend;
    for (std::size_t i = 0; i < m; ++i) {
        const double line = mean1 + (static_cast<double>(i) - centre) * s.trend;
        if (mode == SeasonalMode::additive) {
            s.seasonal[i] = series[i] - line;
        } else {
            s.seasonal[i] = series[i] / (line > 0.0 ? line : mean1);
        }
    }
    return s;
}

HwsParams run_hws(std::span<const double> series, SeasonalMode mode, const HwsWeights& weights) {
    HwsParams p;
    p.weights = weights;
    p.mode = mode;
    p.state = initial_state(series, mode);
    double sse = 0.0;
    HwsState& s = p.state;
    for (std::size_t t = m; t < series.size(); ++t) {
        double& season = s.seasonal[t % m];
        const double fitted = mode == SeasonalMode::additive ? s.level + s.trend + season
                                                             : (s.level + s.trend) * season;
        const double err = series[t] - fitted;
        sse += err * err;
        const HwsUpdate u = hws_update(s.level, s.trend, season, series[t], weights, mode);
        s.level = u.level;
        s.trend = u.trend;
        season = u.seasonal;
    }
    p.sse = std::isfinite(sse) ? sse : std::numeric_limits<double>::infinity();
    p.next_position = series.size();
    normalise(p.state, mode);
    return p;
}

HwsParams fit_hws(std::span<const double> series, SeasonalMode mode, double step) {
    validate(series, mode);
    if (!(step > 0.0) || step > 1.0) throw std::invalid_argument("grid step must be in (0, 1]");
    const int n = static_cast<int>(std::lround(1.0 / step));
    HwsParams best;
    best.sse = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b)
            for (int g = 0; g <= n; ++g) {
                const HwsWeights w{a / static_cast<double>(n), b / static_cast<double>(n), g / static_cast<double>(n)};
                HwsParams p = run_hws(series, mode, w);
                if (!found || p.sse < best.sse) {
                    best = p;
                    found = true;
                }
            }
    return best;
}

std::vector<double> forecast_hws(const HwsParams& params, int horizon) {
    if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    const HwsState& s = params.state;
    for (int h = 1; h <= horizon; ++h) {
        const double season = s.seasonal[(params.next_position + static_cast<std::size_t>(h) - 1) % m];
        const double base = s.level + h * s.trend;
        const double v = params.mode == SeasonalMode::additive ? base + season : base * season;
        out.push_back(std::max(0.0, v));
    }
    return out;
}

}  // namespace vegout::ts
