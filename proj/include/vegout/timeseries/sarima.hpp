#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "vegout/timeseries/series.hpp"

namespace vegout::ts {

struct SarimaOrders {
    int p = 0, d = 0, q = 0;
    int P = 0, D = 0, Q = 0;
    int season = kSeasonLength;

    /// Estimated coefficients including the mean.
    [[nodiscard]] int coefficient_count() const noexcept { return 1 + p + q + P + Q; }
    /// Shortest series the orders can be fitted to.
    [[nodiscard]] std::size_t min_length() const noexcept;
    [[nodiscard]] std::string label() const;
    auto operator<=>(const SarimaOrders&) const = default;
};

/// Fitted coefficients of the additive-lag forecast equation
///   w_t = mu + sum phi_i w_{t-i} + sum theta_i e_{t-i}
///            + sum Phi_i w_{t-i*s} + sum Theta_i e_{t-i*s} + e_t
/// on the differenced series w.
struct SarimaParams {
    SarimaOrders orders;
    double mu = 0.0;
    std::vector<double> phi, theta, seasonal_phi, seasonal_theta;
    std::vector<double> differenced;  // w
    std::vector<double> residuals;    // in-sample e_t, zero before the first usable index
    std::size_t first_usable = 0;
    double sse = 0.0;
    int evaluations = 0;

    /// Packs (mu, phi, theta, Phi, Theta) into one vector.
    [[nodiscard]] std::vector<double> pack() const;
    static SarimaParams unpack(const SarimaOrders& orders, std::span<const double> packed);
};

/// Applies (1 - B)^d (1 - B^s)^D.
std::vector<double> difference(std::span<const double> y, int d, int D, int season);

/// Coefficients c_0..c_L of (1 - B)^d (1 - B^s)^D; c_0 = 1.
std::vector<double> differencing_polynomial(int d, int D, int season);

/// Conditional sum of squared one-step residuals on the differenced series.
/// Residuals before the first usable index (max(p, s*P)) are zero.
double conditional_sse(const SarimaParams& params, std::span<const double> differenced,
                       std::vector<double>* residuals = nullptr);

/// Minimizes the conditional SSE with a Nelder-Mead simplex started at the
/// zero vector. Throws std::invalid_argument when the series is too short and
/// NumericError when no finite objective can be reached.
SarimaParams fit_sarima(std::span<const double> series, const SarimaOrders& orders);

/// Iterates the forecast equation on the differenced scale with future
/// residuals set to zero. No clamping.
std::vector<double> forecast_differenced(const SarimaParams& params, int horizon);

/// Differenced-scale forecasts integrated back onto the original scale and
/// clamped at zero. `series` must be the series the params were fitted on.
std::vector<double> forecast_sarima(const SarimaParams& params, std::span<const double> series, int horizon);

}  // namespace vegout::ts
