#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "doctest.h"
#include "vegout/metrics.hpp"
#include "vegout/timeseries/decompose.hpp"
#include "vegout/timeseries/holt_winters.hpp"
#include "vegout/timeseries/rolling_cv.hpp"
#include "vegout/timeseries/sarima.hpp"

using namespace vegout;
using namespace vegout::ts;

namespace {

std::vector<double> seasonal_series(std::size_t n, double base, double slope, double amplitude) {
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t)
        y[t] = base + slope * static_cast<double>(t) +
               amplitude * std::sin(2 * std::numbers::pi * static_cast<double>(t) / 12.0);
    return y;
}

/// Forecast recursion written out term by term: the differenced history is
/// extended with forecasts, future shocks are zero, and the result is
/// integrated by undoing each difference with a running sum.
std::vector<double> oracle_forecast(const SarimaParams& p, const std::vector<double>& y, int h) {
    const auto& o = p.orders;
    std::vector<std::vector<double>> levels{y};
    for (int i = 0; i < o.D; ++i) {
        const auto& prev = levels.back();
        std::vector<double> next;
        for (std::size_t t = 12; t < prev.size(); ++t) next.push_back(prev[t] - prev[t - 12]);
        levels.push_back(next);
    }
    for (int i = 0; i < o.d; ++i) {
        const auto& prev = levels.back();
        std::vector<double> next;
        for (std::size_t t = 1; t < prev.size(); ++t) next.push_back(prev[t] - prev[t - 1]);
        levels.push_back(next);
    }
    std::vector<double> w = levels.back();
    std::vector<double> e = p.residuals;
    for (int step = 0; step < h; ++step) {
        const long t = static_cast<long>(w.size());
        auto at = [&](const std::vector<double>& v, long idx) { return idx >= 0 ? v[static_cast<std::size_t>(idx)] : 0.0; };
        double f = p.mu;
        for (int i = 0; i < o.p; ++i) f += p.phi[i] * at(w, t - 1 - i);
        for (int i = 0; i < o.q; ++i) f += p.theta[i] * at(e, t - 1 - i);
        for (int i = 0; i < o.P; ++i) f += p.seasonal_phi[i] * at(w, t - 12 * (i + 1));
        for (int i = 0; i < o.Q; ++i) f += p.seasonal_theta[i] * at(e, t - 12 * (i + 1));
        w.push_back(f);
        e.push_back(0.0);
    }
    // Undo the differences in reverse order, last applied first.
    std::vector<double> ext(w.end() - h, w.end());
    for (int level = static_cast<int>(levels.size()) - 2; level >= 0; --level) {
        std::vector<double> hist = levels[static_cast<std::size_t>(level)];
        const bool seasonal = level < o.D;
        const std::size_t lag = seasonal ? 12 : 1;
        for (double v : ext) hist.push_back(v + hist[hist.size() - lag]);
        ext.assign(hist.end() - h, hist.end());
    }
    for (double& v : ext) v = std::max(0.0, v);
    return ext;
}

}  // namespace

TEST_CASE("decomposition of a sinusoid, a constant and a ramp") {
    const auto sinus = seasonal_series(48, 20, 0, 3);
    const auto d = decompose(sinus);
    for (std::size_t t = 6; t + 6 < 48; ++t) {
        CHECK(d.trend[t] == doctest::Approx(20).epsilon(1e-9));
        CHECK(d.seasonal[t] == doctest::Approx(sinus[t] - 20).epsilon(1e-6).scale(1));
        CHECK(std::abs(d.residual[t]) < 1e-9);
    }
    CHECK(std::isnan(d.trend[0]));
    CHECK(std::isnan(d.trend[47]));

    const std::vector<double> flat(30, 4.5);
    const auto c = decompose(flat);
    for (std::size_t t = 6; t + 6 < 30; ++t) {
        CHECK(c.trend[t] == doctest::Approx(4.5));
        CHECK(std::abs(c.residual[t]) < 1e-12);
    }
    for (double s : c.seasonal_effects) CHECK(std::abs(s) < 1e-12);

    const auto ramp = seasonal_series(36, 1, 0.5, 0);
    const auto r = decompose(ramp);
    for (std::size_t t = 6; t + 6 < 36; ++t) {
        CHECK(r.trend[t] == doctest::Approx(ramp[t]).epsilon(1e-12));
        CHECK(std::abs(r.residual[t]) < 1e-9);
    }
    for (double s : r.seasonal_effects) CHECK(std::abs(s) < 1e-9);
    CHECK_THROWS_AS(decompose(std::vector<double>(23, 1.0)), std::invalid_argument);
}

TEST_CASE("decomposition reconstructs the series") {
    std::mt19937 rng(2);
    std::normal_distribution<double> g(0, 2);
    auto y = seasonal_series(60, 10, 0.2, 4);
    for (auto& v : y) v += g(rng);
    const auto d = decompose(y);
    double effects = 0;
    for (double s : d.seasonal_effects) effects += s;
    CHECK(std::abs(effects) < 1e-9);
    for (std::size_t t = 0; t < y.size(); ++t)
        if (!std::isnan(d.trend[t])) CHECK(d.trend[t] + d.seasonal[t] + d.residual[t] == doctest::Approx(y[t]).epsilon(1e-9));
}

TEST_CASE("differencing and its polynomial") {
    const std::vector<double> y{1, 4, 9, 16, 25};
    CHECK(difference(y, 1, 0, 12) == std::vector<double>{3, 5, 7, 9});
    CHECK(difference(y, 2, 0, 12) == std::vector<double>{2, 2, 2});
    CHECK(differencing_polynomial(1, 0, 12) == std::vector<double>{1, -1});
    const auto p = differencing_polynomial(1, 1, 12);
    REQUIRE(p.size() == 14);
    CHECK(p[0] == 1);
    CHECK(p[1] == -1);
    CHECK(p[12] == -1);
    CHECK(p[13] == 1);
}

TEST_CASE("SARIMA forecast iteration by hand") {
    SarimaParams p;
    p.orders = {1, 0, 0, 0, 0, 0, 12};
    p.phi = {0.5};
    p.differenced = {1, 3, 4};
    p.residuals = {0, 0, 0};
    const auto w = forecast_differenced(p, 3);
    CHECK(w == std::vector<double>{2, 1, 0.5});

    // Same differenced path integrated once from a last level of 10.
    p.orders.d = 1;
    const std::vector<double> y{2, 3, 6, 10};
    p.differenced = {1, 3, 4};
    p.residuals = {0, 0, 0};
    const auto f = forecast_sarima(p, y, 3);
    CHECK(f[0] == doctest::Approx(12));
    CHECK(f[1] == doctest::Approx(13));
    CHECK(f[2] == doctest::Approx(13.5));

    SarimaParams mean_only;
    mean_only.mu = 5;
    mean_only.differenced = {1, 2, 3};
    mean_only.residuals = {0, 0, 0};
    CHECK(forecast_sarima(mean_only, std::vector<double>{1, 2, 3}, 4) == std::vector<double>(4, 5.0));

    mean_only.mu = -0.3;
    CHECK(forecast_sarima(mean_only, std::vector<double>{1, 2, 3}, 2) == std::vector<double>(2, 0.0));
    CHECK_THROWS_AS(forecast_differenced(mean_only, 0), std::invalid_argument);
}

TEST_CASE("SARIMA forecasts agree with an independent recursion") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coef(-0.6, 0.6), val(0, 30);
    for (const auto& orders : {SarimaOrders{1, 0, 1, 1, 0, 1, 12}, SarimaOrders{1, 1, 0, 0, 1, 1, 12},
                               SarimaOrders{0, 1, 1, 1, 1, 0, 12}, SarimaOrders{1, 0, 0, 1, 1, 0, 12}}) {
        std::vector<double> y(40);
        for (auto& v : y) v = 20 + val(rng);
        SarimaParams p;
        p.orders = orders;
        p.mu = coef(rng);
        for (int i = 0; i < orders.p; ++i) p.phi.push_back(coef(rng));
        for (int i = 0; i < orders.q; ++i) p.theta.push_back(coef(rng));
        for (int i = 0; i < orders.P; ++i) p.seasonal_phi.push_back(coef(rng));
        for (int i = 0; i < orders.Q; ++i) p.seasonal_theta.push_back(coef(rng));
        p.differenced = difference(y, orders.d, orders.D, 12);
        conditional_sse(p, p.differenced, &p.residuals);
        const auto got = forecast_sarima(p, y, 15);
        const auto expected = oracle_forecast(p, y, 15);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-9).scale(1));
    }
}

TEST_CASE("conditional SSE matches a hand computation") {
    SarimaParams p;
    p.orders = {1, 0, 1, 0, 0, 0, 12};
    p.mu = 1;
    p.phi = {0.5};
    p.theta = {0.25};
    const std::vector<double> w{2, 4, 3};
    // t=1: pred = 1 + 0.5*2 + 0.25*0 = 2, e = 2; t=2: pred = 1 + 0.5*4 + 0.25*2 = 3.5, e = -0.5.
    std::vector<double> e;
    CHECK(conditional_sse(p, w, &e) == doctest::Approx(4.25));
    CHECK(e == std::vector<double>{0, 2, -0.5});
}

TEST_CASE("SARIMA white noise and AR(1) estimation") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0, 1);
    std::vector<double> noise(200);
    for (auto& v : noise) v = 10 + g(rng);
    const double mean = std::accumulate(noise.begin(), noise.end(), 0.0) / 200.0;
    const auto wn = fit_sarima(noise, {});
    CHECK(wn.mu == doctest::Approx(mean).epsilon(1e-4));
    for (double f : forecast_sarima(wn, noise, 5)) CHECK(f == doctest::Approx(wn.mu));

    std::vector<double> ar(400);
    double prev = 0;
    for (auto& v : ar) {
        prev = 0.7 * prev + g(rng);
        v = prev;
    }
    const auto fit = fit_sarima(ar, {1, 0, 0, 0, 0, 0, 12});
    REQUIRE(fit.phi.size() == 1);
    CHECK(fit.phi[0] >= 0.6);
    CHECK(fit.phi[0] <= 0.8);
}

TEST_CASE("SARIMA with d = 1 continues a ramp") {
    std::vector<double> ramp(40);
    for (std::size_t t = 0; t < ramp.size(); ++t) ramp[t] = 10 + 2.0 * static_cast<double>(t);
    const auto p = fit_sarima(ramp, {0, 1, 0, 0, 0, 0, 12});
    CHECK(p.mu == doctest::Approx(2.0).epsilon(1e-6));
    for (std::size_t t = 0; t < p.residuals.size(); ++t) CHECK(std::abs(p.residuals[t]) < 1e-5);
    const auto f = forecast_sarima(p, ramp, 6);
    for (int h = 1; h <= 6; ++h) CHECK(f[static_cast<std::size_t>(h - 1)] == doctest::Approx(ramp.back() + 2.0 * h).epsilon(1e-6));
}

TEST_CASE("simplex never ends worse than the zero start") {
    std::mt19937_64 rng(12);
    std::poisson_distribution<int> counts(6);
    const auto grid = default_grid();
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<double> y(36);
        for (auto& v : y) v = counts(rng);
        for (const auto& c : grid) {
            if (c.family != CandidateSpec::Family::sarima) continue;
            const auto p = fit_sarima(y, c.orders);
            const std::vector<double> zero(static_cast<std::size_t>(c.orders.coefficient_count()), 0.0);
            const double zero_sse = conditional_sse(SarimaParams::unpack(c.orders, zero), p.differenced);
            CHECK(p.sse <= zero_sse + 1e-9 * std::max(1.0, zero_sse));
            for (double f : forecast_sarima(p, y, 12)) CHECK(f >= 0.0);
        }
    }
}

TEST_CASE("SARIMA length preconditions") {
    const SarimaOrders o{1, 1, 0, 1, 1, 0, 12};
    CHECK(o.min_length() == 1 + 12 + 1 + 12 + 1);
    CHECK_THROWS_AS(fit_sarima(std::vector<double>(26, 1.0), o), std::invalid_argument);
    CHECK(o.label() == "SARIMA(1,1,0)(1,1,0)[12]");
    const SarimaOrders w{1, 0, 1, 1, 0, 1, 12};
    const auto packed = std::vector<double>{1, 2, 3, 4, 5};
    CHECK(SarimaParams::unpack(w, packed).pack() == packed);
    CHECK_THROWS_AS(SarimaParams::unpack(w, std::vector<double>{1, 2}), std::invalid_argument);
}

TEST_CASE("Holt-Winters one-step recursion by hand") {
    const HwsWeights w{0.3, 0.2, 0.4};
    const double L = 10, B = 1, S = 2, y = 14;
    const auto a = hws_update(L, B, S, y, w, SeasonalMode::additive);
    const double La = 0.3 * (14 - 2) + 0.7 * (10 + 1);
    CHECK(a.level == doctest::Approx(La).epsilon(1e-12));
    CHECK(a.trend == doctest::Approx(0.2 * (La - 10) + 0.8 * 1).epsilon(1e-12));
    CHECK(a.seasonal == doctest::Approx(0.4 * (14 - 11) + 0.6 * 2).epsilon(1e-12));

    const auto m = hws_update(L, B, 1.25, y, w, SeasonalMode::multiplicative);
    const double Lm = 0.3 * (14 / 1.25) + 0.7 * 11;
    CHECK(m.level == doctest::Approx(Lm).epsilon(1e-12));
    CHECK(m.trend == doctest::Approx(0.2 * (Lm - 10) + 0.8).epsilon(1e-12));
    CHECK(m.seasonal == doctest::Approx(0.4 * (14.0 / 11.0) + 0.6 * 1.25).epsilon(1e-12));
}

TEST_CASE("Holt-Winters forecast equation by hand") {
    HwsParams p;
    p.state.level = 10;
    p.state.trend = 1;
    for (std::size_t i = 0; i < 12; ++i) p.state.seasonal[i] = static_cast<double>(i) - 5;
    p.state.seasonal[0] = 2;  // January
    p.next_position = 36;     // next step is a January
    const auto f = forecast_hws(p, 13);
    CHECK(f[0] == doctest::Approx(13));
    CHECK(f[12] == doctest::Approx(10 + 13 + 2));
    CHECK(f[1] == doctest::Approx(10 + 2 + (1 - 5)));

    p.state.trend = 0;
    p.state.seasonal[0] = 0;
    CHECK(forecast_hws(p, 1)[0] == doctest::Approx(10));

    p.mode = SeasonalMode::multiplicative;
    p.state.trend = 1;
    p.state.seasonal[0] = 1.5;
    CHECK(forecast_hws(p, 1)[0] == doctest::Approx(11 * 1.5));
    CHECK(forecast_hws(p, 13)[12] == doctest::Approx(23 * 1.5));

    p.mode = SeasonalMode::additive;
    p.state.level = 1;
    p.state.seasonal[0] = -4;
    CHECK(forecast_hws(p, 1)[0] == 0.0);
}

TEST_CASE("Holt-Winters fixed point and exactness on noiseless series") {
    const std::vector<double> flat(36, 7.0);
    for (auto mode : {SeasonalMode::additive, SeasonalMode::multiplicative}) {
        for (const HwsWeights& w : {HwsWeights{0.1, 0.5, 0.9}, HwsWeights{1, 1, 1}, HwsWeights{0, 0, 0}}) {
            for (double f : forecast_hws(run_hws(flat, mode, w), 24)) CHECK(f == doctest::Approx(7.0).epsilon(1e-12));
        }
        for (double f : forecast_hws(fit_hws(flat, mode), 24)) CHECK(f == doctest::Approx(7.0).epsilon(1e-12));
    }

    std::vector<double> ramp(36);
    for (std::size_t t = 0; t < 36; ++t) ramp[t] = 10 + static_cast<double>(t);
    const auto r = fit_hws(ramp, SeasonalMode::additive);
    const auto fr = forecast_hws(r, 12);
    for (int h = 1; h <= 12; ++h) CHECK(fr[static_cast<std::size_t>(h - 1)] == doctest::Approx(45.0 + h).epsilon(1e-6));

    const auto y = seasonal_series(48, 50, 0.8, 6);
    const auto truth = seasonal_series(60, 50, 0.8, 6);
    const auto fa = forecast_hws(fit_hws(y, SeasonalMode::additive), 12);
    for (std::size_t h = 0; h < 12; ++h) CHECK(std::abs(fa[h] - truth[48 + h]) / truth[48 + h] < 1e-4);

    std::vector<double> ym(48), tm(60);
    for (std::size_t t = 0; t < 60; ++t) {
        tm[t] = (20 + 0.5 * static_cast<double>(t)) * (1 + 0.3 * std::sin(2 * std::numbers::pi * static_cast<double>(t) / 12));
        if (t < 48) ym[t] = tm[t];
    }
    const auto fm = forecast_hws(fit_hws(ym, SeasonalMode::multiplicative), 12);
    for (std::size_t h = 0; h < 12; ++h) CHECK(std::abs(fm[h] - tm[48 + h]) / tm[48 + h] < 0.05);
}

TEST_CASE("Holt-Winters preconditions") {
    CHECK_THROWS_AS(fit_hws(std::vector<double>(23, 1.0), SeasonalMode::additive), std::invalid_argument);
    std::vector<double> zeros(36, 3.0);
    zeros[5] = 0;
    CHECK_THROWS_AS(fit_hws(zeros, SeasonalMode::multiplicative), std::invalid_argument);
    CHECK_NOTHROW(fit_hws(zeros, SeasonalMode::additive));
    CHECK_THROWS_AS(forecast_hws(HwsParams{}, 0), std::invalid_argument);
}

TEST_CASE("rolling folds") {
    const auto f = rolling_folds(36, {});
    REQUIRE(f.size() == 3);
    CHECK(f[0].train_size == 24);
    CHECK(f[0].validation_size == 12);
    CHECK(f[1].train_size == 28);
    CHECK(f[1].validation_size == 8);
    CHECK(f[2].train_size == 32);
    CHECK(f[2].validation_size == 4);
    CHECK(rolling_folds(24, {}).empty());
    CHECK(rolling_folds(60, {}).size() == 9);
    for (const auto& fold : rolling_folds(60, {})) CHECK(fold.train_size + fold.validation_size <= 60);
}

TEST_CASE("default grid") {
    const auto grid = default_grid();
    int sarima = 0, hws = 0;
    for (const auto& c : grid) {
        if (c.family == CandidateSpec::Family::sarima) {
            ++sarima;
            CHECK(c.orders.coefficient_count() <= 4);
        } else {
            ++hws;
        }
    }
    CHECK(sarima == 60);
    CHECK(hws == 2);
    CHECK(grid.back().label() == "HWS(multiplicative)");
}

TEST_CASE("rolling CV picks the seasonal model on a strongly seasonal series") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0, 0.5);
    auto y = seasonal_series(48, 30, 0.1, 10);
    for (auto& v : y) v += g(rng);
    CandidateSpec hws;
    hws.family = CandidateSpec::Family::hws;
    CandidateSpec noise;  // SARIMA(0,0,0)(0,0,0)
    const std::vector<CandidateSpec> grid{noise, hws};
    const auto sel = rolling_cv_select(y, grid);
    CHECK(sel.best == hws);
    CHECK(sel.scores.size() == 2);
    CHECK(sel.scores[1].mean_nmae < sel.scores[0].mean_nmae);

    const std::vector<CandidateSpec> single{noise};
    CHECK(rolling_cv_select(y, single).best == noise);

    // Every score is the mean NMAE of refits on the expanding prefixes.
    const auto folds = rolling_folds(y.size(), {});
    double total = 0;
    for (const auto& fold : folds) {
        const std::vector<double> train(y.begin(), y.begin() + static_cast<long>(fold.train_size));
        const std::vector<double> actual(y.begin() + static_cast<long>(fold.train_size),
                                         y.begin() + static_cast<long>(fold.train_size + fold.validation_size));
        total += nmae(fit_and_forecast(hws, train, static_cast<int>(fold.validation_size)), actual);
    }
    CHECK(sel.scores[1].mean_nmae == doctest::Approx(total / static_cast<double>(folds.size())).epsilon(1e-12));

    CHECK_THROWS_AS(rolling_cv_select(y, std::vector<CandidateSpec>{}), std::invalid_argument);
    CHECK_THROWS_AS(rolling_cv_select(std::vector<double>(20, 1.0), grid), std::invalid_argument);
}

TEST_CASE("rolling CV is deterministic and skips failing candidates") {
    std::mt19937_64 rng(9);
    std::poisson_distribution<int> counts(4);
    std::vector<std::vector<double>> set(3, std::vector<double>(36));
    for (auto& s : set)
        for (auto& v : s) v = counts(rng);
    set[0][3] = 0;  // multiplicative HWS cannot fit
    const auto grid = default_grid();
    const auto a = rolling_cv_select(set, grid);
    const auto b = rolling_cv_select(set, grid);
    CHECK(a.best == b.best);
    CHECK(a.best_nmae == b.best_nmae);
    CHECK(a.scores.back().failed);
    for (const auto& s : a.scores)
        if (!s.failed) CHECK(s.mean_nmae >= a.best_nmae);
    const auto fa = fit_and_forecast(a.best, set[1], 7);
    CHECK(fa == fit_and_forecast(b.best, set[1], 7));
    for (double v : fa) CHECK(v >= 0.0);
}

TEST_CASE("seasonal naive repeats the same month last year") {
    std::vector<double> y(24);
    std::iota(y.begin(), y.end(), 0.0);
    const auto f = seasonal_naive(y, 14);
    for (std::size_t h = 0; h < 14; ++h) CHECK(f[h] == static_cast<double>(12 + h % 12));
}
