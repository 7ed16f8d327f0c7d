#include "vegout/timeseries/sarima.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "vegout/common.hpp"

namespace vegout::ts {

namespace {

constexpr double kPenalty = 1e300;

struct ObjectiveData {
    SarimaOrders orders;
    std::span<const double> w;
};

double gsl_objective(const gsl_vector* x, void* data) {
    const auto* d = static_cast<const ObjectiveData*>(data);
    const std::span<const double> packed(x->data, x->size);
    const double sse = conditional_sse(SarimaParams::unpack(d->orders, packed), d->w);
    return std::isfinite(sse) ? sse : kPenalty;
}

struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer* m) const noexcept { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
    void operator()(gsl_vector* v) const noexcept { gsl_vector_free(v); }
};
using MinimizerPtr = std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter>;
using VectorPtr = std::unique_ptr<gsl_vector, VectorDeleter>;

VectorPtr make_vector(std::span<const double> v) {
    VectorPtr out(gsl_vector_alloc(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) gsl_vector_set(out.get(), i, v[i]);
    return out;
}

/// One simplex descent; returns the best point and its value.
std::pair<std::vector<double>, double> simplex(ObjectiveData& data, std::span<const double> start,
                                               std::span<const double> steps, int& evaluations) {
    const std::size_t dim = start.size();
    gsl_multimin_function fn{&gsl_objective, dim, &data};
    MinimizerPtr m(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim));
    VectorPtr x = make_vector(start);
    VectorPtr s = make_vector(steps);
    gsl_multimin_fminimizer_set(m.get(), &fn, x.get(), s.get());
    int status = GSL_CONTINUE;
    for (int iter = 0; iter < 4000 && status == GSL_CONTINUE; ++iter) {
        if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
        ++evaluations;
        status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(m.get()), 1e-9);
    }
    const gsl_vector* best = gsl_multimin_fminimizer_x(m.get());
    return {std::vector<double>(best->data, best->data + dim), gsl_multimin_fminimizer_minimum(m.get())};
}

}  // namespace

std::size_t SarimaOrders::min_length() const noexcept {
    return static_cast<std::size_t>(d + D * season + std::max(p, q) + season * std::max(P, Q)) + 1;
}

std::string SarimaOrders::label() const {
    return fmt::format("SARIMA({},{},{})({},{},{})[{}]", p, d, q, P, D, Q, season);
}

std::vector<double> SarimaParams::pack() const {
    std::vector<double> v{mu};
    v.insert(v.end(), phi.begin(), phi.end());
    v.insert(v.end(), theta.begin(), theta.end());
    v.insert(v.end(), seasonal_phi.begin(), seasonal_phi.end());
    v.insert(v.end(), seasonal_theta.begin(), seasonal_theta.end());
    return v;
}

SarimaParams SarimaParams::unpack(const SarimaOrders& orders, std::span<const double> packed) {
    if (packed.size() != static_cast<std::size_t>(orders.coefficient_count()))
        throw std::invalid_argument("packed SARIMA vector has the wrong length");
    SarimaParams p;
    p.orders = orders;
    auto it = packed.begin();
    p.mu = *it++;
    auto take = [&](int n, std::vector<double>& dst) {
        dst.assign(it, it + n);
        it += n;
    };
    take(orders.p, p.phi);
    take(orders.q, p.theta);
    take(orders.P, p.seasonal_phi);
    take(orders.Q, p.seasonal_theta);
    return p;
}

std::vector<double> difference(std::span<const double> y, int d, int D, int season) {
    std::vector<double> w(y.begin(), y.end());
    for (int i = 0; i < D; ++i) {
        if (w.size() <= static_cast<std::size_t>(season)) return {};
        std::vector<double> next(w.size() - static_cast<std::size_t>(season));
        for (std::size_t t = 0; t < next.size(); ++t) next[t] = w[t + static_cast<std::size_t>(season)] - w[t];
        w = std::move(next);
    }
    for (int i = 0; i < d; ++i) {
        if (w.size() <= 1) return {};
        std::vector<double> next(w.size() - 1);
        for (std::size_t t = 0; t < next.size(); ++t) next[t] = w[t + 1] - w[t];
        w = std::move(next);
    }
    return w;
}

std::vector<double> differencing_polynomial(int d, int D, int season) {
    std::vector<double> poly{1.0};
    auto multiply = [&](std::size_t lag) {
        std::vector<double> next(poly.size() + lag, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + lag] -= poly[i];
        }
        poly = std::move(next);
    };
    for (int i = 0; i < d; ++i) multiply(1);
    for (int i = 0; i < D; ++i) multiply(static_cast<std::size_t>(season));
    return poly;
}

double conditional_sse(const SarimaParams& params, std::span<const double> w, std::vector<double>* residuals) {
    const auto& o = params.orders;
    const std::size_t s = static_cast<std::size_t>(o.season);
    const std::size_t start = std::max(static_cast<std::size_t>(o.p), s * static_cast<std::size_t>(o.P));
    std::vector<double> e(w.size(), 0.0);
    double sse = 0.0;
    for (std::size_t t = start; t < w.size(); ++t) {
        double pred = params.mu;
        for (std::size_t i = 1; i <= params.phi.size(); ++i) pred += params.phi[i - 1] * w[t - i];
        for (std::size_t i = 1; i <= params.theta.size() && i <= t; ++i) pred += params.theta[i - 1] * e[t - i];
        for (std::size_t i = 1; i <= params.seasonal_phi.size(); ++i) pred += params.seasonal_phi[i - 1] * w[t - i * s];
        for (std::size_t i = 1; i <= params.seasonal_theta.size() && i * s <= t; ++i)
            pred += params.seasonal_theta[i - 1] * e[t - i * s];
        e[t] = w[t] - pred;
        sse += e[t] * e[t];
    }
    if (residuals) *residuals = std::move(e);
    return sse;
}

SarimaParams fit_sarima(std::span<const double> series, const SarimaOrders& orders) {
    if (orders.p < 0 || orders.d < 0 || orders.q < 0 || orders.P < 0 || orders.D < 0 || orders.Q < 0 || orders.season < 1)
        throw std::invalid_argument("SARIMA orders must be non-negative");
    if (series.size() < orders.min_length())
        throw std::invalid_argument(fmt::format("{} needs more than {} observations, got {}", orders.label(),
                                                orders.min_length() - 1, series.size()));
    gsl_set_error_handler_off();

    std::vector<double> w = difference(series, orders.d, orders.D, orders.season);
    const std::size_t dim = static_cast<std::size_t>(orders.coefficient_count());

    const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
    double var = 0.0;
    for (double v : w) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(w.size()));
    std::vector<double> steps(dim, 0.1);
    steps[0] = std::max({0.1, std::abs(mean), sd});

    ObjectiveData data{orders, w};
    const std::vector<double> zero(dim, 0.0);
    const double zero_sse = conditional_sse(SarimaParams::unpack(orders, zero), w);

    int evaluations = 0;
    std::vector<double> best = zero;
    double best_sse = std::isfinite(zero_sse) ? zero_sse : kPenalty;
    std::vector<double> start = zero;
    for (int attempt = 0; attempt < 4; ++attempt) {
        // Restarting from the incumbent guards against a collapsed simplex.
        auto [x, f] = simplex(data, start, steps, evaluations);
        if (f < best_sse) {
            best = x;
            best_sse = f;
        }
        if (best_sse < kPenalty) {
            start = best;
            for (std::size_t i = 1; i < dim; ++i) steps[i] = 0.05;
            steps[0] = std::max(0.01, 0.1 * sd);
        } else {
            // Non-finite everywhere so far: perturb deterministically and retry.
            for (std::size_t i = 0; i < dim; ++i) start[i] = 0.01 * static_cast<double>((i + attempt) % 3) - 0.01;
        }
    }
    if (!(best_sse < kPenalty)) throw NumericError(orders.label() + ": objective is not finite");

    SarimaParams p = SarimaParams::unpack(orders, best);
    p.sse = conditional_sse(p, w, &p.residuals);
    p.first_usable = std::max(static_cast<std::size_t>(orders.p),
                              static_cast<std::size_t>(orders.season) * static_cast<std::size_t>(orders.P));
    p.differenced = std::move(w);
    p.evaluations = evaluations;
    return p;
}

std::vector<double> forecast_differenced(const SarimaParams& params, int horizon) {
    if (horizon < 1) throw std::invalid_argument("forecast horizon must be >= 1");
    const std::size_t s = static_cast<std::size_t>(params.orders.season);
    std::vector<double> w = params.differenced;
    std::vector<double> e = params.residuals;
    e.resize(w.size(), 0.0);
    const std::size_t n = w.size();
    for (int h = 0; h < horizon; ++h) {
        const std::size_t t = w.size();
        double pred = params.mu;
        auto lag = [&](const std::vector<double>& v, std::size_t k) { return k <= t ? v[t - k] : 0.0; };
        for (std::size_t i = 1; i <= params.phi.size(); ++i) pred += params.phi[i - 1] * lag(w, i);
        for (std::size_t i = 1; i <= params.theta.size(); ++i) pred += params.theta[i - 1] * lag(e, i);
        for (std::size_t i = 1; i <= params.seasonal_phi.size(); ++i) pred += params.seasonal_phi[i - 1] * lag(w, i * s);
        for (std::size_t i = 1; i <= params.seasonal_theta.size(); ++i)
            pred += params.seasonal_theta[i - 1] * lag(e, i * s);
        w.push_back(pred);
        e.push_back(0.0);
    }
    return {w.begin() + static_cast<std::ptrdiff_t>(n), w.end()};
}

std::vector<double> forecast_sarima(const SarimaParams& params, std::span<const double> series, int horizon) {
    const std::vector<double> wf = forecast_differenced(params, horizon);
    const std::vector<double> poly = differencing_polynomial(params.orders.d, params.orders.D, params.orders.season);
    std::vector<double> y(series.begin(), series.end());
    for (double wv : wf) {
        // y_t = w_t - sum_{j>=1} c_j y_{t-j}
        double v = wv;
        const std::size_t t = y.size();
        for (std::size_t j = 1; j < poly.size(); ++j) v -= poly[j] * y[t - j];
        y.push_back(v);
    }
    std::vector<double> out(y.end() - horizon, y.end());
    for (double& v : out) v = std::max(0.0, v);
    return out;
}

}  // namespace vegout::ts
