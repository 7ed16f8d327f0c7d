#include "vegout/ml/svr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vegout/log.hpp"
#include "vegout/simd/kernels.hpp"

namespace vegout::ml {

namespace {

constexpr double kTau = 1e-12;

}  // namespace

SvrSolution solve_svr(const Matrix& x, std::span<const double> y, double gamma, double C, double epsilon,
                      double tolerance, long max_iterations) {
    const std::size_t n = x.rows;
    if (n == 0 || y.size() != n) throw std::invalid_argument("svr: empty or mismatched training data");
    if (!(C > 0.0) || epsilon < 0.0 || !(gamma > 0.0)) throw std::invalid_argument("svr: invalid C, epsilon or gamma");

    Matrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) simd::rbf_row(x.row(i), x.data, gamma, k.row(i));

    // Variables 0..n-1 are alpha (sign +1), n..2n-1 are alpha* (sign -1).
    const std::size_t l = 2 * n;
    std::vector<double> alpha(l, 0.0), grad(l);
    std::vector<signed char> sign(l);
    for (std::size_t i = 0; i < n; ++i) {
        sign[i] = 1;
        sign[i + n] = -1;
        grad[i] = epsilon - y[i];
        grad[i + n] = epsilon + y[i];
    }
    auto q = [&](std::size_t a, std::size_t b) { return sign[a] * sign[b] * k.at(a % n, b % n); };
    auto upper = [&](std::size_t t) { return alpha[t] >= C; };
    auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    SvrSolution sol;
    for (;;) {
        double gmax = -std::numeric_limits<double>::infinity(), gmax2 = gmax;
        std::size_t i = l, j = l;
        for (std::size_t t = 0; t < l; ++t) {
            if (sign[t] == 1) {
                if (!upper(t) && -grad[t] > gmax) gmax = -grad[t], i = t;
                if (!lower(t) && grad[t] > gmax2) gmax2 = grad[t], j = t;
            } else {
                if (!lower(t) && grad[t] > gmax) gmax = grad[t], i = t;
                if (!upper(t) && -grad[t] > gmax2) gmax2 = -grad[t], j = t;
            }
        }
        sol.gap = gmax + gmax2;
        if (i == l || j == l || sol.gap < tolerance) break;
        if (sol.iterations >= max_iterations) {
            sol.converged = false;
            logger().warn("svr: stopped at iteration cap with violation {:.3g} (tolerance {:.3g})", sol.gap,
                          tolerance);
            break;
        }
        ++sol.iterations;

        const double qii = q(i, i), qjj = q(j, j), qij = q(i, j);
        const double old_i = alpha[i], old_j = alpha[j];
        if (sign[i] != sign[j]) {
            double quad = qii + qjj + 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) alpha[j] = 0.0, alpha[i] = diff;
            } else {
                if (alpha[i] < 0.0) alpha[i] = 0.0, alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > C) alpha[i] = C, alpha[j] = C - diff;
            } else {
                if (alpha[j] > C) alpha[j] = C, alpha[i] = C + diff;
            }
        } else {
            double quad = qii + qjj - 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) alpha[i] = C, alpha[j] = sum - C;
            } else {
                if (alpha[j] < 0.0) alpha[j] = 0.0, alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) alpha[j] = C, alpha[i] = sum - C;
            } else {
                if (alpha[i] < 0.0) alpha[i] = 0.0, alpha[j] = sum;
            }
        }
        const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
        const auto ki = k.row(i % n), kj = k.row(j % n);
        const double si = sign[i] * di, sj = sign[j] * dj;
        for (std::size_t t = 0; t < n; ++t) {
            const double change = si * ki[t] + sj * kj[t];
            grad[t] += change;
            grad[t + n] -= change;
        }
    }

    // Bias from free variables, else the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
    std::size_t free = 0;
    for (std::size_t t = 0; t < l; ++t) {
        const double yg = sign[t] * grad[t];
        if (upper(t)) {
            if (sign[t] == -1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (lower(t)) {
            if (sign[t] == 1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++free;
            sum_free += yg;
        }
    }
    const double rho = free > 0 ? sum_free / static_cast<double>(free) : 0.5 * (ub + lb);
    sol.bias = -rho;
    sol.coef.resize(n);
    for (std::size_t t = 0; t < n; ++t) sol.coef[t] = alpha[t] - alpha[t + n];
    return sol;
}

Svr::Svr(Hyperparameters hp, Standardizer features, TargetScaler target, Matrix support, std::vector<double> coef,
         double bias, SvrSolution diagnostics)
    : hp_(hp),
      features_(std::move(features)),
      target_(target),
      support_(std::move(support)),
      coef_(std::move(coef)),
      bias_(bias),
      diag_(std::move(diagnostics)) {}

double Svr::gamma() const noexcept { return 1.0 / (2.0 * hp_.kernel_width * hp_.kernel_width); }

double Svr::predict_raw(std::span<const double> features) const {
    std::vector<double> z(features.size());
    features_.apply_row(features, z);
    double f = bias_;
    if (!coef_.empty()) {
        std::vector<double> kr(coef_.size());
        simd::rbf_row(z, support_.data, gamma(), kr);
        f += simd::dot(coef_, kr);
    }
    return target_.inverse(f);
}

Svr fit_svr(const Dataset& data, const Hyperparameters& hp) {
    data.validate();
    if (data.size() == 0) throw std::invalid_argument("svr: empty dataset");
    return fit_svr(data, hp, Standardizer::fit(data.x));
}

Svr fit_svr(const Dataset& data, const Hyperparameters& hp, const Standardizer& scaling) {
    data.validate();
    if (data.size() == 0) throw std::invalid_argument("svr: empty dataset");
    if (!(hp.kernel_width > 0.0)) throw std::invalid_argument("svr: kernel width must be positive");
    const Matrix z = scaling.apply(data.x);
    const TargetScaler ts = TargetScaler::fit(data.y);
    std::vector<double> yz(data.size());
    for (std::size_t i = 0; i < yz.size(); ++i) yz[i] = ts.forward(data.y[i]);
    const double gamma = 1.0 / (2.0 * hp.kernel_width * hp.kernel_width);
    SvrSolution sol = solve_svr(z, yz, gamma, hp.C, hp.epsilon);

    std::vector<std::size_t> sv;
    std::vector<double> coef;
    for (std::size_t i = 0; i < sol.coef.size(); ++i)
        if (sol.coef[i] != 0.0) {
            sv.push_back(i);
            coef.push_back(sol.coef[i]);
        }
    const double bias = sol.bias;
    return Svr(hp, scaling, ts, z.select_rows(sv), std::move(coef), bias, std::move(sol));
}

}  // namespace vegout::ml
