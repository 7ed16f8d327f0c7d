#include "vegout/ml/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "vegout/common.hpp"
#include "vegout/log.hpp"
#include "vegout/simd/kernels.hpp"

namespace vegout::ml {

MlpWeights MlpWeights::initialise(std::size_t inputs, std::size_t hidden, std::uint64_t seed) {
    if (inputs == 0 || hidden == 0) throw std::invalid_argument("mlp: inputs and hidden units must be >= 1");
    MlpWeights w;
    w.inputs = inputs;
    w.hidden = hidden;
    w.flat.assign(size_for(inputs, hidden), 0.0);
    std::mt19937_64 rng(seed);
    const double a1 = std::sqrt(6.0 / static_cast<double>(inputs + hidden));
    const double a2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
    std::uniform_real_distribution<double> u1(-a1, a1), u2(-a2, a2);
    for (std::size_t i = 0; i < hidden * inputs; ++i) w.flat[i] = u1(rng);
    const std::size_t w2 = hidden * inputs + hidden;
    for (std::size_t h = 0; h < hidden; ++h) w.flat[w2 + h] = u2(rng);
    return w;
}

double MlpWeights::forward(std::span<const double> x, std::span<double> hidden_out) const noexcept {
    const double* w1 = flat.data();
    const double* b1 = w1 + hidden * inputs;
    const double* w2 = b1 + hidden;
    std::copy(b1, b1 + hidden, hidden_out.begin());
    for (std::size_t f = 0; f < inputs; ++f) simd::axpy(x[f], {w1 + f * hidden, hidden}, hidden_out.first(hidden));
    for (std::size_t h = 0; h < hidden; ++h) hidden_out[h] = std::tanh(hidden_out[h]);
    return simd::dot({w2, hidden}, {hidden_out.data(), hidden}) + w2[hidden];
}

double mlp_loss(const MlpWeights& weights, const Matrix& x, std::span<const double> y, std::vector<double>* gradient) {
    const std::size_t n = x.rows, H = weights.hidden, F = weights.inputs;
    if (n == 0 || y.size() != n || x.cols != F) throw std::invalid_argument("mlp: data does not match the network");
    if (gradient) gradient->assign(weights.flat.size(), 0.0);
    const double* w2 = weights.flat.data() + H * F + H;
    std::vector<double> act(H), delta(H);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.row(i);
        const double out = weights.forward(xi, act);
        const double r = out - y[i];
        loss += r * r;
        if (!gradient) continue;
        const double g = 2.0 * r / static_cast<double>(n);
        double* gw1 = gradient->data();
        double* gb1 = gw1 + H * F;
        double* gw2 = gb1 + H;
        simd::axpy(g, act, {gw2, H});
        gw2[H] += g;
        for (std::size_t h = 0; h < H; ++h) delta[h] = g * w2[h] * (1.0 - act[h] * act[h]);
        simd::axpy(1.0, delta, {gb1, H});
        for (std::size_t f = 0; f < F; ++f) simd::axpy(xi[f], delta, {gw1 + f * H, H});
    }
    return loss / static_cast<double>(n);
}

MlpTraining train_mlp(MlpWeights& weights, const Matrix& x, std::span<const double> y, int epochs,
                      double learning_rate) {
    if (epochs < 0) throw std::invalid_argument("mlp: epochs must be >= 0");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("mlp: learning rate must be positive");
    const MlpWeights initial = weights;
    MlpTraining t;
    double rate = learning_rate;
    std::vector<double> grad;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        weights = initial;
        t.loss_history.clear();
        bool diverged = false;
        for (int e = 0; e < epochs; ++e) {
            const double loss = mlp_loss(weights, x, y, &grad);
            if (!std::isfinite(loss)) {
                diverged = true;
                break;
            }
            t.loss_history.push_back(loss);
            simd::axpy(-rate, grad, weights.flat);
        }
        if (!diverged) {
            t.learning_rate = rate;
            t.restarts = attempt;
            return t;
        }
        logger().warn("mlp: loss diverged at rate {}; restarting at {}", rate, rate / 2.0);
        rate /= 2.0;
    }
    weights = initial;
    throw NumericError(fmt::format("mlp: training diverged after 3 restarts (final rate {})", rate * 2.0));
}

double Mlp::predict_raw(std::span<const double> features) const {
    std::vector<double> z(features.size()), act(weights_.hidden);
    features_.apply_row(features, z);
    return target_.inverse(weights_.forward(z, act));
}

Mlp fit_mlp(const Dataset& data, const Hyperparameters& hp) {
    data.validate();
    if (data.size() == 0) throw std::invalid_argument("mlp: empty dataset");
    if (hp.hidden_units < 1) throw std::invalid_argument("mlp: hidden units must be >= 1");
    Standardizer scaling = Standardizer::fit(data.x);
    const Matrix z = scaling.apply(data.x);
    const TargetScaler ts = TargetScaler::fit(data.y);
    std::vector<double> yz(data.size());
    for (std::size_t i = 0; i < yz.size(); ++i) yz[i] = ts.forward(data.y[i]);
    MlpWeights w = MlpWeights::initialise(data.features(), static_cast<std::size_t>(hp.hidden_units), hp.seed);
    MlpTraining training = train_mlp(w, z, yz, hp.epochs, hp.learning_rate);
    return Mlp(hp, std::move(scaling), ts, std::move(w), std::move(training));
}

}  // namespace vegout::ml
