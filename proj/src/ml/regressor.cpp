#include "vegout/ml/regressor.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "vegout/ml/mlp.hpp"
#include "vegout/ml/random_forest.hpp"
#include "vegout/ml/svr.hpp"

namespace vegout::ml {

std::string_view family_name(Family f) noexcept {
    switch (f) {
        case Family::rf: return "RF";
        case Family::svr: return "SVR";
        case Family::mlp: return "MLP";
    }
    return "?";
}

double Hyperparameters::capacity() const noexcept {
    switch (family) {
        case Family::rf: return trees * 100.0 + max_depth - 1.0 / min_leaf;
        case Family::svr: return C / (kernel_width * (1.0 + epsilon));
        case Family::mlp: return hidden_units;
    }
    return 0.0;
}

std::string Hyperparameters::label() const {
    switch (family) {
        case Family::rf: return fmt::format("RF(trees={},depth={},min_leaf={})", trees, max_depth, min_leaf);
        case Family::svr: return fmt::format("SVR(width={},C={},epsilon={})", kernel_width, C, epsilon);
        case Family::mlp: return fmt::format("MLP(units={},epochs={},rate={})", hidden_units, epochs, learning_rate);
    }
    return {};
}

std::vector<double> Regressor::predict(const Matrix& x) const {
    std::vector<double> out(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) out[i] = std::max(0.0, predict_raw(x.row(i)));
    return out;
}

std::unique_ptr<Regressor> fit(const Dataset& data, const Hyperparameters& hp) {
    switch (hp.family) {
        case Family::rf: return std::make_unique<RandomForest>(fit_rf(data, hp));
        case Family::svr: return std::make_unique<Svr>(fit_svr(data, hp));
        case Family::mlp: return std::make_unique<Mlp>(fit_mlp(data, hp));
    }
    return nullptr;
}

}  // namespace vegout::ml
