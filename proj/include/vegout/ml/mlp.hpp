#pragma once

#include <cstdint>
#include <vector>

#include "vegout/ml/regressor.hpp"

namespace vegout::ml {

/// One tanh hidden layer and a linear output. Flat parameter layout:
/// W1 (inputs x hidden, row-major), b1 (hidden), w2 (hidden), b2.
struct MlpWeights {
    std::size_t inputs = 0;
    std::size_t hidden = 0;
    std::vector<double> flat;

    [[nodiscard]] static std::size_t size_for(std::size_t inputs, std::size_t hidden) noexcept {
        return hidden * inputs + 2 * hidden + 1;
    }
    /// Seeded uniform initialisation scaled by fan-in and fan-out; biases 0.
    static MlpWeights initialise(std::size_t inputs, std::size_t hidden, std::uint64_t seed);

    [[nodiscard]] double forward(std::span<const double> x, std::span<double> hidden_out) const noexcept;
};

/// Mean squared error over the rows; fills `gradient` (same layout as
/// `weights.flat`) when non-null.
double mlp_loss(const MlpWeights& weights, const Matrix& x, std::span<const double> y,
                std::vector<double>* gradient = nullptr);

struct MlpTraining {
    std::vector<double> loss_history;  // per epoch, final attempt
    double learning_rate = 0.0;        // rate that completed training
    int restarts = 0;
};

/// Full-batch gradient descent. A non-finite loss halves the rate and
/// restarts from the initial weights, at most three times; then NumericError.
MlpTraining train_mlp(MlpWeights& weights, const Matrix& x, std::span<const double> y, int epochs,
                      double learning_rate);

class Mlp final : public Regressor {
public:
    Mlp(Hyperparameters hp, Standardizer features, TargetScaler target, MlpWeights weights, MlpTraining training)
        : hp_(hp), features_(std::move(features)), target_(target), weights_(std::move(weights)),
          training_(std::move(training)) {}

    [[nodiscard]] Family family() const noexcept override { return Family::mlp; }
    [[nodiscard]] const Hyperparameters& hyperparameters() const noexcept override { return hp_; }
    [[nodiscard]] double predict_raw(std::span<const double> features) const override;
    [[nodiscard]] const MlpWeights& weights() const noexcept { return weights_; }
    [[nodiscard]] const MlpTraining& training() const noexcept { return training_; }

private:
    Hyperparameters hp_;
    Standardizer features_;
    TargetScaler target_;
    MlpWeights weights_;
    MlpTraining training_;
};

Mlp fit_mlp(const Dataset& data, const Hyperparameters& hp);

}  // namespace vegout::ml
