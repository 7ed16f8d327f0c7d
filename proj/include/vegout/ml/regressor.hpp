#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vegout/ml/dataset.hpp"

namespace vegout::ml {

enum class Family { rf, svr, mlp };

std::string_view family_name(Family f) noexcept;

struct Hyperparameters {
    Family family = Family::rf;
    // random forest
    int trees = 20;
    int max_depth = 4;
    int min_leaf = 1;
    // support-vector regression
    double kernel_width = 1.0;  // gamma = 1 / (2 width^2) on standardized features
    double C = 1.0;
    double epsilon = 0.1;
    // neural network
    int hidden_units = 120;
    int epochs = 2000;
    double learning_rate = 0.01;

    std::uint64_t seed = 0;

    /// Ordering key for tie-breaks: smaller means a simpler model.
    [[nodiscard]] double capacity() const noexcept;
    [[nodiscard]] std::string label() const;
};

class Regressor {
public:
    virtual ~Regressor() = default;

    [[nodiscard]] virtual Family family() const noexcept = 0;
    [[nodiscard]] virtual const Hyperparameters& hyperparameters() const noexcept = 0;
    /// Unclamped prediction for one raw (unstandardized) feature row.
    [[nodiscard]] virtual double predict_raw(std::span<const double> features) const = 0;

    /// Predictions for every row, clamped at zero.
    [[nodiscard]] std::vector<double> predict(const Matrix& x) const;
};

/// Fits the family named in `hp`.
std::unique_ptr<Regressor> fit(const Dataset& data, const Hyperparameters& hp);

}  // namespace vegout::ml
