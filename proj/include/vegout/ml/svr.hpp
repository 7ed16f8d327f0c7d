#pragma once

#include <vector>

#include "vegout/ml/regressor.hpp"

namespace vegout::ml {

struct SvrSolution {
    std::vector<double> coef;  // alpha_i - alpha*_i per training row
    double bias = 0.0;
    double gap = 0.0;          // final maximal KKT violation
    long iterations = 0;
    bool converged = true;
};

/// Epsilon-insensitive SVR dual solved by SMO on maximal violating pairs.
/// `x` must already be on the model scale. Stops when the violation drops
/// below `tolerance`; on hitting the iteration cap the last iterate is
/// returned with converged = false.
SvrSolution solve_svr(const Matrix& x, std::span<const double> y, double gamma, double C, double epsilon,
                      double tolerance = 1e-3, long max_iterations = 1'000'000);

class Svr final : public Regressor {
public:
    Svr(Hyperparameters hp, Standardizer features, TargetScaler target, Matrix support, std::vector<double> coef,
        double bias, SvrSolution diagnostics);

    [[nodiscard]] Family family() const noexcept override { return Family::svr; }
    [[nodiscard]] const Hyperparameters& hyperparameters() const noexcept override { return hp_; }
    [[nodiscard]] double predict_raw(std::span<const double> features) const override;

    [[nodiscard]] std::size_t support_count() const noexcept { return coef_.size(); }
    [[nodiscard]] const SvrSolution& diagnostics() const noexcept { return diag_; }
    [[nodiscard]] double gamma() const noexcept;

private:
    Hyperparameters hp_;
    Standardizer features_;
    TargetScaler target_;
    Matrix support_;  // standardized support vectors
    std::vector<double> coef_;
    double bias_;
    SvrSolution diag_;
};

/// Standardizes features and target on `data`, then solves the dual.
Svr fit_svr(const Dataset& data, const Hyperparameters& hp);
/// As above with caller-supplied feature scaling.
Svr fit_svr(const Dataset& data, const Hyperparameters& hp, const Standardizer& scaling);

}  // namespace vegout::ml
