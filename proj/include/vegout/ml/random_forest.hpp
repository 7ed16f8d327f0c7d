#pragma once

#include <vector>

#include "vegout/ml/regressor.hpp"

namespace vegout::ml {

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;  // leaf mean
};

using Tree = std::vector<TreeNode>;

double predict_tree(const Tree& tree, std::span<const double> features) noexcept;

class RandomForest final : public Regressor {
public:
    RandomForest(Hyperparameters hp, std::vector<Tree> trees) : hp_(hp), trees_(std::move(trees)) {}

    [[nodiscard]] Family family() const noexcept override { return Family::rf; }
    [[nodiscard]] const Hyperparameters& hyperparameters() const noexcept override { return hp_; }
    [[nodiscard]] double predict_raw(std::span<const double> features) const override;
    [[nodiscard]] const std::vector<Tree>& trees() const noexcept { return trees_; }

private:
    Hyperparameters hp_;
    std::vector<Tree> trees_;
};

/// Bootstrap-aggregated regression trees with variance-reduction splits over
/// floor(sqrt(F)) randomly drawn features per node (more are tried when none
/// of those admits a split). Features are used unscaled.
RandomForest fit_rf(const Dataset& data, const Hyperparameters& hp);

}  // namespace vegout::ml
