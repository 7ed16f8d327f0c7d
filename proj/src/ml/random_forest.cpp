#include "vegout/ml/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "vegout/random.hpp"

namespace vegout::ml {

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
    std::size_t left_count = 0;
};

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, const Hyperparameters& hp, std::mt19937_64& rng)
        : data_(data), hp_(hp), rng_(rng) {
        const std::size_t f = data.features();
        mtry_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(f)))));
    }

    Tree build(std::vector<std::size_t> rows) {
        tree_.clear();
        grow(rows, 0);
        return std::move(tree_);
    }

private:
    int grow(std::vector<std::size_t>& rows, int depth) {
        const int id = static_cast<int>(tree_.size());
        tree_.emplace_back();
        double sum = 0.0;
        for (std::size_t r : rows) sum += data_.y[r];
        tree_[static_cast<std::size_t>(id)].value = sum / static_cast<double>(rows.size());

        const std::size_t min_leaf = static_cast<std::size_t>(std::max(1, hp_.min_leaf));
        if (depth >= hp_.max_depth || rows.size() < 2 * min_leaf) return id;
        const Split s = best_split(rows, min_leaf);
        if (s.feature < 0) return id;

        const auto mid = std::partition(rows.begin(), rows.end(), [&](std::size_t r) {
            return data_.x.at(r, static_cast<std::size_t>(s.feature)) <= s.threshold;
        });
        std::vector<std::size_t> left(rows.begin(), mid), right(mid, rows.end());
        rows.clear();
        rows.shrink_to_fit();
        const int l = grow(left, depth + 1);
        const int r = grow(right, depth + 1);
        TreeNode& node = tree_[static_cast<std::size_t>(id)];
        node.feature = s.feature;
        node.threshold = s.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    Split best_split(const std::vector<std::size_t>& rows, std::size_t min_leaf) {
        std::vector<std::size_t> order(data_.features());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng_);

        const double n = static_cast<double>(rows.size());
        double total = 0.0;
        for (std::size_t r : rows) total += data_.y[r];

        Split best;
        std::vector<std::pair<double, double>> vals(rows.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (k >= mtry_ && best.feature >= 0) break;
            const std::size_t f = order[k];
            for (std::size_t i = 0; i < rows.size(); ++i) vals[i] = {data_.x.at(rows[i], f), data_.y[rows[i]]};
            std::sort(vals.begin(), vals.end());
            double left_sum = 0.0;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                left_sum += vals[i].second;
                const std::size_t nl = i + 1;
                if (vals[i].first == vals[i + 1].first) continue;
                if (nl < min_leaf || vals.size() - nl < min_leaf) continue;
                const double nr = n - static_cast<double>(nl);
                const double right_sum = total - left_sum;
                // SSE reduction = nl*mean_l^2 + nr*mean_r^2 - n*mean^2
                const double gain = left_sum * left_sum / static_cast<double>(nl) + right_sum * right_sum / nr -
                                    total * total / n;
                if (gain > best.gain + 1e-12 * std::abs(total * total / n)) {
                    best = {static_cast<int>(f), 0.5 * (vals[i].first + vals[i + 1].first), gain, nl};
                }
            }
        }
        return best;
    }

    const Dataset& data_;
    const Hyperparameters& hp_;
    std::mt19937_64& rng_;
    std::size_t mtry_ = 1;
    Tree tree_;
};

}  // namespace

double predict_tree(const Tree& tree, std::span<const double> features) noexcept {
    std::size_t i = 0;
    while (tree[i].feature >= 0)
        i = static_cast<std::size_t>(features[static_cast<std::size_t>(tree[i].feature)] <= tree[i].threshold
                                         ? tree[i].left
                                         : tree[i].right);
    return tree[i].value;
}

double RandomForest::predict_raw(std::span<const double> features) const {
    double sum = 0.0;
    for (const Tree& t : trees_) sum += predict_tree(t, features);
    return sum / static_cast<double>(trees_.size());
}

RandomForest fit_rf(const Dataset& data, const Hyperparameters& hp) {
    data.validate();
    if (data.size() == 0) throw std::invalid_argument("random forest: empty dataset");
    if (hp.trees < 1) throw std::invalid_argument("random forest: trees must be >= 1");
    if (hp.max_depth < 1) throw std::invalid_argument("random forest: max_depth must be >= 1");
    std::vector<Tree> trees;
    trees.reserve(static_cast<std::size_t>(hp.trees));
    const std::size_t n = data.size();
    for (int t = 0; t < hp.trees; ++t) {
        std::mt19937_64 rng(derive_seed(hp.seed, static_cast<std::uint64_t>(t)));
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<std::size_t> rows(n);
        for (auto& r : rows) r = pick(rng);
        TreeBuilder builder(data, hp, rng);
        trees.push_back(builder.build(std::move(rows)));
    }
    return RandomForest(hp, std::move(trees));
}

}  // namespace vegout::ml
