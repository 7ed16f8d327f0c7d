#include "vegout/ml/importance.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "vegout/random.hpp"

namespace vegout::ml {

namespace {

double mae(const Regressor& model, const Dataset& d) {
    const auto pred = model.predict(d.x);
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - d.y[i]);
    return s / static_cast<double>(pred.size());
}

}  // namespace

ImportanceReport permutation_importance(const Regressor& model, const Dataset& heldout, int repetitions,
                                        std::uint64_t seed) {
    if (repetitions < 1) throw std::invalid_argument("importance needs at least one repetition");
    if (heldout.size() == 0) throw std::invalid_argument("importance needs held-out rows");
    ImportanceReport report;
    report.repetitions = repetitions;
    report.baseline_mae = mae(model, heldout);
    const std::size_t f = heldout.features();
    std::vector<std::size_t> order(f);
    for (std::size_t j = 0; j < f; ++j) {
        std::mt19937_64 rng(derive_seed(seed, j));
        Dataset shuffled = heldout;
        std::vector<double> col = heldout.x.column(j);
        double total = 0.0;
        for (int r = 0; r < repetitions; ++r) {
            std::shuffle(col.begin(), col.end(), rng);
            for (std::size_t i = 0; i < shuffled.size(); ++i) shuffled.x.at(i, j) = col[i];
            total += mae(model, shuffled) - report.baseline_mae;
        }
        const std::string name = j < heldout.feature_names.size() ? heldout.feature_names[j] : fmt::format("x{}", j);
        report.features.push_back({name, total / repetitions, 0});
    }
    std::stable_sort(report.features.begin(), report.features.end(),
                     [](const FeatureImportance& a, const FeatureImportance& b) { return a.score > b.score; });
    for (std::size_t i = 0; i < report.features.size(); ++i) report.features[i].rank = static_cast<int>(i) + 1;
    return report;
}

Dataset with_shadow_column(const Dataset& data, std::uint64_t seed) {
    Dataset out;
    out.y = data.y;
    out.feature_names = data.feature_names;
    out.feature_names.emplace_back(kShadowFeature);
    out.x = Matrix(data.x.rows, data.x.cols + 1);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = 0; i < data.x.rows; ++i) {
        const auto src = data.x.row(i);
        auto dst = out.x.row(i);
        std::copy(src.begin(), src.end(), dst.begin());
        dst[data.x.cols] = noise(rng);
    }
    return out;
}

}  // namespace vegout::ml
