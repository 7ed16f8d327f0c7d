#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vegout/ml/regressor.hpp"

namespace vegout::ml {

struct FeatureImportance {
    std::string feature;
    double score = 0.0;  // mean MAE increase under permutation
    int rank = 0;        // 1 = most important
};

struct ImportanceReport {
    double baseline_mae = 0.0;
    int repetitions = 0;
    std::vector<FeatureImportance> features;  // sorted by descending score
};

/// Shuffles each column of the held-out rows `repetitions` times and records
/// the mean increase in MAE. Ties in score rank by column order.
ImportanceReport permutation_importance(const Regressor& model, const Dataset& heldout, int repetitions,
                                        std::uint64_t seed);

inline constexpr const char* kShadowFeature = "shadow_noise";

/// Copy of `data` with an extra standard-normal column named shadow_noise.
Dataset with_shadow_column(const Dataset& data, std::uint64_t seed);

}  // namespace vegout::ml
