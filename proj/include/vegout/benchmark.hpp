#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vegout/evaluate.hpp"
#include "vegout/features.hpp"
#include "vegout/ml/dataset.hpp"

namespace vegout::eval {

struct BenchmarkOptions {
    int folds = 10;
    std::uint64_t seed = 0;
    int mlp_epochs = 2000;
    double mlp_learning_rate = 0.01;
    double svr_epsilon = 0.1;
};

/// Single-model design matrix: the five indices, one-hot area, one-hot
/// calendar month and a year index counted from `first_year`. Target TOCI.
ml::Dataset benchmark_dataset(std::span<const features::MonthlyFeatureRow> rows, int area_count, int first_year);

struct BenchmarkResult {
    std::vector<CellValue> forecasts;  // mean of the three members
    std::vector<CellValue> rf, svr, mlp;
    double svr_width = 1.0;
};

/// Fits RF (10 trees, depth 4), SVR (C = 1, width by k-fold CV) and MLP
/// (100 units) on the training rows and averages their predictions on the
/// target rows.
BenchmarkResult benchmark_forecast(std::span<const features::MonthlyFeatureRow> training,
                                   std::span<const features::MonthlyFeatureRow> targets, int area_count,
                                   int first_year, const BenchmarkOptions& options);

}  // namespace vegout::eval
