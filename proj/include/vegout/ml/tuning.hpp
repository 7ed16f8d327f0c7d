#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vegout/ml/regressor.hpp"

namespace vegout::ml {

/// Shuffles row indices with `seed` and cuts them into k contiguous folds
/// whose sizes differ by at most one. Returns the validation rows per fold.
std::vector<std::vector<std::size_t>> kfold_indices(std::size_t rows, int k, std::uint64_t seed);

struct CandidateResult {
    Hyperparameters hp;
    std::vector<double> fold_nmae;
    double mean_nmae = 0.0;
};

struct TuneResult {
    Hyperparameters best;
    std::vector<double> best_fold_nmae;
    double best_mean_nmae = 0.0;
    std::vector<CandidateResult> candidates;  // grid order
};

/// k-fold search minimising mean validation NMAE; ties go to lower capacity,
/// then grid order. Throws std::invalid_argument for an empty grid, k < 2,
/// or fewer rows than folds.
TuneResult kfold_tune(const Dataset& data, std::span<const Hyperparameters> grid, int k, std::uint64_t seed);

/// Default grids searched for the forecasting models.
std::vector<Hyperparameters> default_grid(Family family, std::uint64_t seed);

}  // namespace vegout::ml
