#include "vegout/ml/tuning.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "vegout/metrics.hpp"

namespace vegout::ml {

std::vector<std::vector<std::size_t>> kfold_indices(std::size_t rows, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k-fold needs k >= 2");
    if (rows < static_cast<std::size_t>(k)) throw std::invalid_argument("k-fold needs at least k rows");
    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    const std::size_t base = rows / static_cast<std::size_t>(k), extra = rows % static_cast<std::size_t>(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const std::size_t len = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + len));
        std::sort(folds[f].begin(), folds[f].end());
        pos += len;
    }
    return folds;
}

TuneResult kfold_tune(const Dataset& data, std::span<const Hyperparameters> grid, int k, std::uint64_t seed) {
    if (grid.empty()) throw std::invalid_argument("hyperparameter grid is empty");
    const auto folds = kfold_indices(data.size(), k, seed);
    TuneResult result;
    for (const Hyperparameters& hp : grid) {
        CandidateResult c{hp, {}, 0.0};
        for (const auto& valid : folds) {
            std::vector<std::size_t> train;
            train.reserve(data.size() - valid.size());
            for (std::size_t i = 0, v = 0; i < data.size(); ++i) {
                if (v < valid.size() && valid[v] == i) {
                    ++v;
                    continue;
                }
                train.push_back(i);
            }
            const Dataset tr = data.subset(train), va = data.subset(valid);
            const auto model = fit(tr, hp);
            c.fold_nmae.push_back(nmae(model->predict(va.x), va.y));
        }
        c.mean_nmae = std::accumulate(c.fold_nmae.begin(), c.fold_nmae.end(), 0.0) /
                      static_cast<double>(c.fold_nmae.size());
        result.candidates.push_back(std::move(c));
    }
    const CandidateResult* best = &result.candidates.front();
    for (const auto& c : result.candidates)
        if (c.mean_nmae < best->mean_nmae ||
            (c.mean_nmae == best->mean_nmae && c.hp.capacity() < best->hp.capacity()))
            best = &c;
    result.best = best->hp;
    result.best_fold_nmae = best->fold_nmae;
    result.best_mean_nmae = best->mean_nmae;
    return result;
}

std::vector<Hyperparameters> default_grid(Family family, std::uint64_t seed) {
    std::vector<Hyperparameters> grid;
    Hyperparameters hp;
    hp.family = family;
    hp.seed = seed;
    switch (family) {
        case Family::rf:
            for (int trees : {10, 20})
                for (int depth : {3, 4, 6}) {
                    hp.trees = trees;
                    hp.max_depth = depth;
                    grid.push_back(hp);
                }
            break;
        case Family::svr:
            for (double width : {0.5, 1.0, 2.0, 4.0}) {
                hp.kernel_width = width;
                grid.push_back(hp);
            }
            break;
        case Family::mlp:
            for (int units : {60, 120}) {
                hp.hidden_units = units;
                grid.push_back(hp);
            }
            break;
    }
    return grid;
}

}  // namespace vegout::ml
