#include "vegout/benchmark.hpp"

#include <fmt/format.h>

#include "vegout/ml/regressor.hpp"
#include "vegout/ml/tuning.hpp"
#include "vegout/random.hpp"

namespace vegout::eval {

ml::Dataset benchmark_dataset(std::span<const features::MonthlyFeatureRow> rows, int area_count, int first_year) {
    ml::Dataset d;
    d.feature_names = {"gci", "gii", "sci", "aoi", "moi"};
    for (int a = 0; a < area_count; ++a) d.feature_names.push_back(fmt::format("area_{}", a));
    for (int m = 1; m <= 12; ++m) d.feature_names.push_back(fmt::format("month_{}", m));
    d.feature_names.emplace_back("year_index");
    d.x = ml::Matrix(rows.size(), d.feature_names.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        auto x = d.x.row(i);
        x[0] = r.gci;
        x[1] = r.gii;
        x[2] = r.sci;
        x[3] = r.aoi;
        x[4] = r.moi;
        x[5 + static_cast<std::size_t>(r.area)] = 1.0;
        x[5 + static_cast<std::size_t>(area_count) + static_cast<std::size_t>(r.month - 1)] = 1.0;
        x[x.size() - 1] = r.year - first_year;
        d.y.push_back(static_cast<double>(r.gvoci + r.wvoci));
    }
    return d;
}

BenchmarkResult benchmark_forecast(std::span<const features::MonthlyFeatureRow> training,
                                   std::span<const features::MonthlyFeatureRow> targets, int area_count,
                                   int first_year, const BenchmarkOptions& options) {
    const ml::Dataset train = benchmark_dataset(training, area_count, first_year);
    const ml::Dataset test = benchmark_dataset(targets, area_count, first_year);

    ml::Hyperparameters rf;
    rf.family = ml::Family::rf;
    rf.trees = 10;
    rf.max_depth = 4;
    rf.seed = derive_seed(options.seed, 1);

    std::vector<ml::Hyperparameters> svr_grid = ml::default_grid(ml::Family::svr, derive_seed(options.seed, 2));
    for (auto& hp : svr_grid) {
        hp.C = 1.0;
        hp.epsilon = options.svr_epsilon;
    }
    const ml::TuneResult svr_tune = ml::kfold_tune(train, svr_grid, options.folds, derive_seed(options.seed, 3));

    ml::Hyperparameters mlp;
    mlp.family = ml::Family::mlp;
    mlp.hidden_units = 100;
    mlp.epochs = options.mlp_epochs;
    mlp.learning_rate = options.mlp_learning_rate;
    mlp.seed = derive_seed(options.seed, 4);

    const auto p_rf = ml::fit(train, rf)->predict(test.x);
    const auto p_svr = ml::fit(train, svr_tune.best)->predict(test.x);
    const auto p_mlp = ml::fit(train, mlp)->predict(test.x);

    BenchmarkResult out;
    out.svr_width = svr_tune.best.kernel_width;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const AreaId a = targets[i].area;
        const YearMonth m = targets[i].ym();
        out.rf.push_back({a, m, p_rf[i]});
        out.svr.push_back({a, m, p_svr[i]});
        out.mlp.push_back({a, m, p_mlp[i]});
        out.forecasts.push_back({a, m, (p_rf[i] + p_svr[i] + p_mlp[i]) / 3.0});
    }
    return out;
}

}  // namespace vegout::eval
