#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vegout/benchmark.hpp"
#include "vegout/categorize.hpp"
#include "vegout/config.hpp"
#include "vegout/evaluate.hpp"
#include "vegout/features.hpp"
#include "vegout/geo_cluster.hpp"
#include "vegout/ingest.hpp"
#include "vegout/ml/importance.hpp"
#include "vegout/ml/tuning.hpp"
#include "vegout/report.hpp"
#include "vegout/timeseries/rolling_cv.hpp"

namespace vegout::pipeline {

/// Calendar split: the first `train_years` whole years of data for fitting,
/// the remaining months for testing.
struct Split {
    std::vector<YearMonth> all;
    std::vector<YearMonth> train;
    std::vector<YearMonth> test;
    YearMonth train_first, train_last;
};

struct ClusterStage {
    geo::ElbowCurve elbow;
    geo::AreaMap areas;
};

struct StreamForecast {
    AreaId area = 0;
    YearMonth month;
    std::string model;
    double value = 0.0;
};

struct TsStage {
    ts::Selection selection;
    std::string selected_label;
    bool fallback = false;                // seasonal naive used for short series
    std::vector<StreamForecast> rows;     // every emitted model
    std::vector<eval::CellValue> selected;
};

struct MlStage {
    ml::Family selected = ml::Family::rf;
    std::map<ml::Family, ml::TuneResult> tuning;
    std::vector<StreamForecast> rows;
    std::vector<eval::CellValue> selected_cells;
    std::optional<ml::ImportanceReport> importance;
};

struct EvalStage {
    std::vector<eval::ModelScores> scores;
    eval::Comparison comparison;
    std::map<std::string, std::vector<eval::MonthlyTotal>> monthly;
    std::vector<eval::Prediction> predictions;
    eval::BenchmarkResult benchmark;
};

/// Lazily runs and caches each stage; every stage pulls its upstream
/// dependencies, so any entry point reproduces the same results.
class Pipeline {
public:
    Pipeline(Config config, std::filesystem::path data_dir);

    [[nodiscard]] const Config& config() const noexcept { return config_; }

    const ingest::Corpus& corpus();
    const ClusterStage& cluster();
    const categorize::Result& categorized();
    const Split& split();
    const features::FeatureTable& features();
    const TsStage& timeseries();
    const MlStage& ml();
    /// Combined growth + weather forecasts for the test months.
    const std::vector<eval::Prediction>& predictions();
    /// Throws DataError when the corpus has no test months.
    const EvalStage& evaluation();

    void write_ingest(const std::filesystem::path& out);
    void write_cluster(const std::filesystem::path& out);
    void write_categorize(const std::filesystem::path& out);
    void write_features(const std::filesystem::path& out);
    void write_timeseries(const std::filesystem::path& out);
    void write_ml(const std::filesystem::path& out);
    void write_predictions(const std::filesystem::path& out);
    void write_evaluation(const std::filesystem::path& out);

private:
    Config config_;
    std::filesystem::path data_dir_;
    std::optional<ingest::Corpus> corpus_;
    std::optional<ClusterStage> cluster_;
    std::optional<categorize::Result> categorized_;
    std::optional<Split> split_;
    std::optional<features::FeatureTable> features_;
    std::optional<TsStage> ts_;
    std::optional<MlStage> ml_;
    std::optional<std::vector<eval::Prediction>> predictions_;
    std::optional<EvalStage> eval_;
};

/// Regression rows (gci, gii, sci, aoi, moi -> wvoci).
ml::Dataset weather_dataset(std::span<const features::MonthlyFeatureRow> rows);

/// Reads predictions.csv and areas.csv from `out_dir`, substations from
/// `data_dir`, and writes risk.geojson and risk.csv for `target` (default:
/// the last month in the predictions).
report::RiskReport write_report(const std::filesystem::path& data_dir, const std::filesystem::path& out_dir,
                                std::optional<YearMonth> target, const std::vector<double>& thresholds);

}  // namespace vegout::pipeline
