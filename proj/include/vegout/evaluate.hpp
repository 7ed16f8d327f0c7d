#pragma once

#include <span>
#include <string>
#include <vector>

#include "vegout/common.hpp"

namespace vegout::eval {

/// One forecast or observed value for an (area, month) cell.
struct CellValue {
    AreaId area = 0;
    YearMonth month;
    double value = 0.0;
};

struct Prediction {
    AreaId area = 0;
    YearMonth month;
    double gvoci_hat = 0.0;
    double wvoci_hat = 0.0;
    double toci_hat = 0.0;
};

/// Cellwise sum of the growth and weather streams, sorted by (month, area).
/// Throws DataError naming the first cell missing from either stream or
/// duplicated within one.
std::vector<Prediction> combine(std::span<const CellValue> ts, std::span<const CellValue> ml);

struct AreaScore {
    AreaId area = 0;
    double nmae = 0.0;
    bool degenerate_range = false;
};

struct ModelScores {
    std::string model;
    std::vector<AreaScore> areas;  // ascending area
    int months = 0;                // M
};

/// NMAE per area over the cells in `actual`. Every actual cell needs a
/// prediction; extra predictions are ignored.
ModelScores score_model(const std::string& model, std::span<const CellValue> predicted,
                        std::span<const CellValue> actual);

/// Mean of the area's values for that calendar month across `history`;
/// when the month is absent, the area's overall mean (logged). Throws
/// DataError when the area has no history.
double naive_forecast(std::span<const CellValue> history, AreaId area, int calendar_month);

/// Naive forecasts for every cell in `targets`.
std::vector<CellValue> naive_forecasts(std::span<const CellValue> history, std::span<const CellValue> targets);

struct BoxStats {
    double q1 = 0.0, median = 0.0, q3 = 0.0;
    double whisker_low = 0.0, whisker_high = 0.0;  // most extreme values within 1.5 IQR
};

struct ModelSummary {
    std::string model;
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double ci_low = 0.0, ci_high = 0.0;  // 95% t-interval of the mean
    BoxStats box;
};

/// Throws std::invalid_argument for fewer than two values.
ModelSummary summarize(const std::string& model, std::span<const double> errors, double confidence = 0.95);

struct Comparison {
    std::vector<ModelSummary> models;
    std::vector<std::vector<bool>> overlap;  // symmetric; true when intervals intersect
};

/// Requires at least two models scored on identical areas.
Comparison compare(std::span<const ModelScores> scores);

struct MonthlyTotal {
    YearMonth month;
    double actual = 0.0;
    double predicted = 0.0;
};

/// Sums over areas per month of the actual cells and matching predictions.
std::vector<MonthlyTotal> monthly_totals(std::span<const CellValue> predicted, std::span<const CellValue> actual);

}  // namespace vegout::eval
