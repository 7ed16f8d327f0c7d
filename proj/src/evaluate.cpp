#include "vegout/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "vegout/ingest.hpp"
#include "vegout/log.hpp"
#include "vegout/metrics.hpp"

namespace vegout::eval {

namespace {

using Key = std::pair<YearMonth, AreaId>;

std::map<Key, double> index_cells(std::span<const CellValue> cells, const char* stream) {
    std::map<Key, double> out;
    for (const auto& c : cells)
        if (!out.emplace(Key{c.month, c.area}, c.value).second)
            throw DataError(fmt::format("{} stream has duplicate cell area {} month {}", stream, c.area, c.month.str()));
    return out;
}

}  // namespace

std::vector<Prediction> combine(std::span<const CellValue> ts, std::span<const CellValue> ml) {
    const auto a = index_cells(ts, "growth"), b = index_cells(ml, "weather");
    for (const auto& [k, v] : a)
        if (!b.count(k))
            throw DataError(fmt::format("cell area {} month {} has a growth forecast but no weather forecast",
                                        k.second, k.first.str()));
    for (const auto& [k, v] : b)
        if (!a.count(k))
            throw DataError(fmt::format("cell area {} month {} has a weather forecast but no growth forecast",
                                        k.second, k.first.str()));
    std::vector<Prediction> out;
    out.reserve(a.size());
    for (const auto& [k, g] : a) {
        const double w = b.at(k);
        out.push_back({k.second, k.first, g, w, g + w});
    }
    return out;
}

ModelScores score_model(const std::string& model, std::span<const CellValue> predicted,
                        std::span<const CellValue> actual) {
    if (actual.empty()) throw std::invalid_argument("score_model: no actual cells");
    const auto pred = index_cells(predicted, model.c_str());
    std::map<AreaId, std::pair<std::vector<double>, std::vector<double>>> per_area;
    std::map<YearMonth, int> months;
    for (const auto& c : actual) {
        const auto it = pred.find({c.month, c.area});
        if (it == pred.end())
            throw DataError(fmt::format("{} has no prediction for area {} month {}", model, c.area, c.month.str()));
        per_area[c.area].first.push_back(it->second);
        per_area[c.area].second.push_back(c.value);
        months[c.month] = 1;
    }
    ModelScores s;
    s.model = model;
    s.months = static_cast<int>(months.size());
    for (const auto& [area, pv] : per_area) {
        const NmaeResult r = nmae_detail(pv.first, pv.second);
        if (r.degenerate_range)
            logger().warn("{}: area {} has constant test actuals; NMAE denominator set to {}", model, area,
                          r.denominator);
        s.areas.push_back({area, r.value, r.degenerate_range});
    }
    return s;
}

double naive_forecast(std::span<const CellValue> history, AreaId area, int calendar_month) {
    double month_sum = 0.0, all_sum = 0.0;
    int month_n = 0, all_n = 0;
    for (const auto& c : history) {
        if (c.area != area) continue;
        all_sum += c.value;
        ++all_n;
        if (c.month.month == calendar_month) {
            month_sum += c.value;
            ++month_n;
        }
    }
    if (all_n == 0) throw DataError(fmt::format("naive baseline: area {} has no training history", area));
    if (month_n == 0) {
        logger().info("naive baseline: area {} never observed month {}; using the overall mean", area, calendar_month);
        return all_sum / all_n;
    }
    return month_sum / month_n;
}

std::vector<CellValue> naive_forecasts(std::span<const CellValue> history, std::span<const CellValue> targets) {
    std::vector<CellValue> out;
    out.reserve(targets.size());
    for (const auto& t : targets) out.push_back({t.area, t.month, naive_forecast(history, t.area, t.month.month)});
    return out;
}

ModelSummary summarize(const std::string& model, std::span<const double> errors, double confidence) {
    if (errors.size() < 2) throw std::invalid_argument("summary needs at least two areas");
    ModelSummary s;
    s.model = model;
    s.n = errors.size();
    const double n = static_cast<double>(s.n);
    for (double e : errors) s.mean += e;
    s.mean /= n;
    double ss = 0.0;
    for (double e : errors) ss += (e - s.mean) * (e - s.mean);
    s.sd = std::sqrt(ss / (n - 1.0));
    const boost::math::students_t dist(n - 1.0);
    const double t = boost::math::quantile(dist, 0.5 + confidence / 2.0);
    const double half = t * s.sd / std::sqrt(n);
    s.ci_low = s.mean - half;
    s.ci_high = s.mean + half;

    std::vector<double> sorted(errors.begin(), errors.end());
    std::sort(sorted.begin(), sorted.end());
    s.box.q1 = ingest::quantile_type7(sorted, 0.25);
    s.box.median = ingest::quantile_type7(sorted, 0.5);
    s.box.q3 = ingest::quantile_type7(sorted, 0.75);
    const double iqr = s.box.q3 - s.box.q1;
    const double lo = s.box.q1 - 1.5 * iqr, hi = s.box.q3 + 1.5 * iqr;
    s.box.whisker_low = *std::find_if(sorted.begin(), sorted.end(), [&](double v) { return v >= lo; });
    s.box.whisker_high = *std::find_if(sorted.rbegin(), sorted.rend(), [&](double v) { return v <= hi; });
    return s;
}

Comparison compare(std::span<const ModelScores> scores) {
    if (scores.size() < 2) throw std::invalid_argument("comparison needs at least two models");
    Comparison c;
    for (const auto& m : scores) {
        if (m.areas.size() != scores.front().areas.size())
            throw std::invalid_argument(fmt::format("model {} was scored on a different set of areas", m.model));
        std::vector<double> errs;
        for (std::size_t i = 0; i < m.areas.size(); ++i) {
            if (m.areas[i].area != scores.front().areas[i].area)
                throw std::invalid_argument(fmt::format("model {} was scored on a different set of areas", m.model));
            errs.push_back(m.areas[i].nmae);
        }
        c.models.push_back(summarize(m.model, errs));
    }
    const std::size_t k = c.models.size();
    c.overlap.assign(k, std::vector<bool>(k, true));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            c.overlap[i][j] = c.models[i].ci_low <= c.models[j].ci_high && c.models[j].ci_low <= c.models[i].ci_high;
    return c;
}

std::vector<MonthlyTotal> monthly_totals(std::span<const CellValue> predicted, std::span<const CellValue> actual) {
    const auto pred = index_cells(predicted, "predicted");
    std::map<YearMonth, MonthlyTotal> totals;
    for (const auto& c : actual) {
        const auto it = pred.find({c.month, c.area});
        if (it == pred.end())
            throw DataError(fmt::format("no prediction for area {} month {}", c.area, c.month.str()));
        auto& t = totals[c.month];
        t.month = c.month;
        t.actual += c.value;
        t.predicted += it->second;
    }
    std::vector<MonthlyTotal> out;
    for (const auto& [m, t] : totals) out.push_back(t);
    return out;
}

}  // namespace vegout::eval
