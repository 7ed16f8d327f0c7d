#include "vegout/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "vegout/log.hpp"

namespace vegout::features {

int MonthWindow::days() const noexcept {
    const int len = static_cast<int>(timeutil::days_in_month(month.year, static_cast<unsigned>(month.month)));
    return std::max(0, std::min(day_end, len) - std::max(day_start, 1) + 1);
}

int MonthWindow::hours_per_day() const noexcept { return std::max(0, hour_end - hour_start + 1); }

bool MonthWindow::contains(timeutil::HourIndex h) const noexcept {
    const timeutil::Civil c = timeutil::civil_from_hour(h);
    const int len = static_cast<int>(timeutil::days_in_month(month.year, static_cast<unsigned>(month.month)));
    return c.year == month.year && static_cast<int>(c.month) == month.month && static_cast<int>(c.day) >= day_start &&
           static_cast<int>(c.day) <= std::min(day_end, len) && static_cast<int>(c.hour) >= hour_start &&
           static_cast<int>(c.hour) <= hour_end;
}

std::vector<timeutil::HourIndex> MonthWindow::hours() const {
    std::vector<timeutil::HourIndex> out;
    const int len = static_cast<int>(timeutil::days_in_month(month.year, static_cast<unsigned>(month.month)));
    for (int d = std::max(day_start, 1); d <= std::min(day_end, len); ++d)
        for (int h = hour_start; h <= hour_end; ++h)
            out.push_back(timeutil::hour_from_civil(month.year, static_cast<unsigned>(month.month),
                                                    static_cast<unsigned>(d), static_cast<unsigned>(h)));
    return out;
}

namespace {

void check_area(const geo::AreaMap& areas, AreaId area) {
    if (area < 0 || area >= areas.area_count) throw std::invalid_argument(fmt::format("unknown area {}", area));
}

long count_category(const categorize::Result& categorized, const geo::AreaMap& areas, AreaId area,
                    const MonthWindow& window, categorize::Category cat) {
    check_area(areas, area);
    long n = 0;
    for (const auto& o : categorized.outages)
        if (o.area == area && o.category == cat && window.contains(o.record.hour())) ++n;
    return n;
}

}  // namespace

long compute_gvoci(const categorize::Result& categorized, const geo::AreaMap& areas, AreaId area,
                   const MonthWindow& window) {
    return count_category(categorized, areas, area, window, categorize::Category::growth);
}

long compute_wvoci(const categorize::Result& categorized, const geo::AreaMap& areas, AreaId area,
                   const MonthWindow& window) {
    return count_category(categorized, areas, area, window, categorize::Category::weather);
}

WeatherIndices compute_weather_indices(const ingest::WeatherGrid& grid, const geo::AreaMap& areas, AreaId area,
                                       const MonthWindow& window, double gust_threshold_mph) {
    check_area(areas, area);
    const auto& members = areas.members[static_cast<std::size_t>(area)];
    if (members.empty()) throw std::invalid_argument(fmt::format("area {} has no substations", area));
    const std::vector<timeutil::HourIndex> hours = window.hours();

    double gc = 0.0, gi = 0.0, sc = 0.0;
    std::size_t covered = 0;
    for (int m : members) {
        const int si = grid.find(areas.station_of[static_cast<std::size_t>(m)]);
        if (si < 0) continue;
        const auto& st = grid.stations[static_cast<std::size_t>(si)];
        for (const auto h : hours) {
            if (!grid.covers(h)) continue;
            const auto k = static_cast<std::size_t>(h - grid.first_hour);
            if (!st.present[k]) continue;
            ++covered;
            if (categorize::gust_event(st.gust_mph[k], gust_threshold_mph)) {
                gc += 1.0;
                gi += st.gust_mph[k];
            }
            if (st.storm[k]) sc += 1.0;
        }
    }
    if (covered == 0)
        throw DataError(fmt::format("no weather coverage for area {} in {}", area, window.month.str()));

    const auto s_a = static_cast<double>(members.size());
    const double denom = s_a * window.days() * window.hours_per_day();
    return {gc / s_a, gi / denom, sc / s_a};
}

double compute_aoi(std::span<const MonthlyFeatureRow> training_rows, AreaId area) {
    double num = 0.0, den = 0.0;
    bool any = false;
    for (const auto& r : training_rows) {
        if (r.area != area) continue;
        any = true;
        num += static_cast<double>(r.wvoci);
        den += r.gci + r.sci;
    }
    if (!any) throw std::invalid_argument(fmt::format("no training rows for area {}", area));
    if (den <= 0.0) {
        logger().warn("area {} saw no weather events in training; AOI set to 0", area);
        return 0.0;
    }
    return num / den;
}

double compute_moi(std::span<const MonthlyFeatureRow> training_rows, int month) {
    double num = 0.0, den = 0.0;
    bool any = false;
    for (const auto& r : training_rows) {
        if (r.month != month) continue;
        any = true;
        num += static_cast<double>(r.wvoci);
        den += r.gci + r.sci;
    }
    if (!any) throw std::invalid_argument(fmt::format("no training rows for month {}", month));
    if (den <= 0.0) {
        logger().warn("month {} saw no weather events in training; MOI set to 0", month);
        return 0.0;
    }
    return num / den;
}

std::vector<Bin> binned_frequency(std::span<const double> values, std::span<const double> targets, int n_bins) {
    if (n_bins < 2) throw std::invalid_argument("binned_frequency: need at least 2 bins");
    if (values.size() != targets.size() || values.empty())
        throw std::invalid_argument("binned_frequency: values and targets must be non-empty and aligned");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double lo = *mn, hi = *mx;
    if (!(hi > lo)) throw std::invalid_argument("binned_frequency: constant feature");

    const double width = (hi - lo) / n_bins;
    std::vector<Bin> bins(static_cast<std::size_t>(n_bins));
    std::vector<double> sums(bins.size(), 0.0);
    for (std::size_t b = 0; b < bins.size(); ++b) {
        bins[b].lower = lo + width * static_cast<double>(b);
        bins[b].upper = b + 1 == bins.size() ? hi : lo + width * static_cast<double>(b + 1);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto b = static_cast<std::size_t>(std::floor((values[i] - lo) / width));
        b = std::min(b, bins.size() - 1);
        ++bins[b].count;
        sums[b] += targets[i];
    }
    for (std::size_t b = 0; b < bins.size(); ++b)
        if (bins[b].count > 0) bins[b].mean_target = sums[b] / static_cast<double>(bins[b].count);
    return bins;
}

FeatureTable build_feature_table(const ingest::Corpus& corpus, const geo::AreaMap& areas,
                                 const categorize::Result& categorized, std::span<const YearMonth> months,
                                 YearMonth train_first, YearMonth train_last, const TableOptions& options) {
    FeatureTable t;
    std::vector<YearMonth> sorted(months.begin(), months.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    // Counts bucketed once instead of rescanning per cell.
    struct Key {
        int month_index;
        AreaId area;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, std::pair<long, long>> counts;
    for (const auto& o : categorized.outages) {
        const timeutil::HourIndex h = o.record.hour();
        const YearMonth ym = timeutil::month_of(h);
        const MonthWindow w{ym, options.day_start, options.day_end, options.hour_start, options.hour_end};
        if (!w.contains(h)) continue;
        auto& c = counts[{ym.index(), o.area}];
        (o.category == categorize::Category::growth ? c.first : c.second) += 1;
    }

    for (const YearMonth ym : sorted) {
        const MonthWindow w{ym, options.day_start, options.day_end, options.hour_start, options.hour_end};
        for (AreaId a = 0; a < areas.area_count; ++a) {
            MonthlyFeatureRow r;
            r.year = ym.year;
            r.month = ym.month;
            r.area = a;
            if (const auto it = counts.find({ym.index(), a}); it != counts.end()) {
                r.gvoci = it->second.first;
                r.wvoci = it->second.second;
            }
            const WeatherIndices wi =
                compute_weather_indices(corpus.weather(), areas, a, w, options.gust_threshold_mph);
            r.gci = wi.gci;
            r.gii = wi.gii;
            r.sci = wi.sci;
            r.substations = static_cast<int>(areas.members[static_cast<std::size_t>(a)].size());
            r.days = w.days();
            r.hours_per_day = w.hours_per_day();
            t.rows.push_back(r);
        }
    }

    std::vector<MonthlyFeatureRow> training;
    for (const auto& r : t.rows)
        if (r.ym() >= train_first && r.ym() <= train_last) training.push_back(r);
    if (training.empty()) throw std::invalid_argument("build_feature_table: no training months");

    t.aoi.assign(static_cast<std::size_t>(areas.area_count), 0.0);
    for (AreaId a = 0; a < areas.area_count; ++a) t.aoi[static_cast<std::size_t>(a)] = compute_aoi(training, a);
    t.moi.assign(13, 0.0);
    for (int m = 1; m <= 12; ++m) {
        const bool seen = std::any_of(training.begin(), training.end(), [m](const auto& r) { return r.month == m; });
        t.moi[static_cast<std::size_t>(m)] = seen ? compute_moi(training, m) : 0.0;
    }
    for (auto& r : t.rows) {
        r.aoi = t.aoi[static_cast<std::size_t>(r.area)];
        r.moi = t.moi[static_cast<std::size_t>(r.month)];
    }
    return t;
}

}  // namespace vegout::features
