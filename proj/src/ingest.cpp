#include "vegout/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "vegout/csv.hpp"
#include "vegout/log.hpp"

namespace vegout::ingest {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    try {
        std::size_t used = 0;
        out = std::stod(s, &used);
        return used == s.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

void read_geography(const std::filesystem::path& path, const char* id_column, std::vector<SubstationInfo>& out,
                    std::vector<RowDiagnostic>& diag) {
    csv::Reader reader(path);
    reader.require_header({id_column, "lat", "lon"});
    std::vector<std::string> f;
    while (reader.next(f)) {
        const std::string file = path.filename().string();
        if (f.size() != 3) {
            diag.push_back({file, reader.row(), fmt::format("expected 3 fields, got {}", f.size())});
            continue;
        }
        SubstationInfo s;
        s.id = f[0];
        if (s.id.empty() || !parse_double(f[1], s.lat) || !parse_double(f[2], s.lon)) {
            diag.push_back({file, reader.row(), "unparseable id or coordinates"});
            continue;
        }
        if (s.lat < -90 || s.lat > 90 || s.lon < -180 || s.lon > 180) {
            diag.push_back({file, reader.row(), fmt::format("coordinates out of range for '{}'", s.id)});
            continue;
        }
        out.push_back(std::move(s));
    }
}

}  // namespace

std::string_view cause_name(Cause c) noexcept { return c == Cause::vegetation ? "vegetation" : "other"; }

int WeatherGrid::find(const std::string& station_id) const noexcept {
    for (std::size_t i = 0; i < stations.size(); ++i)
        if (stations[i].station_id == station_id) return static_cast<int>(i);
    return -1;
}

int Corpus::substation_index(const std::string& id) const noexcept {
    const auto it = substation_lookup_.find(id);
    return it == substation_lookup_.end() ? -1 : it->second;
}

CorpusPaths CorpusPaths::in_directory(const std::filesystem::path& dir) {
    return {dir / "outages.csv", dir / "weather.csv", dir / "substations.csv", dir / "stations.csv"};
}

bool is_storm_condition(std::string_view condition, std::span<const std::string> keywords) {
    const std::string text = lower(condition);
    return std::any_of(keywords.begin(), keywords.end(),
                       [&](const std::string& k) { return !k.empty() && text.find(lower(k)) != std::string::npos; });
}

RawTables read_tables(const CorpusPaths& paths, const IngestOptions& options) {
    RawTables raw;
    read_geography(paths.substations, "substation_id", raw.substations, raw.diagnostics);
    read_geography(paths.stations, "station_id", raw.stations, raw.diagnostics);

    {
        csv::Reader reader(paths.outages);
        reader.require_header({"timestamp", "substation_id", "cause"});
        const std::string file = paths.outages.filename().string();
        std::vector<std::string> f;
        while (reader.next(f)) {
            if (f.size() != 3) {
                raw.diagnostics.push_back({file, reader.row(), fmt::format("expected 3 fields, got {}", f.size())});
                continue;
            }
            OutageRecord r;
            try {
                r.timestamp = timeutil::parse_iso8601(f[0], options.utc_offset_minutes);
            } catch (const std::invalid_argument& e) {
                raw.diagnostics.push_back({file, reader.row(), e.what()});
                continue;
            }
            r.substation_id = f[1];
            const std::string cause = lower(f[2]);
            if (cause == "vegetation") {
                r.cause = Cause::vegetation;
            } else if (cause == "other") {
                r.cause = Cause::other;
            } else {
                raw.diagnostics.push_back({file, reader.row(), fmt::format("unknown cause '{}'", f[2])});
                continue;
            }
            if (r.substation_id.empty()) {
                raw.diagnostics.push_back({file, reader.row(), "empty substation_id"});
                continue;
            }
            raw.outages.push_back(std::move(r));
            raw.outage_rows.push_back(reader.row());
        }
    }

    {
        csv::Reader reader(paths.weather);
        reader.require_header({"timestamp", "station_id", "gust_mph", "condition"});
        const std::string file = paths.weather.filename().string();
        std::vector<std::string> f;
        while (reader.next(f)) {
            if (f.size() != 4) {
                raw.diagnostics.push_back({file, reader.row(), fmt::format("expected 4 fields, got {}", f.size())});
                continue;
            }
            WeatherObservation w;
            try {
                w.timestamp = timeutil::parse_iso8601(f[0], options.utc_offset_minutes);
            } catch (const std::invalid_argument& e) {
                raw.diagnostics.push_back({file, reader.row(), e.what()});
                continue;
            }
            w.station_id = f[1];
            if (w.station_id.empty()) {
                raw.diagnostics.push_back({file, reader.row(), "empty station_id"});
                continue;
            }
            if (!f[2].empty()) {
                double g = 0;
                if (!parse_double(f[2], g) || g < 0) {
                    raw.diagnostics.push_back({file, reader.row(), fmt::format("bad gust_mph '{}'", f[2])});
                    continue;
                }
                w.gust_mph = g;
            }
            if (!f[3].empty()) w.storm = is_storm_condition(f[3], options.storm_keywords);
            raw.weather.push_back(std::move(w));
        }
    }
    return raw;
}

Corpus build_corpus(RawTables raw, const IngestOptions& options) {
    if (!(options.iqr_multiplier > 0)) throw std::invalid_argument("iqr_multiplier must be > 0");
    Corpus c;
    c.report_.iqr_multiplier = options.iqr_multiplier;
    c.report_.rows_rejected = raw.diagnostics.size();
    c.diagnostics_ = std::move(raw.diagnostics);

    // Geography: ids must be unique.
    for (std::size_t i = 0; i < raw.substations.size(); ++i) {
        if (!c.substation_lookup_.emplace(raw.substations[i].id, static_cast<int>(i)).second)
            throw DataError(fmt::format("duplicate substation_id '{}'", raw.substations[i].id));
    }
    c.substations_ = std::move(raw.substations);
    {
        std::set<std::string> seen;
        for (const auto& s : raw.stations)
            if (!seen.insert(s.id).second) throw DataError(fmt::format("duplicate station_id '{}'", s.id));
    }
    c.stations_ = std::move(raw.stations);

    // Outages: referential integrity, then exact-triple dedup.
    for (std::size_t i = 0; i < raw.outages.size(); ++i) {
        const auto& o = raw.outages[i];
        if (!c.substation_lookup_.contains(o.substation_id)) {
            const std::size_t row = i < raw.outage_rows.size() ? raw.outage_rows[i] : i + 2;
            throw DataError(fmt::format("outages.csv row {}: unknown substation '{}'", row, o.substation_id));
        }
    }
    std::sort(raw.outages.begin(), raw.outages.end());
    const auto before = raw.outages.size();
    raw.outages.erase(std::unique(raw.outages.begin(), raw.outages.end()), raw.outages.end());
    c.report_.duplicates_removed += before - raw.outages.size();

    // Outage outliers: records per (substation, hour, cause) cell.
    if (!raw.outages.empty()) {
        std::map<std::tuple<std::string, HourIndex, Cause>, std::size_t> cells;
        for (const auto& o : raw.outages) ++cells[{o.substation_id, o.hour(), o.cause}];
        std::vector<double> counts;
        counts.reserve(cells.size());
        for (const auto& [key, n] : cells) counts.push_back(static_cast<double>(n));
        const IqrFences fences = iqr_fences(counts, options.iqr_multiplier);
        std::vector<OutageRecord> kept;
        kept.reserve(raw.outages.size());
        for (auto& o : raw.outages) {
            if (fences.contains(static_cast<double>(cells[{o.substation_id, o.hour(), o.cause}]))) {
                kept.push_back(std::move(o));
            } else {
                ++c.report_.outliers_removed;
            }
        }
        raw.outages = std::move(kept);
    }
    c.outages_ = std::move(raw.outages);

    // Weather grid over the global observed span.
    WeatherGrid& grid = c.weather_;
    std::unordered_map<std::string, int> station_idx;
    for (std::size_t i = 0; i < c.stations_.size(); ++i) station_idx.emplace(c.stations_[i].id, static_cast<int>(i));

    std::vector<WeatherObservation> obs;
    obs.reserve(raw.weather.size());
    for (auto& w : raw.weather) {
        if (!station_idx.contains(w.station_id)) {
            c.diagnostics_.push_back({"weather.csv", 0, fmt::format("unknown station '{}' dropped", w.station_id)});
            ++c.report_.rows_rejected;
            continue;
        }
        obs.push_back(std::move(w));
    }

    if (!obs.empty()) {
        HourIndex lo = std::numeric_limits<HourIndex>::max();
        HourIndex hi = std::numeric_limits<HourIndex>::min();
        for (const auto& w : obs) {
            lo = std::min(lo, timeutil::floor_hour(w.timestamp));
            hi = std::max(hi, timeutil::floor_hour(w.timestamp));
        }
        grid.first_hour = lo;
        grid.hours = static_cast<std::size_t>(hi - lo + 1);
    }

    grid.stations.resize(c.stations_.size());
    std::vector<std::vector<std::uint8_t>> seen(c.stations_.size());
    for (std::size_t i = 0; i < c.stations_.size(); ++i) {
        auto& s = grid.stations[i];
        s.station_id = c.stations_[i].id;
        s.gust_mph.assign(grid.hours, kNaN);
        s.storm.assign(grid.hours, 0);
        s.present.assign(grid.hours, 0);
        seen[i].assign(grid.hours, 0);
    }
    // First observation per (station, hour) wins; file order is preserved.
    for (const auto& w : obs) {
        const int si = station_idx.at(w.station_id);
        const auto h = static_cast<std::size_t>(timeutil::floor_hour(w.timestamp) - grid.first_hour);
        if (seen[si][h]) {
            ++c.report_.duplicates_removed;
            continue;
        }
        seen[si][h] = 1;
        auto& s = grid.stations[si];
        if (w.gust_mph) s.gust_mph[h] = *w.gust_mph;
        s.storm[h] = w.storm.value_or(false) ? 1 : 0;
    }

    for (std::size_t i = 0; i < grid.stations.size(); ++i) {
        auto& s = grid.stations[i];
        const auto observed = static_cast<std::size_t>(
            std::count_if(s.gust_mph.begin(), s.gust_mph.end(), [](double v) { return !std::isnan(v); }));
        if (observed < 2) {
            logger().warn("station '{}' has {} gust observations; left without weather", s.station_id, observed);
            c.diagnostics_.push_back({"weather.csv", 0, fmt::format("station '{}' has too few gust values", s.station_id)});
            continue;
        }
        c.report_.values_interpolated += grid.hours - observed;
        s.gust_mph = interpolate_missing(s.gust_mph);
        std::fill(s.present.begin(), s.present.end(), std::uint8_t{1});

        const OutlierResult out = remove_outliers(s.gust_mph, options.iqr_multiplier);
        for (const std::size_t h : out.removed_indices) {
            s.present[h] = 0;
            s.storm[h] = 0;
            s.gust_mph[h] = kNaN;
        }
        c.report_.outliers_removed += out.removed();
    }
    return c;
}

std::vector<double> interpolate_missing(std::span<const double> series) {
    std::vector<std::size_t> known;
    for (std::size_t i = 0; i < series.size(); ++i)
        if (!std::isnan(series[i])) known.push_back(i);
    if (known.size() < 2) throw std::invalid_argument("interpolation needs at least two observed values");

    std::vector<double> out(series.begin(), series.end());
    for (std::size_t i = 0; i < known.front(); ++i) out[i] = series[known.front()];
    for (std::size_t i = known.back() + 1; i < out.size(); ++i) out[i] = series[known.back()];
    for (std::size_t k = 0; k + 1 < known.size(); ++k) {
        const std::size_t a = known[k], b = known[k + 1];
        const double ya = series[a], yb = series[b];
        const auto span = static_cast<double>(b - a);
        for (std::size_t i = a + 1; i < b; ++i) {
            const double t = static_cast<double>(i - a) / span;
            out[i] = ya + t * (yb - ya);
        }
    }
    return out;
}

double quantile_type7(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

IqrFences iqr_fences(std::span<const double> samples, double multiplier) {
    if (samples.empty()) throw std::invalid_argument("outlier detection needs a non-empty sample");
    if (!(multiplier > 0)) throw std::invalid_argument("IQR multiplier must be > 0");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    IqrFences f;
    f.q1 = quantile_type7(sorted, 0.25);
    f.q3 = quantile_type7(sorted, 0.75);
    const double iqr = f.q3 - f.q1;
    f.lower = f.q1 - multiplier * iqr;
    f.upper = f.q3 + multiplier * iqr;
    return f;
}

OutlierResult remove_outliers(std::span<const double> samples, double multiplier) {
    OutlierResult r;
    r.fences = iqr_fences(samples, multiplier);
    r.kept.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (r.fences.contains(samples[i])) {
            r.kept.push_back(samples[i]);
        } else {
            r.removed_indices.push_back(i);
        }
    }
    return r;
}

}  // namespace vegout::ingest
