#include "vegout/categorize.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "vegout/log.hpp"

namespace vegout::categorize {

std::string_view category_name(Category c) noexcept { return c == Category::growth ? "growth" : "weather"; }

AreaEventSeries area_events(const ingest::WeatherGrid& grid, const geo::AreaMap& areas, AreaId area,
                            double gust_threshold_mph) {
    AreaEventSeries s;
    s.event.assign(grid.hours, 0);
    s.covered.assign(grid.hours, 0);
    for (const auto& id : areas.stations_in(area)) {
        const int si = grid.find(id);
        if (si < 0) continue;
        const auto& st = grid.stations[static_cast<std::size_t>(si)];
        for (std::size_t h = 0; h < grid.hours; ++h) {
            if (!st.present[h]) continue;
            s.covered[h] = 1;
            if (st.storm[h] || gust_event(st.gust_mph[h], gust_threshold_mph)) s.event[h] = 1;
        }
    }
    return s;
}

Result categorize_outages(const ingest::Corpus& corpus, const geo::AreaMap& areas, const Options& options) {
    if (!(options.gust_threshold_mph > 0)) throw std::invalid_argument("gust threshold must be > 0");
    if (options.lookback_hours < 0) throw std::invalid_argument("lookback must be >= 0");

    const auto& grid = corpus.weather();
    // Prefix sums per area so each window query is O(1).
    std::vector<std::vector<std::int64_t>> event_prefix(static_cast<std::size_t>(areas.area_count));
    std::vector<std::vector<std::int64_t>> cover_prefix(static_cast<std::size_t>(areas.area_count));
    for (AreaId a = 0; a < areas.area_count; ++a) {
        const AreaEventSeries s = area_events(grid, areas, a, options.gust_threshold_mph);
        auto& ep = event_prefix[static_cast<std::size_t>(a)];
        auto& cp = cover_prefix[static_cast<std::size_t>(a)];
        ep.assign(grid.hours + 1, 0);
        cp.assign(grid.hours + 1, 0);
        for (std::size_t h = 0; h < grid.hours; ++h) {
            ep[h + 1] = ep[h] + s.event[h];
            cp[h + 1] = cp[h] + s.covered[h];
        }
    }

    Result r;
    for (const auto& o : corpus.outages()) {
        if (o.cause != ingest::Cause::vegetation) continue;
        const auto it = areas.index_of.find(o.substation_id);
        if (it == areas.index_of.end())
            throw std::invalid_argument(fmt::format("substation '{}' missing from area map", o.substation_id));
        CategorizedOutage c{o, areas.area_of[static_cast<std::size_t>(it->second)], Category::growth, false};

        const auto a = static_cast<std::size_t>(c.area);
        const timeutil::HourIndex t = o.hour();
        const timeutil::HourIndex lo = std::max(t - options.lookback_hours, grid.first_hour);
        const timeutil::HourIndex hi = std::min(t, grid.first_hour + static_cast<timeutil::HourIndex>(grid.hours) - 1);
        std::int64_t events = 0, covered = 0;
        if (lo <= hi) {
            const auto b = static_cast<std::size_t>(lo - grid.first_hour);
            const auto e = static_cast<std::size_t>(hi - grid.first_hour) + 1;
            events = event_prefix[a][e] - event_prefix[a][b];
            covered = cover_prefix[a][e] - cover_prefix[a][b];
        }
        if (covered == 0) {
            c.uncovered = true;
            ++r.uncovered;
            logger().warn("outage at {} (substation {}) has no weather coverage; treated as growth",
                          timeutil::format_iso8601(o.timestamp), o.substation_id);
        } else if (events > 0) {
            c.category = Category::weather;
        }
        if (c.category == Category::weather) {
            ++r.weather;
        } else {
            ++r.growth;
        }
        r.outages.push_back(std::move(c));
    }
    return r;
}

}  // namespace vegout::categorize
