#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vegout/common.hpp"
#include "vegout/timeutil.hpp"

namespace vegout::ingest {

using timeutil::HourIndex;
using timeutil::UnixSeconds;

enum class Cause : std::uint8_t { vegetation, other };

std::string_view cause_name(Cause c) noexcept;

struct OutageRecord {
    UnixSeconds timestamp = 0;
    std::string substation_id;
    Cause cause = Cause::vegetation;

    [[nodiscard]] HourIndex hour() const noexcept { return timeutil::floor_hour(timestamp); }
    auto operator<=>(const OutageRecord&) const = default;
};

struct WeatherObservation {
    UnixSeconds timestamp = 0;
    std::string station_id;
    std::optional<double> gust_mph;  // empty field => missing
    std::optional<bool> storm;       // empty condition => missing
};

struct SubstationInfo {
    std::string id;
    double lat = 0.0;
    double lon = 0.0;
};

using StationInfo = SubstationInfo;

struct CleansingReport {
    std::size_t duplicates_removed = 0;
    std::size_t values_interpolated = 0;
    std::size_t outliers_removed = 0;
    std::size_t rows_rejected = 0;
    double iqr_multiplier = 1.5;
};

/// A row that failed validation and was skipped.
struct RowDiagnostic {
    std::string file;
    std::size_t row = 0;
    std::string message;
};

struct IngestOptions {
    int utc_offset_minutes = 0;
    double iqr_multiplier = 1.5;
    std::vector<std::string> storm_keywords{"thunderstorm", "heavy rain"};
};

/// Cleansed hourly weather of one station. All vectors span the corpus
/// weather range; `present[h] == 0` marks hours without a usable record
/// (no data to interpolate from, or dropped as an outlier).
struct StationSeries {
    std::string station_id;
    std::vector<double> gust_mph;
    std::vector<std::uint8_t> storm;
    std::vector<std::uint8_t> present;
};

struct WeatherGrid {
    HourIndex first_hour = 0;
    std::size_t hours = 0;
    std::vector<StationSeries> stations;

    [[nodiscard]] bool covers(HourIndex h) const noexcept {
        return h >= first_hour && h < first_hour + static_cast<HourIndex>(hours);
    }
    /// Station index by id, or -1.
    [[nodiscard]] int find(const std::string& station_id) const noexcept;
};

/// Raw rows as parsed from the four CSV files, before cleansing.
struct RawTables {
    std::vector<OutageRecord> outages;
    std::vector<std::size_t> outage_rows;  // file row of each outage, for diagnostics
    std::vector<WeatherObservation> weather;
    std::vector<SubstationInfo> substations;
    std::vector<StationInfo> stations;
    std::vector<RowDiagnostic> diagnostics;
};

/// Validated and cleansed data set. Immutable once built.
class Corpus {
public:
    Corpus() = default;

    [[nodiscard]] const std::vector<OutageRecord>& outages() const noexcept { return outages_; }
    [[nodiscard]] const std::vector<SubstationInfo>& substations() const noexcept { return substations_; }
    [[nodiscard]] const std::vector<StationInfo>& stations() const noexcept { return stations_; }
    [[nodiscard]] const WeatherGrid& weather() const noexcept { return weather_; }
    [[nodiscard]] const CleansingReport& report() const noexcept { return report_; }
    [[nodiscard]] const std::vector<RowDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

    /// Index into substations(), or -1.
    [[nodiscard]] int substation_index(const std::string& id) const noexcept;

private:
    friend Corpus build_corpus(RawTables raw, const IngestOptions& options);

    std::vector<OutageRecord> outages_;
    std::vector<SubstationInfo> substations_;
    std::vector<StationInfo> stations_;
    WeatherGrid weather_;
    CleansingReport report_;
    std::vector<RowDiagnostic> diagnostics_;
    std::unordered_map<std::string, int> substation_lookup_;
};

struct CorpusPaths {
    std::filesystem::path outages;
    std::filesystem::path weather;
    std::filesystem::path substations;
    std::filesystem::path stations;

    /// Conventional file names inside one directory.
    static CorpusPaths in_directory(const std::filesystem::path& dir);
};

/// Parses the four CSV files. Rows with unparseable mandatory fields are
/// skipped and reported; a missing file or malformed header throws DataError.
RawTables read_tables(const CorpusPaths& paths, const IngestOptions& options);

/// Cleanses in the fixed order dedup -> interpolate -> outlier removal.
/// Throws DataError when an outage references an unknown substation or
/// geography ids repeat.
Corpus build_corpus(RawTables raw, const IngestOptions& options);

inline Corpus load_corpus(const CorpusPaths& paths, const IngestOptions& options = {}) {
    return build_corpus(read_tables(paths, options), options);
}

/// Linear interpolation of NaN gaps between the nearest observed neighbours.
/// Leading and trailing gaps take the nearest observed value. Throws
/// std::invalid_argument with fewer than two observed values.
std::vector<double> interpolate_missing(std::span<const double> series);

/// Linear-interpolation quantile between order statistics ("type 7").
/// `sorted` must be ascending and non-empty.
double quantile_type7(std::span<const double> sorted, double p);

struct IqrFences {
    double q1 = 0.0;
    double q3 = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    [[nodiscard]] bool contains(double v) const noexcept { return v >= lower && v <= upper; }
};

IqrFences iqr_fences(std::span<const double> samples, double multiplier);

struct OutlierResult {
    std::vector<double> kept;
    std::vector<std::size_t> removed_indices;
    IqrFences fences;
    [[nodiscard]] std::size_t removed() const noexcept { return removed_indices.size(); }
};

/// Drops samples outside [Q1 - m*IQR, Q3 + m*IQR]. Applying it again to
/// `kept` may remove more, since the fences move.
OutlierResult remove_outliers(std::span<const double> samples, double multiplier = 1.5);

/// True when `condition` contains any keyword, ignoring case.
bool is_storm_condition(std::string_view condition, std::span<const std::string> keywords);

}  // namespace vegout::ingest
