#include "vegout/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "vegout/timeutil.hpp"

namespace vegout {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument(fmt::format("config key '{}': expected a number, got '{}'", key, v));
    }
}

long long to_int(const std::string& key, const std::string& v) {
    long long out = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
        throw std::invalid_argument(fmt::format("config key '{}': expected an integer, got '{}'", key, v));
    return out;
}

}  // namespace

void Config::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
    (void)timeutil::parse_utc_offset(timezone);
    if (!(iqr_multiplier > 0)) fail("iqr_multiplier must be > 0");
    if (!(gust_threshold_mph > 0)) fail("gust_threshold_mph must be > 0");
    if (lookback_hours <= 0) fail("lookback_hours must be > 0");
    if (k_min < 1 || k_max < k_min) fail("need 1 <= k_min <= k_max");
    if (!(elbow_threshold > 0 && elbow_threshold < 1)) fail("elbow_threshold must be in (0, 1)");
    if (kmeans_restarts < 1 || kmeans_max_iter < 1) fail("kmeans_restarts and kmeans_max_iter must be >= 1");
    if (train_years < 1) fail("train_years must be >= 1");
    if (hour_start < 0 || hour_end > 23 || hour_start > hour_end) fail("bad hour range");
    if (day_start < 1 || day_end > 31 || day_start > day_end) fail("bad day range");
    if (ts_cv_window < 1 || ts_cv_step < 1 || ts_cv_min_train < 1) fail("bad rolling-origin settings");
    if (ml_folds < 2 || benchmark_folds < 2) fail("fold counts must be >= 2");
    if (mlp_epochs < 0 || !(mlp_learning_rate > 0)) fail("bad mlp settings");
    if (svr_epsilon < 0) fail("svr_epsilon must be >= 0");
    if (importance_repetitions < 1) fail("importance_repetitions must be >= 1");
    if (!risk_thresholds.empty()) {
        if (risk_thresholds.size() != 3) fail("risk_thresholds needs exactly three values");
        if (!std::is_sorted(risk_thresholds.begin(), risk_thresholds.end())) fail("risk_thresholds must ascend");
    }
}

Config Config::parse(const std::string& text) {
    Config c;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    auto int_of = [](int& field) -> Setter {
        return [&field](const std::string& k, const std::string& v) { field = static_cast<int>(to_int(k, v)); };
    };
    auto dbl_of = [](double& field) -> Setter {
        return [&field](const std::string& k, const std::string& v) { field = to_double(k, v); };
    };
    const std::map<std::string, Setter> setters{
        {"timezone", [&](const std::string&, const std::string& v) { c.timezone = v; }},
        {"iqr_multiplier", dbl_of(c.iqr_multiplier)},
        {"storm_keywords", [&](const std::string&, const std::string& v) { c.storm_keywords = split_list(v); }},
        {"gust_threshold_mph", dbl_of(c.gust_threshold_mph)},
        {"lookback_hours", int_of(c.lookback_hours)},
        {"seed", [&](const std::string& k, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int(k, v)); }},
        {"k_min", int_of(c.k_min)},
        {"k_max", int_of(c.k_max)},
        {"elbow_threshold", dbl_of(c.elbow_threshold)},
        {"kmeans_restarts", int_of(c.kmeans_restarts)},
        {"kmeans_max_iter", int_of(c.kmeans_max_iter)},
        {"train_years", int_of(c.train_years)},
        {"hour_start", int_of(c.hour_start)},
        {"hour_end", int_of(c.hour_end)},
        {"day_start", int_of(c.day_start)},
        {"day_end", int_of(c.day_end)},
        {"ts_cv_window", int_of(c.ts_cv_window)},
        {"ts_cv_step", int_of(c.ts_cv_step)},
        {"ts_cv_min_train", int_of(c.ts_cv_min_train)},
        {"ml_folds", int_of(c.ml_folds)},
        {"benchmark_folds", int_of(c.benchmark_folds)},
        {"mlp_epochs", int_of(c.mlp_epochs)},
        {"mlp_learning_rate", dbl_of(c.mlp_learning_rate)},
        {"svr_epsilon", dbl_of(c.svr_epsilon)},
        {"importance_repetitions", int_of(c.importance_repetitions)},
        {"risk_thresholds",
         [&](const std::string& k, const std::string& v) {
             c.risk_thresholds.clear();
             for (const auto& item : split_list(v)) c.risk_thresholds.push_back(to_double(k, item));
         }},
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(fmt::format("config line {}: expected key = value", lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) throw std::invalid_argument(fmt::format("config line {}: unknown key '{}'", lineno, key));
        it->second(key, value);
    }
    c.validate();
    return c;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(fmt::format("cannot read config '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace vegout
