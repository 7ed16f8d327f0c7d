#include "vegout/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "vegout/csv.hpp"
#include "vegout/log.hpp"
#include "vegout/random.hpp"
#include "vegout/timeutil.hpp"

namespace vegout::pipeline {

namespace fs = std::filesystem;

namespace {

enum SeedStream : std::uint64_t { kCluster = 10, kMl = 20, kBenchmark = 30, kImportance = 40 };

constexpr ml::Family kFamilies[] = {ml::Family::rf, ml::Family::svr, ml::Family::mlp};

std::vector<const features::MonthlyFeatureRow*> rows_in(const features::FeatureTable& t, YearMonth first,
                                                        YearMonth last) {
    std::vector<const features::MonthlyFeatureRow*> out;
    for (const auto& r : t.rows)
        if (r.ym() >= first && r.ym() <= last) out.push_back(&r);
    return out;
}

std::vector<features::MonthlyFeatureRow> copy_rows(const std::vector<const features::MonthlyFeatureRow*>& rows) {
    std::vector<features::MonthlyFeatureRow> out;
    out.reserve(rows.size());
    for (const auto* r : rows) out.push_back(*r);
    return out;
}

}  // namespace

ml::Dataset weather_dataset(std::span<const features::MonthlyFeatureRow> rows) {
    ml::Dataset d;
    d.feature_names = {"gci", "gii", "sci", "aoi", "moi"};
    d.x = ml::Matrix(rows.size(), 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        auto x = d.x.row(i);
        x[0] = r.gci;
        x[1] = r.gii;
        x[2] = r.sci;
        x[3] = r.aoi;
        x[4] = r.moi;
        d.y.push_back(static_cast<double>(r.wvoci));
    }
    return d;
}

Pipeline::Pipeline(Config config, fs::path data_dir) : config_(std::move(config)), data_dir_(std::move(data_dir)) {
    config_.validate();
}

const ingest::Corpus& Pipeline::corpus() {
    if (!corpus_) {
        ingest::IngestOptions opt;
        opt.utc_offset_minutes = timeutil::parse_utc_offset(config_.timezone);
        opt.iqr_multiplier = config_.iqr_multiplier;
        opt.storm_keywords = config_.storm_keywords;
        corpus_ = ingest::load_corpus(ingest::CorpusPaths::in_directory(data_dir_), opt);
        const auto& r = corpus_->report();
        logger().info("ingest: {} outages, {} duplicates, {} interpolated, {} outliers, {} rejected rows",
                      corpus_->outages().size(), r.duplicates_removed, r.values_interpolated, r.outliers_removed,
                      r.rows_rejected);
    }
    return *corpus_;
}

const ClusterStage& Pipeline::cluster() {
    if (!cluster_) {
        const auto& c = corpus();
        std::vector<geo::Point> points;
        for (const auto& s : c.substations()) points.push_back({s.lat, s.lon});
        if (points.empty()) throw DataError("no substations to cluster");
        const geo::KMeansOptions opt{config_.kmeans_restarts, config_.kmeans_max_iter};
        ClusterStage st;
        st.elbow = geo::select_k(points, config_.k_min, config_.k_max, config_.elbow_threshold,
                                 derive_seed(config_.seed, kCluster), opt);
        const auto it = std::find_if(st.elbow.curve.begin(), st.elbow.curve.end(),
                                     [&](const auto& e) { return e.first == st.elbow.chosen_k; });
        const auto& model = st.elbow.models[static_cast<std::size_t>(it - st.elbow.curve.begin())];
        st.areas = geo::build_area_map(c.substations(), c.stations(), model);
        logger().info("cluster: k = {}", st.elbow.chosen_k);
        cluster_ = std::move(st);
    }
    return *cluster_;
}

const categorize::Result& Pipeline::categorized() {
    if (!categorized_) {
        categorize::Options opt;
        opt.gust_threshold_mph = config_.gust_threshold_mph;
        opt.lookback_hours = config_.lookback_hours;
        categorized_ = categorize::categorize_outages(corpus(), cluster().areas, opt);
    }
    return *categorized_;
}

const Split& Pipeline::split() {
    if (!split_) {
        const auto& c = corpus();
        std::optional<YearMonth> first, last;
        auto extend = [&](YearMonth m) {
            if (!first || m < *first) first = m;
            if (!last || m > *last) last = m;
        };
        if (c.weather().hours > 0) {
            extend(timeutil::month_of(c.weather().first_hour));
            extend(timeutil::month_of(c.weather().first_hour + static_cast<timeutil::HourIndex>(c.weather().hours) - 1));
        }
        for (const auto& o : c.outages()) extend(timeutil::month_of(o.hour()));
        if (!first) throw DataError("corpus has neither outages nor weather observations");
        Split s;
        s.train_first = *first;
        s.train_last = {first->year + config_.train_years - 1, 12};
        for (YearMonth m = *first; m <= *last; m = m.plus(1)) {
            s.all.push_back(m);
            (m <= s.train_last ? s.train : s.test).push_back(m);
        }
        if (s.test.empty()) logger().warn("no months after the {} training years; nothing to test", config_.train_years);
        split_ = std::move(s);
    }
    return *split_;
}

const features::FeatureTable& Pipeline::features() {
    if (!features_) {
        features::TableOptions opt;
        opt.gust_threshold_mph = config_.gust_threshold_mph;
        opt.day_start = config_.day_start;
        opt.day_end = config_.day_end;
        opt.hour_start = config_.hour_start;
        opt.hour_end = config_.hour_end;
        const auto& s = split();
        features_ = features::build_feature_table(corpus(), cluster().areas, categorized(), s.all, s.train_first,
                                                  s.train_last, opt);
    }
    return *features_;
}

const TsStage& Pipeline::timeseries() {
    if (ts_) return *ts_;
    const auto& s = split();
    const auto& table = features();
    const int area_count = cluster().areas.area_count;
    std::vector<std::vector<double>> series(static_cast<std::size_t>(area_count));
    for (const auto* r : rows_in(table, s.train_first, s.train_last))
        series[static_cast<std::size_t>(r->area)].push_back(static_cast<double>(r->gvoci));

    TsStage st;
    const ts::CvOptions cv{static_cast<std::size_t>(config_.ts_cv_window), static_cast<std::size_t>(config_.ts_cv_step),
                           static_cast<std::size_t>(config_.ts_cv_min_train)};
    const std::size_t n = s.train.size();
    std::vector<ts::CandidateSpec> emitted;
    if (n < 2 * ts::kSeasonLength || n <= cv.min_train) {
        logger().warn("growth series have {} months; using the seasonal naive forecast", n);
        st.fallback = true;
        st.selection.best.family = ts::CandidateSpec::Family::seasonal_naive;
        emitted.push_back(st.selection.best);
    } else {
        const auto grid = ts::default_grid();
        st.selection = ts::rolling_cv_select(series, grid, cv);
        emitted.push_back(st.selection.best);
        // Best candidate of the other family, for comparison.
        const ts::CandidateScore* other = nullptr;
        for (const auto& sc : st.selection.scores)
            if (!sc.failed && sc.spec.family != st.selection.best.family && (!other || sc.mean_nmae < other->mean_nmae))
                other = &sc;
        if (other) emitted.push_back(other->spec);
    }
    st.selected_label = st.selection.best.label();
    logger().info("fit-ts: selected {}", st.selected_label);

    const int horizon = static_cast<int>(s.test.size());
    if (horizon > 0) {
        for (std::size_t e = 0; e < emitted.size(); ++e) {
            const auto& spec = emitted[e];
            for (int a = 0; a < area_count; ++a) {
                std::vector<double> fc;
                try {
                    fc = ts::fit_and_forecast(spec, series[static_cast<std::size_t>(a)], horizon);
                } catch (const std::exception& ex) {
                    logger().warn("fit-ts: {} failed for area {} ({}); using seasonal naive", spec.label(), a,
                                  ex.what());
                    fc = ts::seasonal_naive(series[static_cast<std::size_t>(a)], horizon);
                }
                for (int h = 0; h < horizon; ++h) {
                    const YearMonth m = s.test[static_cast<std::size_t>(h)];
                    st.rows.push_back({a, m, spec.label(), fc[static_cast<std::size_t>(h)]});
                    if (e == 0) st.selected.push_back({a, m, fc[static_cast<std::size_t>(h)]});
                }
            }
        }
    }
    ts_ = std::move(st);
    return *ts_;
}

const MlStage& Pipeline::ml() {
    if (ml_) return *ml_;
    const auto& s = split();
    const auto& table = features();
    const auto train_rows = copy_rows(rows_in(table, s.train_first, s.train_last));
    const auto test_rows = s.test.empty() ? std::vector<features::MonthlyFeatureRow>{}
                                          : copy_rows(rows_in(table, s.test.front(), s.test.back()));
    const ml::Dataset train = weather_dataset(train_rows);
    const ml::Dataset test = weather_dataset(test_rows);
    if (train.size() < static_cast<std::size_t>(config_.ml_folds))
        throw DataError(fmt::format("only {} training rows for {}-fold tuning", train.size(), config_.ml_folds));

    MlStage st;
    double best_score = std::numeric_limits<double>::infinity();
    std::uint64_t stream = 0;
    for (ml::Family f : kFamilies) {
        auto grid = ml::default_grid(f, derive_seed(config_.seed, kMl + stream));
        for (auto& hp : grid) {
            hp.epochs = config_.mlp_epochs;
            hp.learning_rate = config_.mlp_learning_rate;
            hp.epsilon = config_.svr_epsilon;
        }
        auto tune = ml::kfold_tune(train, grid, config_.ml_folds, derive_seed(config_.seed, kMl + 10 + stream));
        ++stream;
        logger().info("fit-ml: {} best {} (cv nmae {:.4f})", ml::family_name(f), tune.best.label(),
                      tune.best_mean_nmae);
        if (tune.best_mean_nmae < best_score) {
            best_score = tune.best_mean_nmae;
            st.selected = f;
        }
        if (test.size() > 0) {
            const auto pred = ml::fit(train, tune.best)->predict(test.x);
            for (std::size_t i = 0; i < test_rows.size(); ++i)
                st.rows.push_back({test_rows[i].area, test_rows[i].ym(), std::string(ml::family_name(f)), pred[i]});
        }
        st.tuning.emplace(f, std::move(tune));
    }
    for (const auto& r : st.rows)
        if (r.model == ml::family_name(st.selected)) st.selected_cells.push_back({r.area, r.month, r.value});

    if (test.size() > 0) {
        const ml::Dataset shadow_train = ml::with_shadow_column(train, derive_seed(config_.seed, kImportance));
        const ml::Dataset shadow_test = ml::with_shadow_column(test, derive_seed(config_.seed, kImportance + 1));
        const auto model = ml::fit(shadow_train, st.tuning.at(st.selected).best);
        st.importance = ml::permutation_importance(*model, shadow_test, config_.importance_repetitions,
                                                   derive_seed(config_.seed, kImportance + 2));
    } else {
        logger().warn("fit-ml: no held-out months; permutation importance skipped");
    }
    ml_ = std::move(st);
    return *ml_;
}

const std::vector<eval::Prediction>& Pipeline::predictions() {
    if (!predictions_) predictions_ = eval::combine(timeseries().selected, ml().selected_cells);
    return *predictions_;
}

const EvalStage& Pipeline::evaluation() {
    if (eval_) return *eval_;
    const auto& s = split();
    if (s.test.empty()) throw DataError("no test months to evaluate");
    const auto& table = features();
    const auto train_rows = copy_rows(rows_in(table, s.train_first, s.train_last));
    const auto test_rows = copy_rows(rows_in(table, s.test.front(), s.test.back()));

    std::vector<eval::CellValue> history, toci, gvoci, wvoci;
    for (const auto& r : train_rows) history.push_back({r.area, r.ym(), static_cast<double>(r.gvoci + r.wvoci)});
    for (const auto& r : test_rows) {
        toci.push_back({r.area, r.ym(), static_cast<double>(r.gvoci + r.wvoci)});
        gvoci.push_back({r.area, r.ym(), static_cast<double>(r.gvoci)});
        wvoci.push_back({r.area, r.ym(), static_cast<double>(r.wvoci)});
    }

    EvalStage st;
    st.predictions = predictions();
    std::vector<eval::CellValue> proposed;
    for (const auto& p : st.predictions) proposed.push_back({p.area, p.month, p.toci_hat});
    const auto naive = eval::naive_forecasts(history, toci);

    eval::BenchmarkOptions bo;
    bo.folds = config_.benchmark_folds;
    bo.seed = derive_seed(config_.seed, kBenchmark);
    bo.mlp_epochs = config_.mlp_epochs;
    bo.mlp_learning_rate = config_.mlp_learning_rate;
    bo.svr_epsilon = config_.svr_epsilon;
    st.benchmark = eval::benchmark_forecast(train_rows, test_rows, cluster().areas.area_count, s.train_first.year, bo);

    st.scores.push_back(eval::score_model("proposed", proposed, toci));
    st.scores.push_back(eval::score_model("naive", naive, toci));
    st.scores.push_back(eval::score_model("benchmark", st.benchmark.forecasts, toci));

    std::map<std::string, std::vector<eval::CellValue>> streams;
    for (const auto& r : timeseries().rows) streams["growth:" + r.model].push_back({r.area, r.month, r.value});
    for (const auto& [name, cells] : streams) st.scores.push_back(eval::score_model(name, cells, gvoci));
    streams.clear();
    for (const auto& r : ml().rows) streams["weather:" + r.model].push_back({r.area, r.month, r.value});
    for (const auto& [name, cells] : streams) st.scores.push_back(eval::score_model(name, cells, wvoci));

    if (cluster().areas.area_count >= 2) st.comparison = eval::compare(st.scores);
    st.monthly["proposed"] = eval::monthly_totals(proposed, toci);
    st.monthly["naive"] = eval::monthly_totals(naive, toci);
    st.monthly["benchmark"] = eval::monthly_totals(st.benchmark.forecasts, toci);
    eval_ = std::move(st);
    return *eval_;
}

void Pipeline::write_ingest(const fs::path& out) {
    const auto& c = corpus();
    const auto& r = c.report();
    csv::Writer w(out / "cleansing.csv", {"metric", "value"});
    w.row({"outages", std::to_string(c.outages().size())});
    w.row({"substations", std::to_string(c.substations().size())});
    w.row({"stations", std::to_string(c.stations().size())});
    w.row({"weather_hours", std::to_string(c.weather().hours)});
    w.row({"duplicates_removed", std::to_string(r.duplicates_removed)});
    w.row({"values_interpolated", std::to_string(r.values_interpolated)});
    w.row({"outliers_removed", std::to_string(r.outliers_removed)});
    w.row({"rows_rejected", std::to_string(r.rows_rejected)});
    w.row({"iqr_multiplier", csv::num(r.iqr_multiplier)});
    csv::Writer d(out / "diagnostics.csv", {"file", "row", "message"});
    for (const auto& diag : c.diagnostics()) d.row({diag.file, std::to_string(diag.row), diag.message});
}

void Pipeline::write_cluster(const fs::path& out) {
    const auto& st = cluster();
    csv::Writer a(out / "areas.csv", {"substation_id", "area", "station_id"});
    for (std::size_t i = 0; i < st.areas.substation_ids.size(); ++i)
        a.row({st.areas.substation_ids[i], std::to_string(st.areas.area_of[i]), st.areas.station_of[i]});
    csv::Writer e(out / "elbow.csv", {"k", "J"});
    for (const auto& [k, j] : st.elbow.curve) e.row({std::to_string(k), csv::num(j, 9)});
}

void Pipeline::write_categorize(const fs::path& out) {
    csv::Writer w(out / "categorized.csv", {"timestamp", "substation_id", "area", "category"});
    for (const auto& o : categorized().outages)
        w.row({timeutil::format_iso8601(o.record.timestamp), o.record.substation_id, std::to_string(o.area),
               std::string(categorize::category_name(o.category))});
}

void Pipeline::write_features(const fs::path& out) {
    csv::Writer w(out / "features.csv",
                  {"year", "month", "area", "gvoci", "wvoci", "gci", "gii", "sci", "aoi", "moi"});
    for (const auto& r : features().rows)
        w.row({std::to_string(r.year), std::to_string(r.month), std::to_string(r.area), std::to_string(r.gvoci),
               std::to_string(r.wvoci), csv::num(r.gci), csv::num(r.gii), csv::num(r.sci), csv::num(r.aoi),
               csv::num(r.moi)});
}

void Pipeline::write_timeseries(const fs::path& out) {
    const auto& st = timeseries();
    csv::Writer w(out / "ts_forecasts.csv", {"area", "year", "month", "model", "gvoci_hat"});
    for (const auto& r : st.rows)
        w.row({std::to_string(r.area), std::to_string(r.month.year), std::to_string(r.month.month), r.model,
               csv::num(r.value)});
    csv::Writer cv(out / "ts_cv.csv", {"candidate", "parameters", "mean_nmae", "status"});
    for (const auto& sc : st.selection.scores)
        cv.row({sc.spec.label(), std::to_string(sc.spec.parameter_count()), sc.failed ? "" : csv::num(sc.mean_nmae),
                sc.failed ? "failed" : (sc.spec == st.selection.best ? "selected" : "ok")});
}

void Pipeline::write_ml(const fs::path& out) {
    const auto& st = ml();
    csv::Writer w(out / "ml_forecasts.csv", {"area", "year", "month", "model", "wvoci_hat"});
    for (const auto& r : st.rows)
        w.row({std::to_string(r.area), std::to_string(r.month.year), std::to_string(r.month.month), r.model,
               csv::num(r.value)});
    csv::Writer cv(out / "ml_cv.csv", {"family", "hyperparameters", "mean_nmae", "status"});
    for (const auto& [f, tune] : st.tuning)
        for (const auto& c : tune.candidates)
            cv.row({std::string(ml::family_name(f)), c.hp.label(), csv::num(c.mean_nmae),
                    c.hp.label() == tune.best.label() ? (f == st.selected ? "selected" : "best") : "ok"});
    csv::Writer imp(out / "importance.csv", {"feature", "score", "rank"});
    if (st.importance)
        for (const auto& fi : st.importance->features)
            imp.row({fi.feature, csv::num(fi.score), std::to_string(fi.rank)});
}

void Pipeline::write_predictions(const fs::path& out) {
    csv::Writer w(out / "predictions.csv", {"area", "year", "month", "gvoci_hat", "wvoci_hat", "toci_hat"});
    for (const auto& p : predictions())
        w.row({std::to_string(p.area), std::to_string(p.month.year), std::to_string(p.month.month),
               csv::num(p.gvoci_hat), csv::num(p.wvoci_hat), csv::num(p.toci_hat)});
}

void Pipeline::write_evaluation(const fs::path& out) {
    const auto& st = evaluation();
    csv::Writer e(out / "eval.csv", {"model", "area", "nmae"});
    for (const auto& m : st.scores)
        for (const auto& a : m.areas) e.row({m.model, std::to_string(a.area), csv::num(a.nmae)});
    csv::Writer s(out / "summary.csv", {"model", "mean_nmae", "ci_low", "ci_high"});
    for (const auto& m : st.comparison.models)
        s.row({m.model, csv::num(m.mean), csv::num(m.ci_low), csv::num(m.ci_high)});
    csv::Writer mo(out / "monthly.csv", {"model", "year", "month", "actual", "predicted"});
    for (const auto& [model, totals] : st.monthly)
        for (const auto& t : totals)
            mo.row({model, std::to_string(t.month.year), std::to_string(t.month.month), csv::num(t.actual),
                    csv::num(t.predicted)});
}

report::RiskReport write_report(const fs::path& data_dir, const fs::path& out_dir, std::optional<YearMonth> target,
                                const std::vector<double>& thresholds) {
    std::map<std::string, report::LonLat> coords;
    {
        csv::Reader r(data_dir / "substations.csv");
        r.require_header({"substation_id", "lat", "lon"});
        std::vector<std::string> f;
        while (r.next(f)) coords[f[0]] = {std::stod(f[2]), std::stod(f[1])};
    }
    std::map<AreaId, std::vector<report::LonLat>> members;
    {
        csv::Reader r(out_dir / "areas.csv");
        r.require_header({"substation_id", "area", "station_id"});
        std::vector<std::string> f;
        while (r.next(f)) {
            const auto it = coords.find(f[0]);
            if (it == coords.end())
                throw DataError(fmt::format("areas.csv row {}: substation {} not in substations.csv", r.row(), f[0]));
            members[std::stoi(f[1])].push_back(it->second);
        }
    }
    std::map<YearMonth, std::map<AreaId, double>> preds;
    {
        csv::Reader r(out_dir / "predictions.csv");
        r.require_header({"area", "year", "month", "gvoci_hat", "wvoci_hat", "toci_hat"});
        std::vector<std::string> f;
        while (r.next(f)) preds[{std::stoi(f[1]), std::stoi(f[2])}][std::stoi(f[0])] = std::stod(f[5]);
    }
    if (preds.empty()) throw DataError("predictions.csv has no rows");
    const YearMonth month = target.value_or(preds.rbegin()->first);
    const auto pm = preds.find(month);
    if (pm == preds.end()) throw DataError(fmt::format("no predictions for target month {}", month.str()));

    std::vector<report::RiskEntry> entries;
    for (const auto& [area, pts] : members) {
        const auto it = pm->second.find(area);
        if (it == pm->second.end())
            throw DataError(fmt::format("area {} has no prediction for {}", area, month.str()));
        report::RiskEntry e;
        e.area = area;
        e.toci_hat = it->second;
        e.substations = pts;
        for (const auto& p : pts) {
            e.centroid.lon += p.lon / static_cast<double>(pts.size());
            e.centroid.lat += p.lat / static_cast<double>(pts.size());
        }
        entries.push_back(std::move(e));
    }
    report::RiskReport rep = report::build_risk_report(month, std::move(entries), thresholds);

    fs::create_directories(out_dir);
    std::ofstream gj(out_dir / "risk.geojson");
    if (!gj) throw DataError(fmt::format("cannot write {}", (out_dir / "risk.geojson").string()));
    gj << report::to_geojson(rep).dump(2) << '\n';
    csv::Writer w(out_dir / "risk.csv",
                  {"area", "year", "month", "toci_hat", "category", "category_name", "centroid_lat", "centroid_lon"});
    for (const auto& e : rep.entries)
        w.row({std::to_string(e.area), std::to_string(month.year), std::to_string(month.month), csv::num(e.toci_hat),
               std::to_string(e.level), std::string(report::level_name(e.level)), csv::num(e.centroid.lat),
               csv::num(e.centroid.lon)});
    return rep;
}

}  // namespace vegout::pipeline
