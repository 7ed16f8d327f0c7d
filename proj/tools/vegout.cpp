// Command-line front end: each subcommand recomputes its upstream stages from
// the raw corpus and writes its own artifacts into --out-dir.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "vegout/config.hpp"
#include "vegout/log.hpp"
#include "vegout/pipeline.hpp"
#include "vegout/synth.hpp"

namespace fs = std::filesystem;
using namespace vegout;

namespace {

struct Options {
    std::string config_path;
    std::string data_dir = "data";
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::string target_month;
    int synth_test_months = 7;
};

Config load_config(const Options& o) {
    Config c = o.config_path.empty() ? Config{} : Config::load(o.config_path);
    if (o.seed) c.seed = *o.seed;
    c.validate();
    return c;
}

int run(const std::string& command, const Options& o) {
    const Config cfg = load_config(o);
    const fs::path data(o.data_dir), out(o.out_dir);
    const std::optional<YearMonth> target =
        o.target_month.empty() ? std::nullopt : std::optional<YearMonth>(YearMonth::parse(o.target_month));

    if (command == "synth") {
        synth::SynthSpec spec;
        spec.seed = cfg.seed;
        spec.train_years = cfg.train_years;
        spec.test_months = o.synth_test_months;
        const auto truth = synth::generate(spec, data);
        fmt::print("wrote {} outages and {} weather rows to {}\n", truth.outages_written, truth.weather_rows_written,
                   data.string());
        return 0;
    }
    if (command == "report") {
        const auto rep = pipeline::write_report(data, out, target, cfg.risk_thresholds);
        fmt::print("risk report for {}: {} areas\n", rep.month.str(), rep.entries.size());
        return 0;
    }

    pipeline::Pipeline p(cfg, data);
    if (command == "ingest") {
        p.write_ingest(out);
    } else if (command == "cluster") {
        p.write_cluster(out);
        fmt::print("k = {}\n", p.cluster().elbow.chosen_k);
    } else if (command == "categorize") {
        p.write_categorize(out);
        fmt::print("growth {} weather {}\n", p.categorized().growth, p.categorized().weather);
    } else if (command == "features") {
        p.write_features(out);
    } else if (command == "fit-ts") {
        p.write_timeseries(out);
        fmt::print("selected {}\n", p.timeseries().selected_label);
    } else if (command == "fit-ml") {
        p.write_ml(out);
        fmt::print("selected {}\n", ml::family_name(p.ml().selected));
    } else if (command == "evaluate") {
        p.write_evaluation(out);
        for (const auto& m : p.evaluation().comparison.models)
            fmt::print("{:<32} {:.4f} [{:.4f}, {:.4f}]\n", m.model, m.mean, m.ci_low, m.ci_high);
    } else if (command == "predict") {
        p.write_ingest(out);
        p.write_cluster(out);
        p.write_categorize(out);
        p.write_features(out);
        p.write_timeseries(out);
        p.write_ml(out);
        p.write_predictions(out);
        if (!p.split().test.empty()) p.write_evaluation(out);
        const auto rep = pipeline::write_report(data, out, target, cfg.risk_thresholds);
        fmt::print("predictions written to {}; risk report for {}\n", out.string(), rep.month.str());
    } else {
        throw std::invalid_argument("unknown subcommand " + command);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Vegetation-related outage forecasting"};
    app.require_subcommand(1, 1);
    Options o;
    std::uint64_t seed = 0;

    const char* commands[][2] = {
        {"synth", "Generate a synthetic corpus into --data-dir"},
        {"ingest", "Load and cleanse the corpus; write cleansing.csv and diagnostics.csv"},
        {"cluster", "Cluster substations into areas; write areas.csv and elbow.csv"},
        {"categorize", "Label vegetation outages growth or weather; write categorized.csv"},
        {"features", "Build the monthly feature table; write features.csv"},
        {"fit-ts", "Select and fit the growth forecaster; write ts_forecasts.csv"},
        {"fit-ml", "Tune and fit the weather regressors; write ml_forecasts.csv and importance.csv"},
        {"predict", "Run the full chain and write every artifact"},
        {"evaluate", "Score proposed, naive and benchmark models; write eval.csv, summary.csv, monthly.csv"},
        {"report", "Categorise predicted risk; write risk.geojson and risk.csv"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config_path, "Config file (key = value)")->check(CLI::ExistingFile);
        sub->add_option("--data-dir", o.data_dir, "Corpus directory")->capture_default_str();
        sub->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
        sub->add_option("--seed", seed, "Master seed (overrides the config)");
        sub->add_option("--target-month", o.target_month, "Report month, YYYY-MM");
        if (std::string(name) == "synth")
            sub->add_option("--test-months", o.synth_test_months, "Months generated after the training years")
                ->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const CLI::App* chosen = app.get_subcommands().front();
    if (chosen->count("--seed") > 0) o.seed = seed;
    try {
        return run(chosen->get_name(), o);
    } catch (const std::exception& e) {
        std::cerr << "vegout " << chosen->get_name() << ": " << e.what() << '\n';
        return EXIT_FAILURE;
    }
}
