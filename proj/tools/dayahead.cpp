// dayahead: day-ahead forecasting of server KPI series.
//
//   dayahead synth    --profile weekly --days 70 --output data.csv
//   dayahead train    --input data.csv --h 96 --k-min 2 --k-max 20 --model model.json
//   dayahead forecast --model model.json --input today.csv --output-dir out
//   dayahead evaluate --input data.csv --mode univariate --output-dir out
//   dayahead compare  --input data.csv --output-dir out
//
// Every flag may also be given in an INI file passed with --config.

#include "dayahead/cli/commands.hpp"
#include "dayahead/eval.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using dayahead::cli::RunConfig;

namespace {

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(std::stod(item));
    }
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& part : parts) {
        out += (out.empty() ? "" : ",") + part;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Day-ahead forecasting of multivariate KPI time series"};
    app.require_subcommand(1);
    // -h would clash with --h (points per day).
    app.set_help_flag("--help", "Print this help message and exit");
    app.set_config("--config", "", "INI file with flag=value lines");
    app.config_formatter(std::make_shared<CLI::ConfigINI>());

    RunConfig cfg;
    // Lists arrive either as one comma string or, from INI files, as several values.
    std::vector<std::string> split{"0.7,0.15,0.15"};
    std::vector<std::string> methods{cfg.methods};
    std::vector<std::string> hw_grid;

    app.add_option("--input", cfg.input, "Metric CSV (timestamp,<dim_1>,...)");
    app.add_option("--output-dir", cfg.output_dir, "Directory for generated files");
    app.add_option("--model", cfg.model, "Model JSON path (default <output-dir>/model.json)");
    app.add_option("--output", cfg.output, "Output CSV for synth");
    app.add_option("--h", cfg.h, "Points per day")->check(CLI::PositiveNumber);
    app.add_option("--k-min", cfg.k_min, "Smallest number of clusters tried");
    app.add_option("--k-max", cfg.k_max, "Largest number of clusters tried");
    app.add_option("--seed", cfg.seed, "Random seed");
    app.add_option("--split", split, "train,validation,test fractions")->expected(1, 3);
    app.add_option("--methods", methods, "Comma list of dayahead,meanday,omniscient,ar,hw")->expected(1, 5);
    app.add_option("--mode", cfg.mode, "univariate or multivariate")
        ->check(CLI::IsMember({"univariate", "multivariate"}));
    app.add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--ar-order", cfg.ar_order, "AR lags (0 = one day)");
    app.add_option("--hw-grid", hw_grid, "Comma list of candidate smoothing parameters")->expected(1, -1);
    app.add_option("--profile", cfg.profile, "Synthetic profile: weekly or planted-k");
    app.add_option("--days", cfg.days, "Synthetic days");
    app.add_option("--noise", cfg.noise, "Synthetic noise standard deviation");
    app.add_option("--k", cfg.synth_k, "Number of planted day shapes");
    app.add_option("--dims", cfg.dims, "Synthetic dimensions");

    auto* train = app.add_subcommand("train", "Fit a day-ahead model and write it as JSON")->fallthrough();
    auto* forecast = app.add_subcommand("forecast", "Forecast the day after a one-day CSV")->fallthrough();
    auto* evaluate = app.add_subcommand("evaluate", "Backtest methods on a 70/15/15 split")->fallthrough();
    auto* compare = app.add_subcommand("compare", "Univariate vs multivariate backtest")->fallthrough();
    auto* synth = app.add_subcommand("synth", "Generate a synthetic metric CSV")->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.split = dayahead::cli::parse_split(join(split));
        cfg.methods = join(methods);
        if (!hw_grid.empty()) {
            cfg.hw_grid = parse_grid(join(hw_grid));
        }
        if (*train) {
            const auto model = dayahead::cli::cmd_train(cfg);
            std::cout << "trained k=" << model.selected_k << " -> " << cfg.model_path() << '\n';
        } else if (*forecast) {
            const auto out = dayahead::cli::cmd_forecast(cfg);
            std::cout << "predicted_cluster=" << out.forecast.predicted_cluster << " -> " << out.csv_path << '\n';
        } else if (*evaluate) {
            const auto report = dayahead::cli::cmd_evaluate(cfg);
            std::cout << dayahead::eval::render_table(report);
        } else if (*compare) {
            const auto report = dayahead::cli::cmd_compare(cfg);
            std::cout << dayahead::eval::render_table(report);
        } else if (*synth) {
            std::cout << dayahead::cli::cmd_synth(cfg) << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
