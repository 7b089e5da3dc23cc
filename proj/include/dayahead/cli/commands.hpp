#pragma once

#include "dayahead/cli/synth.hpp"
#include "dayahead/eval.hpp"
#include "dayahead/forecaster.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dayahead::cli {

/// Settings shared by every subcommand. All randomness derives from `seed`.
struct RunConfig {
    std::string input;
    std::string output_dir = ".";
    /// Model file for train (written) and forecast (read); defaults to <output_dir>/model.json.
    std::string model;
    /// Output file for synth; defaults to <output_dir>/synth.csv.
    std::string output;

    std::size_t h = 96;
    std::size_t k_min = 2;
    std::size_t k_max = 200;
    std::uint64_t seed = 0;
    eval::SplitSpec split;
    std::string methods = "dayahead,meanday,omniscient,ar,hw";
    std::string mode = "multivariate";
    std::size_t jobs = 1;
    std::size_t ar_order = 0;
    std::vector<double> hw_grid;

    // synth
    std::string profile = "weekly";
    std::size_t days = 70;
    double noise = 0.0;
    std::size_t synth_k = 3;
    std::size_t dims = 1;

    /// Throws ConfigError on inconsistent settings.
    void validate() const;
    eval::BacktestConfig backtest() const;
    std::string model_path() const;
};

eval::SplitSpec parse_split(const std::string& text);

/// Writes the model; returns it for callers that want to inspect it.
forecaster::DayAheadModel cmd_train(const RunConfig& config);

struct ForecastOutput {
    forecaster::Forecast forecast;
    std::string csv_path;
    std::string json_path;
};

ForecastOutput cmd_forecast(const RunConfig& config);

/// Writes report.json, report.txt and errors.csv under output_dir.
eval::EvalReport cmd_evaluate(const RunConfig& config);

/// Univariate vs multivariate comparison; writes compare.{json,txt,csv}.
eval::EvalReport cmd_compare(const RunConfig& config);

/// Returns the path written.
std::string cmd_synth(const RunConfig& config);

} // namespace dayahead::cli
