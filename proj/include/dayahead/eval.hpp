#pragma once

#include "dayahead/core.hpp"
#include "dayahead/forecaster.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dayahead::eval {

/// Chronological train/validation/test proportions.
struct SplitSpec {
    double train_frac = 0.70;
    double valid_frac = 0.15;
    double test_frac = 0.15;

    /// Throws ConfigError unless every fraction is in (0,1) and they sum to 1.
    void validate() const;
};

struct SplitCounts {
    std::size_t train = 0;
    std::size_t valid = 0;
    std::size_t test = 0;
};

/// Day counts: floor(train_frac*d), floor(valid_frac*d), remainder to test.
SplitCounts split_counts(std::size_t days, const SplitSpec& spec);

struct Split {
    core::MultiSeries train;
    core::MultiSeries validation;
    core::MultiSeries test;
    SplitCounts counts;
};

Split chrono_split(const core::MultiSeries& series, const SplitSpec& spec, std::size_t h);

/// Mean squared error over all h*p entries.
double mse(const core::DayMatrix& forecast, const core::DayMatrix& actual);

/// Ascending-error ranks from 1; ties share the average rank; +inf ranks last.
std::vector<double> rank_methods(std::span<const double> errors);

enum class Method { DayAhead, MeanDay, Omniscient, AR, HW };

std::string method_name(Method m);
Method parse_method(const std::string& name);
std::vector<Method> parse_methods(const std::string& comma_list);

struct BacktestConfig {
    SplitSpec split;
    std::size_t h = 96;
    forecaster::KRange k_range;
    std::uint64_t seed = 0;
    std::vector<Method> methods{Method::DayAhead, Method::MeanDay, Method::Omniscient, Method::AR,
                                Method::HW};
    /// 0 means one day of lags (order = h).
    std::size_t ar_order = 0;
    /// Empty means the default Holt-Winters grid.
    std::vector<double> hw_grid;
    std::size_t jobs = 1;
    std::string dataset_id = "series";
};

struct DatasetInfo {
    std::string id;
    std::size_t p = 0;
    /// 0 when no cluster-based method was run.
    std::size_t selected_k = 0;
    SplitCounts counts;
};

/// Raw normalized forecasts of one backtest, before scoring.
struct BacktestRun {
    std::vector<Method> methods;
    DatasetInfo info;
    core::NormStats norm;
    /// Global index of each test day.
    std::vector<std::size_t> day_index;
    /// Normalized actual test days.
    std::vector<core::DayMatrix> actual;
    /// forecasts[i][m]: normalized forecast of test day i by method m; empty on failure.
    std::vector<std::vector<std::optional<core::DayMatrix>>> forecasts;
    std::vector<std::string> warnings;
};

/// Trains every method and forecasts each test day from its predecessor.
BacktestRun collect_forecasts(const core::MultiSeries& series, const BacktestConfig& config);

struct ForecastRecord {
    std::string dataset;
    std::size_t day_index = 0;
    std::vector<double> errors;
    std::vector<double> ranks;
};

struct MethodSummary {
    std::string method;
    double mean_error = 0.0;
    double std_error = 0.0;
    double mean_rank = 0.0;
    double std_rank = 0.0;
};

struct EvalReport {
    std::string mode;
    std::size_t h = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> methods;
    std::vector<DatasetInfo> datasets;
    std::vector<ForecastRecord> records;
    std::vector<MethodSummary> summary;
    std::vector<std::string> warnings;
};

/// Recomputes ranks and the per-method summary from the error cells.
void summarize(EvalReport& report);

EvalReport score(const BacktestRun& run, const BacktestConfig& config);

/// collect_forecasts followed by score.
EvalReport run_backtest(const core::MultiSeries& series, const BacktestConfig& config);

/// One backtest per column; records are pooled before summarizing.
EvalReport run_univariate(const core::MultiSeries& series, const BacktestConfig& config);

/**
 * Joint multivariate run against per-column univariate runs on the same test
 * days. Univariate forecasts are stitched back into h x p days so every
 * method is scored on the full multivariate day.
 */
EvalReport run_comparison(const core::MultiSeries& series, const BacktestConfig& config);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

/// Aligned plain-text table: method, mean error ± std, mean rank ± std.
std::string render_table(const EvalReport& report);

/// dataset,day_index,<one error column per method>
std::string errors_to_csv(const EvalReport& report);

} // namespace dayahead::eval
