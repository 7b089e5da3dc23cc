#include "dayahead/cli/commands.hpp"

#include "dayahead/cli/csv.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace dayahead::cli {

namespace fs = std::filesystem;

namespace {

std::string in_dir(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create output directory " + dir + ": " + ec.message());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path);
    }
    out << text;
}

void write_report(const eval::EvalReport& report, const std::string& dir, const std::string& stem) {
    ensure_dir(dir);
    write_text(in_dir(dir, stem + ".json"), eval::report_to_json(report) + "\n");
    write_text(in_dir(dir, stem + ".txt"), eval::render_table(report));
    write_text(in_dir(dir, stem == "report" ? "errors.csv" : stem + "_errors.csv"),
               eval::errors_to_csv(report));
}

} // namespace

eval::SplitSpec parse_split(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw ConfigError("invalid split fraction '" + item + "'");
        }
    }
    if (parts.size() != 3) {
        throw ConfigError("split needs three comma-separated fractions, got '" + text + "'");
    }
    eval::SplitSpec spec{parts[0], parts[1], parts[2]};
    spec.validate();
    return spec;
}

void RunConfig::validate() const {
    if (h < 1) {
        throw ConfigError("--h must be at least 1");
    }
    if (k_min < 1 || k_min > k_max) {
        throw ConfigError("need 1 <= k-min <= k-max (got " + std::to_string(k_min) + ", " +
                          std::to_string(k_max) + ")");
    }
    if (jobs < 1) {
        throw ConfigError("--jobs must be at least 1");
    }
    if (mode != "univariate" && mode != "multivariate") {
        throw ConfigError("--mode must be univariate or multivariate");
    }
    split.validate();
    eval::parse_methods(methods);
}

eval::BacktestConfig RunConfig::backtest() const {
    eval::BacktestConfig cfg;
    cfg.split = split;
    cfg.h = h;
    cfg.k_range = {k_min, k_max};
    cfg.seed = seed;
    cfg.methods = eval::parse_methods(methods);
    cfg.ar_order = ar_order;
    cfg.hw_grid = hw_grid;
    cfg.jobs = jobs;
    cfg.dataset_id = input.empty() ? "series" : fs::path(input).stem().string();
    return cfg;
}

std::string RunConfig::model_path() const {
    return model.empty() ? in_dir(output_dir, "model.json") : model;
}

forecaster::DayAheadModel cmd_train(const RunConfig& config) {
    config.validate();
    const auto series = ingest_csv(config.input);
    const std::size_t d = series.n() / config.h;
    if (d < config.k_min + 1) {
        throw InsufficientDataError("training needs at least k-min + 1 = " +
                                    std::to_string(config.k_min + 1) + " complete days, got " +
                                    std::to_string(d));
    }

    forecaster::DayAheadModel model;
    if (config.k_min == config.k_max) {
        model = forecaster::train(series, config.k_min, config.h, config.seed);
    } else {
        // The test share is not needed here: the last days are used for validation only.
        const double train_share = config.split.train_frac / (config.split.train_frac + config.split.valid_frac);
        auto train_days = static_cast<std::size_t>(train_share * static_cast<double>(d) + 1e-9);
        train_days = std::clamp<std::size_t>(train_days, 1, d - 1);
        const auto train = series.slice(0, train_days * config.h);
        const auto valid = series.slice(train_days * config.h, d * config.h);
        forecaster::SelectOptions opts;
        opts.jobs = config.jobs;
        model = forecaster::select_k(train, valid, {config.k_min, config.k_max}, config.h, config.seed, opts)
                    .model;
    }
    const std::string path = config.model_path();
    if (fs::path(path).has_parent_path()) {
        ensure_dir(fs::path(path).parent_path().string());
    }
    forecaster::save_model(model, path);
    return model;
}

ForecastOutput cmd_forecast(const RunConfig& config) {
    const auto model = forecaster::load_model(config.model_path());
    const auto day_series = ingest_csv(config.input);
    if (day_series.n() != model.h || day_series.p() != model.p) {
        throw GeometryError("forecast input must hold exactly one day of " + std::to_string(model.h) +
                            " rows x " + std::to_string(model.p) + " columns, got " +
                            std::to_string(day_series.n()) + " x " + std::to_string(day_series.p()));
    }
    const core::DayMatrix day(model.h, model.p, day_series.values());

    ForecastOutput out;
    out.forecast = forecaster::forecast_next(model, day);

    const auto& ts = day_series.timestamps();
    const core::Timestamp step = ts.size() > 1 ? ts[1] - ts[0] : kDefaultStepSeconds;
    std::vector<core::Timestamp> next(model.h);
    for (std::size_t t = 0; t < model.h; ++t) {
        next[t] = ts.back() + static_cast<core::Timestamp>(t + 1) * step;
    }
    const core::MultiSeries forecast_series(model.h, model.p, out.forecast.values.values(), model.dim_names,
                                            std::move(next));
    ensure_dir(config.output_dir);
    out.csv_path = in_dir(config.output_dir, "forecast.csv");
    out.json_path = in_dir(config.output_dir, "forecast.json");
    write_csv_file(out.csv_path, forecast_series);
    const nlohmann::json meta = {{"predicted_cluster", out.forecast.predicted_cluster},
                                 {"h", model.h},
                                 {"p", model.p},
                                 {"selected_k", model.selected_k},
                                 {"first_timestamp", format_timestamp(forecast_series.timestamps().front())}};
    write_text(out.json_path, meta.dump(2) + "\n");
    return out;
}

eval::EvalReport cmd_evaluate(const RunConfig& config) {
    config.validate();
    const auto series = ingest_csv(config.input);
    const auto bt = config.backtest();
    auto report = config.mode == "univariate" ? eval::run_univariate(series, bt) : eval::run_backtest(series, bt);
    report.mode = config.mode;
    write_report(report, config.output_dir, "report");
    return report;
}

eval::EvalReport cmd_compare(const RunConfig& config) {
    config.validate();
    const auto series = ingest_csv(config.input);
    auto report = eval::run_comparison(series, config.backtest());
    write_report(report, config.output_dir, "compare");
    return report;
}

std::string cmd_synth(const RunConfig& config) {
    SynthOptions opts;
    opts.profile = parse_profile(config.profile);
    opts.days = config.days;
    opts.h = config.h;
    opts.dims = config.dims;
    opts.noise = config.noise;
    opts.seed = config.seed;
    opts.k = config.synth_k;
    const auto data = generate(opts);
    const std::string path = config.output.empty() ? in_dir(config.output_dir, "synth.csv") : config.output;
    if (fs::path(path).has_parent_path()) {
        ensure_dir(fs::path(path).parent_path().string());
    }
    write_csv_file(path, data.series);
    return path;
}

} // namespace dayahead::cli
