#include "dayahead/eval.hpp"

#include "dayahead/baselines.hpp"
#include "dayahead/clustering.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

namespace dayahead::eval {

using nlohmann::json;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

void SplitSpec::validate() const {
    for (double f : {train_frac, valid_frac, test_frac}) {
        if (!(f > 0.0 && f < 1.0)) {
            throw ConfigError("split fractions must lie in (0, 1)");
        }
    }
    if (std::abs(train_frac + valid_frac + test_frac - 1.0) > 1e-9) {
        throw ConfigError("split fractions must sum to 1");
    }
}

SplitCounts split_counts(std::size_t days, const SplitSpec& spec) {
    spec.validate();
    // The small offset keeps products such as 0.7 * 10 from flooring to 6.
    const auto floor_days = [days](double frac) {
        return static_cast<std::size_t>(std::floor(frac * static_cast<double>(days) + 1e-9));
    };
    SplitCounts c;
    c.train = floor_days(spec.train_frac);
    c.valid = floor_days(spec.valid_frac);
    c.test = days - c.train - c.valid;
    return c;
}

Split chrono_split(const core::MultiSeries& series, const SplitSpec& spec, std::size_t h) {
    if (h < 1) {
        throw ConfigError("points per day must be at least 1");
    }
    const std::size_t d = series.n() / h;
    if (d < 3) {
        throw InsufficientDataError("chronological split needs at least 3 complete days, got " +
                                    std::to_string(d));
    }
    const SplitCounts c = split_counts(d, spec);
    if (c.train == 0) {
        throw InsufficientDataError("training block is empty for " + std::to_string(d) + " days");
    }
    if (c.valid == 0) {
        throw InsufficientDataError("validation block is empty for " + std::to_string(d) + " days");
    }
    if (c.test == 0) {
        throw InsufficientDataError("test block is empty for " + std::to_string(d) + " days");
    }
    const std::size_t a = c.train * h;
    const std::size_t b = (c.train + c.valid) * h;
    const std::size_t e = d * h;
    return Split{series.slice(0, a), series.slice(a, b), series.slice(b, e), c};
}

double mse(const core::DayMatrix& forecast, const core::DayMatrix& actual) {
    if (!forecast.same_geometry(actual)) {
        throw GeometryError("forecast is " + std::to_string(forecast.h()) + "x" +
                            std::to_string(forecast.p()) + ", actual is " +
                            std::to_string(actual.h()) + "x" + std::to_string(actual.p()));
    }
    return core::mean_squared_error(forecast.flat(), actual.flat());
}

std::vector<double> rank_methods(std::span<const double> errors) {
    const std::size_t m = errors.size();
    auto key = [&](std::size_t i) { return std::isnan(errors[i]) ? kInf : errors[i]; };
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    std::vector<double> ranks(m);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && key(order[j + 1]) == key(order[i])) {
            ++j;
        }
        // Positions i..j (0-based) share ranks i+1..j+1.
        const double avg = static_cast<double>(i + j + 2) / 2.0;
        for (std::size_t q = i; q <= j; ++q) {
            ranks[order[q]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

std::string method_name(Method m) {
    switch (m) {
    case Method::DayAhead:
        return "dayahead";
    case Method::MeanDay:
        return "meanday";
    case Method::Omniscient:
        return "omniscient";
    case Method::AR:
        return "ar";
    case Method::HW:
        return "hw";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    for (Method m : {Method::DayAhead, Method::MeanDay, Method::Omniscient, Method::AR, Method::HW}) {
        if (method_name(m) == name) {
            return m;
        }
    }
    throw ConfigError("unknown method '" + name + "' (expected dayahead, meanday, omniscient, ar, hw)");
}

std::vector<Method> parse_methods(const std::string& comma_list) {
    std::vector<Method> out;
    std::stringstream ss(comma_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            continue;
        }
        const Method m = parse_method(item);
        if (std::find(out.begin(), out.end(), m) != out.end()) {
            throw ConfigError("method '" + item + "' listed twice");
        }
        out.push_back(m);
    }
    if (out.empty()) {
        throw ConfigError("method list is empty");
    }
    return out;
}

BacktestRun collect_forecasts(const core::MultiSeries& series, const BacktestConfig& config) {
    const std::size_t h = config.h;
    const Split split = chrono_split(series, config.split, h);
    const SplitCounts& c = split.counts;
    const std::size_t d = c.train + c.valid + c.test;

    BacktestRun run;
    run.methods = config.methods;
    run.info.id = config.dataset_id;
    run.info.p = series.p();
    run.info.counts = c;
    run.norm = core::compute_norm_stats(split.train);

    const auto normalized = core::apply_norm(series.slice(0, d * h), run.norm);
    const auto days = core::split_days(normalized, h);
    const std::size_t first_test = c.train + c.valid;
    const std::span<const core::DayMatrix> train_days(days.data(), c.train);
    const auto train_norm = normalized.slice(0, c.train * h);

    std::vector<std::vector<double>> columns;
    for (std::size_t j = 0; j < series.p(); ++j) {
        columns.push_back(normalized.column(j));
    }

    auto has = [&](Method m) {
        return std::find(config.methods.begin(), config.methods.end(), m) != config.methods.end();
    };
    auto fail = [&](Method m, const std::string& what) {
        run.warnings.push_back(config.dataset_id + ": " + method_name(m) + ": " + what);
        core::warn(run.warnings.back());
    };

    std::optional<forecaster::DayAheadModel> model;
    if (has(Method::DayAhead) || has(Method::Omniscient)) {
        forecaster::SelectOptions opts;
        opts.jobs = config.jobs;
        auto sel = forecaster::select_k(split.train, split.validation, config.k_range, h, config.seed, opts);
        for (auto& w : sel.warnings) {
            run.warnings.push_back(config.dataset_id + ": " + w);
        }
        run.info.selected_k = sel.best_k;
        model = std::move(sel.model);
    }

    std::optional<baselines::MeanDayModel> mean_model;
    if (has(Method::MeanDay)) {
        mean_model = baselines::fit_mean_day(train_days);
    }

    std::optional<baselines::ARModel> ar;
    if (has(Method::AR)) {
        try {
            ar = baselines::fit_ar(train_norm, config.ar_order == 0 ? h : config.ar_order);
        } catch (const Error& e) {
            fail(Method::AR, std::string("training failed: ") + e.what());
        }
    }

    std::optional<baselines::HoltWintersModel> hw;
    if (has(Method::HW)) {
        try {
            hw = baselines::fit_hw(train_norm, h, config.hw_grid);
            for (std::size_t j = 0; j < hw->dims.size(); ++j) {
                baselines::hw_update(hw->dims[j],
                                     std::span<const double>(columns[j]).subspan(c.train * h, c.valid * h));
            }
        } catch (const Error& e) {
            hw.reset();
            fail(Method::HW, std::string("training failed: ") + e.what());
        }
    }

    for (std::size_t g = first_test; g < d; ++g) {
        run.day_index.push_back(g);
        run.actual.push_back(days[g]);
        std::vector<std::optional<core::DayMatrix>> row;
        for (Method m : config.methods) {
            try {
                switch (m) {
                case Method::DayAhead:
                    row.emplace_back(forecaster::forecast_next_normalized(*model, days[g - 1]));
                    break;
                case Method::Omniscient:
                    row.emplace_back(baselines::forecast_omniscient_normalized(*model, days[g]));
                    break;
                case Method::MeanDay:
                    row.emplace_back(mean_model->mean_day);
                    break;
                case Method::AR: {
                    if (!ar) {
                        row.emplace_back();
                        break;
                    }
                    std::vector<std::span<const double>> hist;
                    for (const auto& col : columns) {
                        hist.emplace_back(col.data(), g * h);
                    }
                    row.emplace_back(baselines::forecast_ar(*ar, hist, h));
                    break;
                }
                case Method::HW:
                    if (!hw) {
                        row.emplace_back();
                        break;
                    }
                    row.emplace_back(baselines::forecast_hw(*hw, h));
                    break;
                }
            } catch (const Error& e) {
                row.emplace_back();
                fail(m, "forecast of day " + std::to_string(g) + " failed: " + e.what());
            }
        }
        if (hw) {
            for (std::size_t j = 0; j < hw->dims.size(); ++j) {
                baselines::hw_update(hw->dims[j], std::span<const double>(columns[j]).subspan(g * h, h));
            }
        }
        run.forecasts.push_back(std::move(row));
    }
    return run;
}

namespace {

double score_cell(const std::optional<core::DayMatrix>& forecast, const core::DayMatrix& actual) {
    if (!forecast) {
        return kInf;
    }
    const double e = mse(*forecast, actual);
    return std::isfinite(e) ? e : kInf;
}

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
    if (xs.empty()) {
        return {};
    }
    for (double x : xs) {
        if (!std::isfinite(x)) {
            return {kInf, kInf};
        }
    }
    double mean = 0.0;
    for (double x : xs) {
        mean += x;
    }
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) {
        var += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

} // namespace

void summarize(EvalReport& report) {
    const std::size_t m = report.methods.size();
    for (auto& r : report.records) {
        if (r.errors.size() != m) {
            throw ConfigError("record has " + std::to_string(r.errors.size()) + " errors for " +
                              std::to_string(m) + " methods");
        }
        r.ranks = rank_methods(r.errors);
    }
    report.summary.clear();
    for (std::size_t k = 0; k < m; ++k) {
        std::vector<double> errs;
        std::vector<double> ranks;
        for (const auto& r : report.records) {
            errs.push_back(r.errors[k]);
            ranks.push_back(r.ranks[k]);
        }
        const auto e = mean_std(errs);
        const auto rk = mean_std(ranks);
        report.summary.push_back({report.methods[k], e.mean, e.std, rk.mean, rk.std});
    }
}

EvalReport score(const BacktestRun& run, const BacktestConfig& config) {
    EvalReport report;
    report.mode = run.info.p > 1 ? "multivariate" : "univariate";
    report.h = config.h;
    report.seed = config.seed;
    for (Method m : run.methods) {
        report.methods.push_back(method_name(m));
    }
    report.datasets.push_back(run.info);
    report.warnings = run.warnings;
    for (std::size_t i = 0; i < run.actual.size(); ++i) {
        ForecastRecord rec;
        rec.dataset = run.info.id;
        rec.day_index = run.day_index[i];
        for (const auto& f : run.forecasts[i]) {
            rec.errors.push_back(score_cell(f, run.actual[i]));
        }
        report.records.push_back(std::move(rec));
    }
    summarize(report);
    return report;
}

EvalReport run_backtest(const core::MultiSeries& series, const BacktestConfig& config) {
    return score(collect_forecasts(series, config), config);
}

EvalReport run_univariate(const core::MultiSeries& series, const BacktestConfig& config) {
    const std::size_t p = series.p();
    std::vector<EvalReport> parts(p);
    detail::parallel_for(p, config.jobs, [&](std::size_t j) {
        BacktestConfig cfg = config;
        cfg.jobs = 1;
        cfg.dataset_id = series.dim_names()[j];
        parts[j] = run_backtest(series.select_dim(j), cfg);
    });

    EvalReport report;
    report.mode = "univariate";
    report.h = config.h;
    report.seed = config.seed;
    for (Method m : config.methods) {
        report.methods.push_back(method_name(m));
    }
    for (auto& part : parts) {
        report.datasets.insert(report.datasets.end(), part.datasets.begin(), part.datasets.end());
        report.records.insert(report.records.end(), part.records.begin(), part.records.end());
        report.warnings.insert(report.warnings.end(), part.warnings.begin(), part.warnings.end());
    }
    summarize(report);
    return report;
}

EvalReport run_comparison(const core::MultiSeries& series, const BacktestConfig& config) {
    const std::size_t p = series.p();
    const BacktestRun joint = collect_forecasts(series, config);

    BacktestConfig uv_cfg = config;
    uv_cfg.methods.clear();
    for (Method m : config.methods) {
        if (m == Method::DayAhead || m == Method::Omniscient) {
            uv_cfg.methods.push_back(m);
        }
    }
    std::vector<BacktestRun> columns(uv_cfg.methods.empty() ? 0 : p);
    detail::parallel_for(columns.size(), config.jobs, [&](std::size_t j) {
        BacktestConfig cfg = uv_cfg;
        cfg.jobs = 1;
        cfg.dataset_id = series.dim_names()[j];
        columns[j] = collect_forecasts(series.select_dim(j), cfg);
    });

    EvalReport report;
    report.mode = "compare";
    report.h = config.h;
    report.seed = config.seed;
    for (Method m : config.methods) {
        const bool per_cluster = m == Method::DayAhead || m == Method::Omniscient;
        report.methods.push_back(per_cluster ? "mv-" + method_name(m) : method_name(m));
    }
    for (Method m : uv_cfg.methods) {
        report.methods.push_back("uv-" + method_name(m));
    }
    report.datasets.push_back(joint.info);
    report.warnings = joint.warnings;
    for (const auto& col : columns) {
        report.datasets.push_back(col.info);
        report.warnings.insert(report.warnings.end(), col.warnings.begin(), col.warnings.end());
    }

    const std::size_t h = config.h;
    for (std::size_t i = 0; i < joint.actual.size(); ++i) {
        ForecastRecord rec;
        rec.dataset = joint.info.id;
        rec.day_index = joint.day_index[i];
        for (const auto& f : joint.forecasts[i]) {
            rec.errors.push_back(score_cell(f, joint.actual[i]));
        }
        for (std::size_t m = 0; m < uv_cfg.methods.size(); ++m) {
            std::optional<core::DayMatrix> stitched;
            std::vector<double> values(h * p);
            bool complete = true;
            for (std::size_t j = 0; j < p && complete; ++j) {
                const auto& part = columns[j].forecasts[i][m];
                if (!part) {
                    complete = false;
                    break;
                }
                for (std::size_t t = 0; t < h; ++t) {
                    values[t * p + j] = part->at(t, 0);
                }
            }
            if (complete) {
                stitched = core::DayMatrix(h, p, std::move(values));
            }
            rec.errors.push_back(score_cell(stitched, joint.actual[i]));
        }
        report.records.push_back(std::move(rec));
    }
    summarize(report);
    return report;
}

// ---------------------------------------------------------------------------

namespace {

json number(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    if (std::isnan(x)) {
        return "nan";
    }
    return x > 0 ? "inf" : "-inf";
}

double read_number(const json& j) {
    if (j.is_number()) {
        return j.get<double>();
    }
    const auto s = j.get<std::string>();
    if (s == "inf") {
        return kInf;
    }
    if (s == "-inf") {
        return -kInf;
    }
    if (s == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    throw DataError("unexpected numeric value '" + s + "' in report");
}

json numbers(const std::vector<double>& xs) {
    json arr = json::array();
    for (double x : xs) {
        arr.push_back(number(x));
    }
    return arr;
}

std::vector<double> read_numbers(const json& arr) {
    std::vector<double> out;
    for (const auto& v : arr) {
        out.push_back(read_number(v));
    }
    return out;
}

std::string fmt(const char* pattern, double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

} // namespace

std::string report_to_json(const EvalReport& report) {
    json doc;
    doc["mode"] = report.mode;
    doc["h"] = report.h;
    doc["seed"] = report.seed;
    doc["methods"] = report.methods;
    doc["datasets"] = json::array();
    for (const auto& d : report.datasets) {
        doc["datasets"].push_back({{"id", d.id},
                                   {"p", d.p},
                                   {"selected_k", d.selected_k},
                                   {"train_days", d.counts.train},
                                   {"valid_days", d.counts.valid},
                                   {"test_days", d.counts.test}});
    }
    doc["summary"] = json::array();
    for (const auto& s : report.summary) {
        doc["summary"].push_back({{"method", s.method},
                                  {"mean_error", number(s.mean_error)},
                                  {"std_error", number(s.std_error)},
                                  {"mean_rank", number(s.mean_rank)},
                                  {"std_rank", number(s.std_rank)}});
    }
    doc["records"] = json::array();
    for (const auto& r : report.records) {
        doc["records"].push_back({{"dataset", r.dataset},
                                  {"day_index", r.day_index},
                                  {"errors", numbers(r.errors)},
                                  {"ranks", numbers(r.ranks)}});
    }
    doc["warnings"] = report.warnings;
    return doc.dump(2);
}

EvalReport report_from_json(const std::string& text) {
    try {
        const json doc = json::parse(text);
        EvalReport report;
        report.mode = doc.at("mode").get<std::string>();
        report.h = doc.at("h").get<std::size_t>();
        report.seed = doc.at("seed").get<std::uint64_t>();
        report.methods = doc.at("methods").get<std::vector<std::string>>();
        for (const auto& d : doc.at("datasets")) {
            DatasetInfo info;
            info.id = d.at("id").get<std::string>();
            info.p = d.at("p").get<std::size_t>();
            info.selected_k = d.at("selected_k").get<std::size_t>();
            info.counts = {d.at("train_days").get<std::size_t>(), d.at("valid_days").get<std::size_t>(),
                           d.at("test_days").get<std::size_t>()};
            report.datasets.push_back(std::move(info));
        }
        for (const auto& s : doc.at("summary")) {
            report.summary.push_back({s.at("method").get<std::string>(), read_number(s.at("mean_error")),
                                      read_number(s.at("std_error")), read_number(s.at("mean_rank")),
                                      read_number(s.at("std_rank"))});
        }
        for (const auto& r : doc.at("records")) {
            report.records.push_back({r.at("dataset").get<std::string>(), r.at("day_index").get<std::size_t>(),
                                      read_numbers(r.at("errors")), read_numbers(r.at("ranks"))});
        }
        report.warnings = doc.at("warnings").get<std::vector<std::string>>();
        return report;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
}

std::string render_table(const EvalReport& report) {
    std::vector<std::array<std::string, 3>> rows;
    rows.push_back({"Algorithm", "Mean error ± std", "Mean rank ± std"});
    for (const auto& s : report.summary) {
        rows.push_back({s.method, fmt("%.4g", s.mean_error) + " ± " + fmt("%.4g", s.std_error),
                        fmt("%.2f", s.mean_rank) + " ± " + fmt("%.2f", s.std_rank)});
    }
    // "±" is two bytes in UTF-8 but one column wide.
    auto width = [](const std::string& s) {
        std::size_t w = 0;
        for (unsigned char ch : s) {
            w += (ch & 0xC0) != 0x80 ? 1 : 0;
        }
        return w;
    };
    std::array<std::size_t, 3> widths{};
    for (const auto& r : rows) {
        for (std::size_t c = 0; c < 3; ++c) {
            widths[c] = std::max(widths[c], width(r[c]));
        }
    }

    std::ostringstream out;
    std::size_t k_sum = 0;
    std::size_t k_count = 0;
    for (const auto& d : report.datasets) {
        if (d.selected_k > 0) {
            k_sum += d.selected_k;
            ++k_count;
        }
    }
    out << "mode=" << report.mode << " h=" << report.h << " seed=" << report.seed
        << " datasets=" << report.datasets.size() << " forecasts=" << report.records.size();
    if (k_count > 0) {
        out << " mean_selected_k=" << fmt("%.2f", static_cast<double>(k_sum) / static_cast<double>(k_count));
    }
    out << '\n';
    const std::size_t total = widths[0] + widths[1] + widths[2] + 6;
    const std::string rule(total, '-');
    out << rule << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < 3; ++c) {
            out << rows[i][c];
            if (c < 2) {
                out << std::string(widths[c] - width(rows[i][c]) + 3, ' ');
            }
        }
        out << '\n';
        if (i == 0) {
            out << rule << '\n';
        }
    }
    out << rule << '\n';
    return out.str();
}

std::string errors_to_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "dataset,day_index";
    for (const auto& m : report.methods) {
        out << ',' << m;
    }
    out << '\n';
    for (const auto& r : report.records) {
        out << r.dataset << ',' << r.day_index;
        for (double e : r.errors) {
            out << ',' << fmt("%.17g", e);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace dayahead::eval
