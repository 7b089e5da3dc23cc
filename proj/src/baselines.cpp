#include "dayahead/baselines.hpp"

#include "dayahead/clustering.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <string>

namespace dayahead::baselines {

MeanDayModel fit_mean_day(std::span<const core::DayMatrix> days) {
    if (days.empty()) {
        throw InsufficientDataError("mean day needs at least one training day");
    }
    MeanDayModel model;
    model.mean_day = core::mean_day(days);
    model.h = model.mean_day.h();
    model.p = model.mean_day.p();
    return model;
}

forecaster::Forecast forecast_mean_day(const MeanDayModel& model) {
    return forecaster::Forecast{model.mean_day, 0, 0};
}

core::DayMatrix forecast_omniscient_normalized(const forecaster::DayAheadModel& model,
                                               const core::DayMatrix& true_next_day_normalized) {
    return model.clusters.centroid_day(clustering::assign(model.clusters, true_next_day_normalized));
}

forecaster::Forecast forecast_omniscient(const forecaster::DayAheadModel& model,
                                         const core::DayMatrix& true_next_day) {
    if (true_next_day.h() != model.h || true_next_day.p() != model.p) {
        throw GeometryError("true next day does not match the model geometry");
    }
    const auto normalized = core::apply_norm(true_next_day, model.norm);
    const std::size_t cluster = clustering::assign(model.clusters, normalized);
    forecaster::Forecast out;
    out.values = core::denorm(model.clusters.centroid_day(cluster), model.norm);
    out.predicted_cluster = cluster;
    out.source_day_index = true_next_day.day_index() == 0 ? 0 : true_next_day.day_index() - 1;
    return out;
}

// ---------------------------------------------------------------------------

ARFit fit_ar(std::span<const double> series, std::size_t order) {
    if (order < 1) {
        throw ConfigError("AR order must be at least 1");
    }
    const std::size_t n = series.size();
    if (n <= order + 1) {
        throw InsufficientDataError("AR(" + std::to_string(order) + ") needs more than " +
                                    std::to_string(order + 1) + " points, got " + std::to_string(n));
    }
    const auto rows = static_cast<Eigen::Index>(n - order);
    const auto cols = static_cast<Eigen::Index>(order + 1);
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd target(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::size_t t = static_cast<std::size_t>(r) + order;
        design(r, 0) = 1.0;
        for (std::size_t lag = 1; lag <= order; ++lag) {
            design(r, static_cast<Eigen::Index>(lag)) = series[t - lag];
        }
        target(r) = series[t];
    }

    ARFit fit;
    fit.coeffs.assign(order, 0.0);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < cols) {
        fit.intercept_only = true;
        fit.intercept = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
        return fit;
    }
    const Eigen::VectorXd beta = qr.solve(target);
    fit.intercept = beta(0);
    for (std::size_t i = 0; i < order; ++i) {
        fit.coeffs[i] = beta(static_cast<Eigen::Index>(i + 1));
    }
    return fit;
}

ARModel fit_ar(const core::MultiSeries& series, std::size_t order) {
    ARModel model;
    model.order = order;
    for (std::size_t j = 0; j < series.p(); ++j) {
        const auto col = series.column(j);
        model.dims.push_back(fit_ar(col, order));
    }
    return model;
}

std::vector<double> forecast_ar(const ARFit& fit, std::span<const double> history, std::size_t steps) {
    const std::size_t order = fit.coeffs.size();
    if (fit.intercept_only) {
        return std::vector<double>(steps, fit.intercept);
    }
    if (history.size() < order) {
        throw InsufficientDataError("AR forecast needs " + std::to_string(order) +
                                    " history points, got " + std::to_string(history.size()));
    }
    // Rolling window: window[order - 1] is the most recent value.
    std::vector<double> window(history.end() - static_cast<std::ptrdiff_t>(order), history.end());
    std::vector<double> out;
    out.reserve(steps);
    for (std::size_t s = 0; s < steps; ++s) {
        double y = fit.intercept;
        for (std::size_t lag = 0; lag < order; ++lag) {
            y += fit.coeffs[lag] * window[order - 1 - lag];
        }
        out.push_back(y);
        if (order > 0) {
            window.erase(window.begin());
            window.push_back(y);
        }
    }
    return out;
}

core::DayMatrix forecast_ar(const ARModel& model, std::span<const std::span<const double>> histories,
                            std::size_t steps) {
    const std::size_t p = model.dims.size();
    if (histories.size() != p) {
        throw GeometryError("AR model has " + std::to_string(p) + " dimensions, got " +
                            std::to_string(histories.size()) + " histories");
    }
    std::vector<double> values(steps * p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto f = forecast_ar(model.dims[j], histories[j], steps);
        for (std::size_t t = 0; t < steps; ++t) {
            values[t * p + j] = f[t];
        }
    }
    return core::DayMatrix(steps, p, std::move(values));
}

// ---------------------------------------------------------------------------

std::vector<double> default_hw_grid() { return {0.1, 0.3, 0.5, 0.7, 0.9}; }

namespace {

// One-step-ahead smoothing over `observations`; returns the SSE of the predictions.
double hw_run(HWComponent& c, std::span<const double> observations) {
    const std::size_t s = c.seasonals.size();
    double sse = 0.0;
    for (double x : observations) {
        const std::size_t phase = c.observed % s;
        const double season = c.seasonals[phase];
        const double predicted = c.level + c.trend + season;
        const double err = x - predicted;
        sse += err * err;
        const double prev_level = c.level;
        c.level = c.alpha * (x - season) + (1.0 - c.alpha) * (c.level + c.trend);
        c.trend = c.beta * (c.level - prev_level) + (1.0 - c.beta) * c.trend;
        c.seasonals[phase] = c.gamma * (x - c.level) + (1.0 - c.gamma) * season;
        ++c.observed;
    }
    return sse;
}

HWComponent hw_initial(std::span<const double> series, std::size_t s) {
    double first = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        first += series[i];
        second += series[s + i];
    }
    first /= static_cast<double>(s);
    second /= static_cast<double>(s);

    HWComponent c;
    c.level = first;
    c.trend = (second - first) / static_cast<double>(s);
    c.seasonals.resize(s);
    for (std::size_t i = 0; i < s; ++i) {
        c.seasonals[i] = series[i] - first;
    }
    c.observed = s;
    return c;
}

} // namespace

HWComponent fit_hw(std::span<const double> series, std::size_t season_length,
                   std::span<const double> grid) {
    if (season_length < 1) {
        throw ConfigError("season length must be at least 1");
    }
    if (series.size() < 2 * season_length) {
        throw InsufficientDataError("Holt-Winters needs two full seasons (" +
                                    std::to_string(2 * season_length) + " points), got " +
                                    std::to_string(series.size()));
    }
    const auto fallback = default_hw_grid();
    if (grid.empty()) {
        grid = fallback;
    }
    for (double g : grid) {
        if (!(g >= 0.0 && g <= 1.0)) {
            throw ConfigError("Holt-Winters grid values must lie in [0, 1]");
        }
    }

    const HWComponent initial = hw_initial(series, season_length);
    const auto rest = series.subspan(season_length);
    HWComponent best;
    bool have_best = false;
    for (double a : grid) {
        for (double b : grid) {
            for (double g : grid) {
                HWComponent c = initial;
                c.alpha = a;
                c.beta = b;
                c.gamma = g;
                c.sse = hw_run(c, rest);
                if (!std::isfinite(c.sse)) {
                    continue;
                }
                if (!have_best || c.sse < best.sse) {
                    best = std::move(c);
                    have_best = true;
                }
            }
        }
    }
    if (!have_best) {
        throw ConfigError("Holt-Winters grid search produced no finite fit");
    }
    return best;
}

HoltWintersModel fit_hw(const core::MultiSeries& series, std::size_t season_length,
                        std::span<const double> grid) {
    HoltWintersModel model;
    model.season_length = season_length;
    for (std::size_t j = 0; j < series.p(); ++j) {
        const auto col = series.column(j);
        model.dims.push_back(fit_hw(col, season_length, grid));
    }
    return model;
}

void hw_update(HWComponent& component, std::span<const double> observations) {
    hw_run(component, observations);
}

std::vector<double> forecast_hw(const HWComponent& component, std::size_t steps) {
    const std::size_t s = component.seasonals.size();
    std::vector<double> out(steps);
    for (std::size_t m = 1; m <= steps; ++m) {
        out[m - 1] = component.level + static_cast<double>(m) * component.trend +
                     component.seasonals[(component.observed + m - 1) % s];
    }
    return out;
}

core::DayMatrix forecast_hw(const HoltWintersModel& model, std::size_t steps) {
    const std::size_t p = model.dims.size();
    std::vector<double> values(steps * p);
    for (std::size_t j = 0; j < p; ++j) {
        const auto f = forecast_hw(model.dims[j], steps);
        for (std::size_t t = 0; t < steps; ++t) {
            values[t * p + j] = f[t];
        }
    }
    return core::DayMatrix(steps, p, std::move(values));
}

} // namespace dayahead::baselines
