#pragma once

#include "dayahead/core.hpp"
#include "dayahead/forecaster.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dayahead::baselines {

// ---------------------------------------------------------------------------
// Mean day
// ---------------------------------------------------------------------------

struct MeanDayModel {
    core::DayMatrix mean_day;
    std::size_t h = 0;
    std::size_t p = 0;
};

MeanDayModel fit_mean_day(std::span<const core::DayMatrix> days);

/// The mean day, whatever the current day is.
forecaster::Forecast forecast_mean_day(const MeanDayModel& model);

// ---------------------------------------------------------------------------
// Omniscient cluster oracle
// ---------------------------------------------------------------------------

/// Centroid of the cluster the true next day falls into (original units).
forecaster::Forecast forecast_omniscient(const forecaster::DayAheadModel& model,
                                         const core::DayMatrix& true_next_day);

core::DayMatrix forecast_omniscient_normalized(const forecaster::DayAheadModel& model,
                                               const core::DayMatrix& true_next_day_normalized);

// ---------------------------------------------------------------------------
// Autoregressive model, one independent least-squares fit per dimension
// ---------------------------------------------------------------------------

struct ARFit {
    /// coeffs[i] multiplies x_{t-1-i}.
    std::vector<double> coeffs;
    double intercept = 0.0;
    /// Set when the lagged design matrix was rank deficient.
    bool intercept_only = false;
};

struct ARModel {
    std::size_t order = 0;
    std::vector<ARFit> dims;
};

ARFit fit_ar(std::span<const double> series, std::size_t order);
ARModel fit_ar(const core::MultiSeries& series, std::size_t order);

/// Recursive multi-step forecast; predictions are fed back as lags.
std::vector<double> forecast_ar(const ARFit& fit, std::span<const double> history, std::size_t steps);

/// One history per dimension; returns steps x p.
core::DayMatrix forecast_ar(const ARModel& model, std::span<const std::span<const double>> histories,
                            std::size_t steps);

// ---------------------------------------------------------------------------
// Additive Holt-Winters
// ---------------------------------------------------------------------------

struct HWComponent {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double level = 0.0;
    double trend = 0.0;
    /// seasonals[t mod season_length] is the latest seasonal term of that phase.
    std::vector<double> seasonals;
    /// Observations consumed so far (T).
    std::size_t observed = 0;
    /// In-sample one-step-ahead SSE of the fit.
    double sse = 0.0;

    std::size_t season_length() const { return seasonals.size(); }
};

struct HoltWintersModel {
    std::size_t season_length = 0;
    std::vector<HWComponent> dims;
};

/// Candidate values tried for each of alpha, beta and gamma.
std::vector<double> default_hw_grid();

HWComponent fit_hw(std::span<const double> series, std::size_t season_length,
                   std::span<const double> grid = {});
HoltWintersModel fit_hw(const core::MultiSeries& series, std::size_t season_length,
                        std::span<const double> grid = {});

/// Runs the smoothing recursions over observations that follow the fitted data.
void hw_update(HWComponent& component, std::span<const double> observations);

/// level + m*trend + seasonals[(T + m - 1) mod s] for m = 1..steps.
std::vector<double> forecast_hw(const HWComponent& component, std::size_t steps);
core::DayMatrix forecast_hw(const HoltWintersModel& model, std::size_t steps);

} // namespace dayahead::baselines
