#pragma once

#include "dayahead/clustering.hpp"
#include "dayahead/core.hpp"
#include "dayahead/markov.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dayahead::forecaster {

inline constexpr int kModelFormatVersion = 1;

/**
 * Trained day-ahead model: normalization statistics of the training block,
 * typical-day centroids and the transition matrix over their sequence.
 */
struct DayAheadModel {
    core::NormStats norm;
    clustering::ClusterModel clusters;
    markov::TransitionMatrix transitions;
    std::size_t h = 0;
    std::size_t p = 0;
    std::size_t selected_k = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> dim_names;
};

struct Forecast {
    /// h x p, original units.
    core::DayMatrix values;
    std::size_t predicted_cluster = 0;
    std::size_t source_day_index = 0;
};

struct TrainOptions {
    clustering::KMeansOptions kmeans;
};

DayAheadModel train(const core::MultiSeries& train_series, std::size_t k, std::size_t h,
                    std::uint64_t seed, const TrainOptions& options = {});

/// Forecasts the day following `current_day` (original units).
Forecast forecast_next(const DayAheadModel& model, const core::DayMatrix& current_day);

/// Same as forecast_next but in normalized units; used by the evaluation code.
core::DayMatrix forecast_next_normalized(const DayAheadModel& model,
                                         const core::DayMatrix& current_day_normalized,
                                         std::size_t* predicted_cluster = nullptr);

struct KRange {
    std::size_t min = 2;
    std::size_t max = 200;
};

struct SelectOptions {
    TrainOptions train;
    std::size_t jobs = 1;
    /// Validation MSEs closer than this are treated as equal (smaller k wins).
    double tie_tolerance = 1e-12;
};

struct KScore {
    std::size_t k = 0;
    double validation_mse = 0.0;
};

struct Selection {
    std::size_t best_k = 0;
    DayAheadModel model;
    std::vector<KScore> scores;
    std::vector<std::string> warnings;
};

/**
 * Trains one model per feasible k on `train_series` and keeps the k with the
 * lowest mean validation MSE (normalized units). Each validation day is
 * forecast from its predecessor; the first one from the last training day.
 * k values above the number of training days are skipped with a warning.
 */
Selection select_k(const core::MultiSeries& train_series, const core::MultiSeries& validation,
                   KRange k_range, std::size_t h, std::uint64_t seed, const SelectOptions& options = {});

std::string to_json(const DayAheadModel& model);
DayAheadModel from_json(const std::string& text);

void save_model(const DayAheadModel& model, const std::string& path);
DayAheadModel load_model(const std::string& path);

} // namespace dayahead::forecaster
