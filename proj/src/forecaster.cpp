#include "dayahead/forecaster.hpp"

#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

namespace dayahead::forecaster {

using nlohmann::json;

DayAheadModel train(const core::MultiSeries& train_series, std::size_t k, std::size_t h,
                    std::uint64_t seed, const TrainOptions& options) {
    if (k < 1 || h < 1) {
        throw ConfigError("k and h must be at least 1");
    }
    const std::size_t days_available = train_series.n() / h;
    const std::size_t needed = std::max<std::size_t>(k, 2);
    if (days_available < needed) {
        throw InsufficientDataError("training needs at least " + std::to_string(needed) +
                                    " complete days, got " + std::to_string(days_available));
    }

    DayAheadModel model;
    model.h = h;
    model.p = train_series.p();
    model.seed = seed;
    model.selected_k = k;
    model.dim_names = train_series.dim_names();
    model.norm = core::compute_norm_stats(train_series.slice(0, days_available * h));

    const auto days = core::split_days(core::apply_norm(train_series, model.norm), h);
    model.clusters = clustering::fit_kmeans(days, k, seed, options.kmeans);
    const auto sequence = clustering::encode_sequence(model.clusters, days);
    model.transitions = markov::fit_transitions(sequence, k);
    return model;
}

core::DayMatrix forecast_next_normalized(const DayAheadModel& model,
                                         const core::DayMatrix& current_day_normalized,
                                         std::size_t* predicted_cluster) {
    const std::size_t current = clustering::assign(model.clusters, current_day_normalized);
    const std::size_t next = markov::predict_next(model.transitions, current);
    if (predicted_cluster != nullptr) {
        *predicted_cluster = next;
    }
    return model.clusters.centroid_day(next);
}

Forecast forecast_next(const DayAheadModel& model, const core::DayMatrix& current_day) {
    if (current_day.h() != model.h || current_day.p() != model.p) {
        throw GeometryError("current day is " + std::to_string(current_day.h()) + "x" +
                            std::to_string(current_day.p()) + ", model expects " +
                            std::to_string(model.h) + "x" + std::to_string(model.p));
    }
    Forecast out;
    const auto normalized = core::apply_norm(current_day, model.norm);
    const auto centroid = forecast_next_normalized(model, normalized, &out.predicted_cluster);
    out.values = core::denorm(core::DayMatrix(model.h, model.p, centroid.values(),
                                              current_day.day_index() + 1),
                              model.norm);
    out.source_day_index = current_day.day_index();
    return out;
}

Selection select_k(const core::MultiSeries& train_series, const core::MultiSeries& validation,
                   KRange k_range, std::size_t h, std::uint64_t seed, const SelectOptions& options) {
    if (h < 1) {
        throw ConfigError("points per day must be at least 1");
    }
    if (k_range.min < 1 || k_range.min > k_range.max) {
        throw ConfigError("invalid k range [" + std::to_string(k_range.min) + ", " +
                          std::to_string(k_range.max) + "]");
    }
    const std::size_t train_days = train_series.n() / h;
    if (validation.n() / h < 1) {
        throw InsufficientDataError("validation block has no complete day");
    }
    if (validation.p() != train_series.p()) {
        throw GeometryError("validation and training series differ in dimension count");
    }
    const std::size_t k_hi = std::min(k_range.max, train_days);
    std::vector<std::string> warnings;
    if (k_range.max > train_days) {
        warnings.push_back("k range [" + std::to_string(k_range.min) + ", " +
                           std::to_string(k_range.max) + "] clamped to " + std::to_string(k_hi) +
                           " (" + std::to_string(train_days) + " training days)");
        core::warn(warnings.back());
    }
    if (k_range.min > k_hi) {
        throw InsufficientDataError("no feasible k in [" + std::to_string(k_range.min) + ", " +
                                    std::to_string(k_range.max) + "] with " +
                                    std::to_string(train_days) + " training days");
    }

    // Shared by every candidate: normalization depends only on the training block.
    const auto norm = core::compute_norm_stats(train_series.slice(0, train_days * h));
    const auto train_days_norm = core::split_days(core::apply_norm(train_series, norm), h);
    const auto valid_days_norm = core::split_days(core::apply_norm(validation, norm), h);

    const std::size_t n_candidates = k_hi - k_range.min + 1;
    std::vector<std::optional<DayAheadModel>> models(n_candidates);
    std::vector<KScore> scores(n_candidates);
    detail::parallel_for(n_candidates, options.jobs, [&](std::size_t c) {
        const std::size_t k = k_range.min + c;
        DayAheadModel model = train(train_series, k, h, seed, options.train);
        double total = 0.0;
        const core::DayMatrix* previous = &train_days_norm.back();
        for (const auto& day : valid_days_norm) {
            const auto predicted = forecast_next_normalized(model, *previous);
            total += core::mean_squared_error(predicted.flat(), day.flat());
            previous = &day;
        }
        scores[c] = {k, total / static_cast<double>(valid_days_norm.size())};
        models[c] = std::move(model);
    });

    std::size_t best = 0;
    for (std::size_t c = 1; c < n_candidates; ++c) {
        if (scores[c].validation_mse < scores[best].validation_mse - options.tie_tolerance) {
            best = c;
        }
    }
    // Training is deterministic, so the candidate model is the refit on the training block.
    return Selection{scores[best].k, std::move(*models[best]), std::move(scores), std::move(warnings)};
}

std::string to_json(const DayAheadModel& model) {
    json doc;
    doc["format_version"] = kModelFormatVersion;
    doc["h"] = model.h;
    doc["p"] = model.p;
    doc["selected_k"] = model.selected_k;
    doc["seed"] = model.seed;
    doc["dim_names"] = model.dim_names;
    doc["norm"] = {{"mean", model.norm.mean}, {"std", model.norm.std}};
    doc["centroids"] = model.clusters.centroids;
    doc["inertia"] = model.clusters.inertia;
    doc["counts"] = model.transitions.counts;
    doc["probs"] = model.transitions.probs;
    return doc.dump(2);
}

DayAheadModel from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw DataError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kModelFormatVersion) {
            throw DataError("unsupported model format version " + std::to_string(version));
        }
        DayAheadModel model;
        model.h = doc.at("h").get<std::size_t>();
        model.p = doc.at("p").get<std::size_t>();
        model.selected_k = doc.at("selected_k").get<std::size_t>();
        model.seed = doc.at("seed").get<std::uint64_t>();
        model.dim_names = doc.at("dim_names").get<std::vector<std::string>>();
        model.norm.mean = doc.at("norm").at("mean").get<std::vector<double>>();
        model.norm.std = doc.at("norm").at("std").get<std::vector<double>>();
        model.clusters.centroids = doc.at("centroids").get<std::vector<std::vector<double>>>();
        model.clusters.inertia = doc.at("inertia").get<double>();
        model.clusters.h = model.h;
        model.clusters.p = model.p;
        model.transitions.counts = doc.at("counts").get<std::vector<std::vector<std::uint64_t>>>();
        model.transitions.probs = doc.at("probs").get<std::vector<std::vector<double>>>();

        if (model.norm.mean.size() != model.p || model.norm.std.size() != model.p) {
            throw DataError("normalization statistics do not match p");
        }
        if (model.clusters.k() != model.selected_k || model.transitions.k() != model.selected_k ||
            model.transitions.counts.size() != model.selected_k) {
            throw DataError("cluster and transition sizes do not match selected_k");
        }
        for (const auto& c : model.clusters.centroids) {
            if (c.size() != model.h * model.p) {
                throw DataError("centroid length does not match h*p");
            }
        }
        for (const auto& row : model.transitions.probs) {
            if (row.size() != model.selected_k) {
                throw DataError("transition matrix is not k x k");
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    }
}

void save_model(const DayAheadModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write model file " + path);
    }
    out << to_json(model) << '\n';
}

DayAheadModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot read model file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

} // namespace dayahead::forecaster
