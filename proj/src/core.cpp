#include "dayahead/core.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <utility>

namespace dayahead::core {

MultiSeries::MultiSeries(std::size_t n, std::size_t p, std::vector<double> values,
                         std::vector<std::string> dim_names, std::vector<Timestamp> timestamps)
    : n_(n), p_(p), values_(std::move(values)), dim_names_(std::move(dim_names)),
      timestamps_(std::move(timestamps)) {
    if (n_ < 1 || p_ < 1) {
        throw ConfigError("series must have at least one timestep and one dimension");
    }
    if (values_.size() != n_ * p_) {
        throw ConfigError("series value count " + std::to_string(values_.size()) +
                          " does not equal n*p = " + std::to_string(n_ * p_));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw DataError("non-finite value at row " + std::to_string(i / p_) + ", column " +
                            std::to_string(i % p_));
        }
    }
    if (dim_names_.empty()) {
        for (std::size_t j = 0; j < p_; ++j) {
            dim_names_.push_back("x" + std::to_string(j));
        }
    } else if (dim_names_.size() != p_) {
        throw ConfigError("expected " + std::to_string(p_) + " dimension names, got " +
                          std::to_string(dim_names_.size()));
    }
    if (!timestamps_.empty()) {
        if (timestamps_.size() != n_) {
            throw ConfigError("timestamp count does not match row count");
        }
        for (std::size_t t = 1; t < n_; ++t) {
            if (timestamps_[t] <= timestamps_[t - 1]) {
                throw DataError("timestamps not strictly increasing at row " + std::to_string(t));
            }
        }
    }
}

MultiSeries MultiSeries::univariate(std::vector<double> values, std::string name) {
    const std::size_t n = values.size();
    return MultiSeries(n, 1, std::move(values), {std::move(name)});
}

std::vector<double> MultiSeries::column(std::size_t j) const {
    std::vector<double> out(n_);
    for (std::size_t t = 0; t < n_; ++t) {
        out[t] = values_[t * p_ + j];
    }
    return out;
}

MultiSeries MultiSeries::select_dim(std::size_t j) const {
    if (j >= p_) {
        throw ConfigError("dimension index " + std::to_string(j) + " out of range");
    }
    return MultiSeries(n_, 1, column(j), {dim_names_[j]}, timestamps_);
}

MultiSeries MultiSeries::slice(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > n_) {
        throw ConfigError("invalid row slice [" + std::to_string(begin) + ", " +
                          std::to_string(end) + ")");
    }
    std::vector<double> vals(values_.begin() + static_cast<std::ptrdiff_t>(begin * p_),
                             values_.begin() + static_cast<std::ptrdiff_t>(end * p_));
    std::vector<Timestamp> ts;
    if (!timestamps_.empty()) {
        ts.assign(timestamps_.begin() + static_cast<std::ptrdiff_t>(begin),
                  timestamps_.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return MultiSeries(end - begin, p_, std::move(vals), dim_names_, std::move(ts));
}

MultiSeries MultiSeries::with_values(std::vector<double> values) const {
    return MultiSeries(n_, p_, std::move(values), dim_names_, timestamps_);
}

DayMatrix::DayMatrix(std::size_t h, std::size_t p, std::vector<double> values, std::size_t day_index)
    : h_(h), p_(p), values_(std::move(values)), day_index_(day_index) {
    if (h_ < 1 || p_ < 1 || values_.size() != h_ * p_) {
        throw GeometryError("day matrix needs h*p = " + std::to_string(h_ * p_) + " values, got " +
                            std::to_string(values_.size()));
    }
}

NormStats compute_norm_stats(const MultiSeries& series) {
    if (series.empty()) {
        throw InsufficientDataError("cannot compute normalization statistics of an empty series");
    }
    const std::size_t n = series.n();
    const std::size_t p = series.p();
    NormStats stats{std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)};
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t j = 0; j < p; ++j) {
            stats.mean[j] += series.at(t, j);
        }
    }
    for (auto& m : stats.mean) {
        m /= static_cast<double>(n);
    }
    // Two-pass variance.
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t j = 0; j < p; ++j) {
            const double d = series.at(t, j) - stats.mean[j];
            stats.std[j] += d * d;
        }
    }
    for (auto& s : stats.std) {
        s = std::sqrt(s / static_cast<double>(n));
    }
    return stats;
}

namespace {

void check_stats(std::size_t p, const NormStats& stats) {
    if (stats.mean.size() != p || stats.std.size() != p) {
        throw ConfigError("normalization statistics have " + std::to_string(stats.mean.size()) +
                          " dimensions, data has " + std::to_string(p));
    }
}

std::vector<double> normalize_values(const std::vector<double>& in, std::size_t p,
                                     const NormStats& stats) {
    check_stats(p, stats);
    std::vector<double> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const std::size_t j = i % p;
        out[i] = (in[i] - stats.mean[j]) / std::max(stats.std[j], kNormEpsilon);
    }
    return out;
}

std::vector<double> denormalize_values(const std::vector<double>& in, std::size_t p,
                                       const NormStats& stats) {
    check_stats(p, stats);
    std::vector<double> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const std::size_t j = i % p;
        out[i] = in[i] * std::max(stats.std[j], kNormEpsilon) + stats.mean[j];
    }
    return out;
}

} // namespace

MultiSeries apply_norm(const MultiSeries& series, const NormStats& stats) {
    return series.with_values(normalize_values(series.values(), series.p(), stats));
}

MultiSeries denorm(const MultiSeries& series, const NormStats& stats) {
    return series.with_values(denormalize_values(series.values(), series.p(), stats));
}

DayMatrix apply_norm(const DayMatrix& day, const NormStats& stats) {
    return DayMatrix(day.h(), day.p(), normalize_values(day.values(), day.p(), stats),
                     day.day_index());
}

DayMatrix denorm(const DayMatrix& day, const NormStats& stats) {
    return DayMatrix(day.h(), day.p(), denormalize_values(day.values(), day.p(), stats),
                     day.day_index());
}

std::vector<DayMatrix> split_days(const MultiSeries& series, std::size_t h) {
    if (h < 1) {
        throw ConfigError("points per day must be at least 1");
    }
    const std::size_t d = series.n() / h;
    if (d == 0) {
        throw InsufficientDataError("no complete day: series has " + std::to_string(series.n()) +
                                    " rows, a day needs " + std::to_string(h));
    }
    const std::size_t p = series.p();
    const auto& vals = series.values();
    std::vector<DayMatrix> days;
    days.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        auto first = vals.begin() + static_cast<std::ptrdiff_t>(i * h * p);
        days.emplace_back(h, p, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(h * p)), i);
    }
    return days;
}

MultiSeries concat_days(std::span<const DayMatrix> days) {
    if (days.empty()) {
        throw InsufficientDataError("no days to concatenate");
    }
    const std::size_t h = days.front().h();
    const std::size_t p = days.front().p();
    std::vector<double> vals;
    vals.reserve(days.size() * h * p);
    for (const auto& day : days) {
        if (!day.same_geometry(days.front())) {
            throw GeometryError("days have inconsistent geometry");
        }
        vals.insert(vals.end(), day.values().begin(), day.values().end());
    }
    return MultiSeries(days.size() * h, p, std::move(vals));
}

DayMatrix mean_day(std::span<const DayMatrix> days) {
    if (days.empty()) {
        throw InsufficientDataError("mean day of an empty set");
    }
    const auto& first = days.front();
    std::vector<double> acc(first.values().size(), 0.0);
    for (const auto& day : days) {
        if (!day.same_geometry(first)) {
            throw GeometryError("days have inconsistent geometry");
        }
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += day.values()[i];
        }
    }
    for (auto& v : acc) {
        v /= static_cast<double>(days.size());
    }
    return DayMatrix(first.h(), first.p(), std::move(acc));
}

double mean_squared_error(std::span<const double> forecast, std::span<const double> actual) {
    if (forecast.size() != actual.size() || forecast.empty()) {
        throw GeometryError("cannot compare " + std::to_string(forecast.size()) + " values with " +
                            std::to_string(actual.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < forecast.size(); ++i) {
        const double d = forecast[i] - actual[i];
        s += d * d;
    }
    return s / static_cast<double>(forecast.size());
}

namespace {
std::mutex g_sink_mutex;
WarningSink g_sink;
} // namespace

void set_warning_sink(WarningSink sink) {
    std::lock_guard lock(g_sink_mutex);
    g_sink = std::move(sink);
}

void warn(const std::string& message) {
    std::lock_guard lock(g_sink_mutex);
    if (g_sink) {
        g_sink(message);
    } else {
        std::cerr << "warning: " << message << '\n';
    }
}

} // namespace dayahead::core
