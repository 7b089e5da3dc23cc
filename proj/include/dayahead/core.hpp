#pragma once

#include "dayahead/error.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dayahead::core {

/// Seconds since the Unix epoch (UTC).
using Timestamp = std::int64_t;

/**
 * Multivariate series of n timesteps by p dimensions, stored row-major
 * (one row per timestep). Timestamps are optional but, when present, are
 * strictly increasing and evenly spaced.
 */
class MultiSeries {
public:
    MultiSeries() = default;
    MultiSeries(std::size_t n, std::size_t p, std::vector<double> values,
                std::vector<std::string> dim_names = {},
                std::vector<Timestamp> timestamps = {});

    /// Builds a 1-dimensional series from a plain vector.
    static MultiSeries univariate(std::vector<double> values, std::string name = "x");

    std::size_t n() const { return n_; }
    std::size_t p() const { return p_; }
    bool empty() const { return n_ == 0; }

    double at(std::size_t t, std::size_t j) const { return values_[t * p_ + j]; }
    std::span<const double> row(std::size_t t) const {
        return {values_.data() + t * p_, p_};
    }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::string>& dim_names() const { return dim_names_; }
    const std::vector<Timestamp>& timestamps() const { return timestamps_; }
    bool has_timestamps() const { return !timestamps_.empty(); }

    /// Column j as a contiguous vector.
    std::vector<double> column(std::size_t j) const;

    /// Series restricted to a single dimension, keeping timestamps.
    MultiSeries select_dim(std::size_t j) const;

    /// Rows [begin, end).
    MultiSeries slice(std::size_t begin, std::size_t end) const;

    /// Same shape and metadata, new values.
    MultiSeries with_values(std::vector<double> values) const;

private:
    std::size_t n_ = 0;
    std::size_t p_ = 0;
    std::vector<double> values_;
    std::vector<std::string> dim_names_;
    std::vector<Timestamp> timestamps_;
};

/// One day of measurements: h rows by p dimensions, time-major.
class DayMatrix {
public:
    DayMatrix() = default;
    DayMatrix(std::size_t h, std::size_t p, std::vector<double> values, std::size_t day_index = 0);

    std::size_t h() const { return h_; }
    std::size_t p() const { return p_; }
    std::size_t day_index() const { return day_index_; }
    double at(std::size_t t, std::size_t j) const { return values_[t * p_ + j]; }

    /// Flattened day-vector of length h*p; row-major so slot t, dim j sits at t*p + j.
    std::span<const double> flat() const { return values_; }
    const std::vector<double>& values() const { return values_; }

    bool same_geometry(const DayMatrix& other) const { return h_ == other.h_ && p_ == other.p_; }

private:
    std::size_t h_ = 0;
    std::size_t p_ = 0;
    std::vector<double> values_;
    std::size_t day_index_ = 0;
};

/// Per-dimension mean and population standard deviation.
struct NormStats {
    std::vector<double> mean;
    std::vector<double> std;

    std::size_t p() const { return mean.size(); }
};

/// Lower bound applied to std before dividing.
inline constexpr double kNormEpsilon = 1e-12;

NormStats compute_norm_stats(const MultiSeries& series);

MultiSeries apply_norm(const MultiSeries& series, const NormStats& stats);
MultiSeries denorm(const MultiSeries& series, const NormStats& stats);

/// Day-level variants; the day keeps its index.
DayMatrix apply_norm(const DayMatrix& day, const NormStats& stats);
DayMatrix denorm(const DayMatrix& day, const NormStats& stats);

/// Consecutive non-overlapping days; the trailing n mod h rows are dropped.
std::vector<DayMatrix> split_days(const MultiSeries& series, std::size_t h);

/// Inverse of split_days on whole days (no timestamps, no names).
MultiSeries concat_days(std::span<const DayMatrix> days);

/// Slot-wise arithmetic mean of a set of same-geometry days.
DayMatrix mean_day(std::span<const DayMatrix> days);

/// Mean of squared element-wise differences; sizes must match.
double mean_squared_error(std::span<const double> forecast, std::span<const double> actual);

/// Warnings sink. Defaults to stderr; tests may silence it.
using WarningSink = std::function<void(const std::string&)>;
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

} // namespace dayahead::core
