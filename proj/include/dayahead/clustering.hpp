#pragma once

#include "dayahead/core.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dayahead::clustering {

/**
 * Typical-day centroids in normalized units. Each centroid is a flattened
 * day-vector of length h*p (time-major).
 */
struct ClusterModel {
    std::vector<std::vector<double>> centroids;
    std::size_t h = 0;
    std::size_t p = 0;
    /// Within-cluster sum of squared distances of the training days.
    double inertia = 0.0;
    /// Training assignment that produced the centroids.
    std::vector<std::size_t> labels;
    /// Inertia after each Lloyd update or Hartigan pass of the retained restart.
    std::vector<double> inertia_trace;
    std::size_t iterations = 0;
    bool converged = false;

    std::size_t k() const { return centroids.size(); }
    std::size_t dim() const { return h * p; }

    /// Centroid j reshaped as an h x p day.
    core::DayMatrix centroid_day(std::size_t j) const;
};

struct KMeansOptions {
    std::size_t max_iter = 300;
    /// Independent k-means++ restarts; the lowest-inertia run is kept.
    std::size_t n_init = 20;
};

/// Lloyd's algorithm with seeded k-means++ initialization, then Hartigan point transfers.
ClusterModel fit_kmeans(std::span<const core::DayMatrix> days, std::size_t k, std::uint64_t seed,
                        const KMeansOptions& options = {});

/// Index of the nearest centroid (Euclidean); ties go to the lowest index.
std::size_t assign(const ClusterModel& model, const core::DayMatrix& day);

std::vector<std::size_t> encode_sequence(const ClusterModel& model,
                                         std::span<const core::DayMatrix> days);

double squared_distance(std::span<const double> a, std::span<const double> b);

} // namespace dayahead::clustering
