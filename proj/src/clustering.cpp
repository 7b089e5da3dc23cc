#include "dayahead/clustering.hpp"

#include <limits>
#include <random>
#include <string>

namespace dayahead::clustering {

namespace {

using Point = std::span<const double>;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
    return i < n ? i : n - 1;
}

std::size_t nearest(const std::vector<std::vector<double>>& centroids, Point x, double* dist = nullptr) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < centroids.size(); ++j) {
        const double d = squared_distance(centroids[j], x);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    if (dist != nullptr) {
        *dist = best_d;
    }
    return best;
}

std::vector<std::vector<double>> kmeanspp_init(const std::vector<Point>& points, std::size_t k,
                                               std::mt19937_64& rng) {
    const std::size_t n = points.size();
    std::vector<std::vector<double>> centroids;
    std::vector<bool> chosen(n, false);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());

    auto take = [&](std::size_t i) {
        chosen[i] = true;
        centroids.emplace_back(points[i].begin(), points[i].end());
        for (std::size_t q = 0; q < n; ++q) {
            d2[q] = std::min(d2[q], squared_distance(centroids.back(), points[q]));
        }
    };

    take(uniform_index(rng, n));
    while (centroids.size() < k) {
        double total = 0.0;
        for (double d : d2) {
            total += d;
        }
        if (total > 0.0) {
            const double target = uniform01(rng) * total;
            double acc = 0.0;
            std::size_t pick = n;
            for (std::size_t q = 0; q < n; ++q) {
                if (d2[q] <= 0.0) {
                    continue;
                }
                acc += d2[q];
                pick = q;
                if (acc > target) {
                    break;
                }
            }
            take(pick);
        } else {
            // Every remaining point coincides with a centroid: draw among the unchosen.
            std::vector<std::size_t> free;
            for (std::size_t q = 0; q < n; ++q) {
                if (!chosen[q]) {
                    free.push_back(q);
                }
            }
            take(free[uniform_index(rng, free.size())]);
        }
    }
    return centroids;
}

void assign_all(const std::vector<std::vector<double>>& centroids, const std::vector<Point>& points,
                std::vector<std::size_t>& labels, std::vector<double>& dists) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        labels[i] = nearest(centroids, points[i], &dists[i]);
    }
}

// Moves the point farthest from its centroid into each empty cluster.
void repair_empty(std::size_t k, std::vector<std::size_t>& labels, std::vector<double>& dists) {
    std::vector<std::size_t> sizes(k, 0);
    for (auto l : labels) {
        ++sizes[l];
    }
    for (std::size_t j = 0; j < k; ++j) {
        if (sizes[j] != 0) {
            continue;
        }
        std::size_t far = labels.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (sizes[labels[i]] > 1 && dists[i] > far_d) {
                far_d = dists[i];
                far = i;
            }
        }
        --sizes[labels[far]];
        labels[far] = j;
        dists[far] = 0.0;
        ++sizes[j];
    }
}

std::vector<std::vector<double>> means(const std::vector<Point>& points,
                                       const std::vector<std::size_t>& labels, std::size_t k,
                                       std::size_t dim) {
    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto& s = sums[labels[i]];
        for (std::size_t c = 0; c < dim; ++c) {
            s[c] += points[i][c];
        }
        ++counts[labels[i]];
    }
    for (std::size_t j = 0; j < k; ++j) {
        for (auto& v : sums[j]) {
            v /= static_cast<double>(counts[j]);
        }
    }
    return sums;
}

double total_inertia(const std::vector<std::vector<double>>& centroids, const std::vector<Point>& points,
                     const std::vector<std::size_t>& labels) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        total += squared_distance(centroids[labels[i]], points[i]);
    }
    return total;
}

// Hartigan single-point transfers: move a point when it lowers the SSE once
// both centroids are updated. Stops at a partition no single move improves,
// which is also a Lloyd fixed point.
bool hartigan_pass(const std::vector<Point>& points, std::size_t k, std::size_t dim,
                   std::vector<std::size_t>& labels, std::vector<std::vector<double>>& centroids) {
    std::vector<std::size_t> sizes(k, 0);
    for (auto l : labels) {
        ++sizes[l];
    }
    bool moved = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t a = labels[i];
        if (sizes[a] < 2) {
            continue;
        }
        const double na = static_cast<double>(sizes[a]);
        const double remove_gain = na / (na - 1.0) * squared_distance(centroids[a], points[i]);
        std::size_t best = a;
        double best_cost = remove_gain;
        for (std::size_t b = 0; b < k; ++b) {
            if (b == a) {
                continue;
            }
            const double nb = static_cast<double>(sizes[b]);
            const double cost = nb / (nb + 1.0) * squared_distance(centroids[b], points[i]);
            if (cost < best_cost) {
                best_cost = cost;
                best = b;
            }
        }
        // Relative margin keeps roundoff from cycling points between equal-cost clusters.
        if (best == a || best_cost >= remove_gain * (1.0 - 1e-12)) {
            continue;
        }
        labels[i] = best;
        --sizes[a];
        ++sizes[best];
        centroids = means(points, labels, k, dim);
        moved = true;
    }
    return moved;
}

ClusterModel lloyd(const std::vector<Point>& points, std::size_t k, std::size_t dim,
                   std::size_t max_iter, std::mt19937_64& rng) {
    ClusterModel model;
    model.centroids = kmeanspp_init(points, k, rng);

    std::vector<std::size_t> labels(points.size());
    std::vector<double> dists(points.size());
    assign_all(model.centroids, points, labels, dists);
    repair_empty(k, labels, dists);

    std::vector<std::size_t> next(points.size());
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        model.centroids = means(points, labels, k, dim);
        model.inertia_trace.push_back(total_inertia(model.centroids, points, labels));
        model.iterations = iter;

        assign_all(model.centroids, points, next, dists);
        repair_empty(k, next, dists);
        if (next == labels) {
            model.converged = true;
            break;
        }
        labels.swap(next);
    }
    if (model.converged) {
        while (model.iterations < max_iter && hartigan_pass(points, k, dim, labels, model.centroids)) {
            ++model.iterations;
            model.centroids = means(points, labels, k, dim);
            model.inertia_trace.push_back(total_inertia(model.centroids, points, labels));
        }
    }
    model.labels = std::move(labels);
    model.inertia = model.inertia_trace.back();
    return model;
}

} // namespace

core::DayMatrix ClusterModel::centroid_day(std::size_t j) const {
    if (j >= centroids.size()) {
        throw ConfigError("cluster index " + std::to_string(j) + " out of range");
    }
    return core::DayMatrix(h, p, centroids[j]);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

ClusterModel fit_kmeans(std::span<const core::DayMatrix> days, std::size_t k, std::uint64_t seed,
                        const KMeansOptions& options) {
    if (k < 1) {
        throw ConfigError("k must be at least 1");
    }
    if (days.size() < k) {
        throw ConfigError("infeasible k = " + std::to_string(k) + " for " +
                          std::to_string(days.size()) + " days");
    }
    if (options.max_iter < 1 || options.n_init < 1) {
        throw ConfigError("max_iter and n_init must be positive");
    }
    const auto& first = days.front();
    std::vector<Point> points;
    points.reserve(days.size());
    for (const auto& day : days) {
        if (!day.same_geometry(first)) {
            throw GeometryError("days have inconsistent geometry");
        }
        points.push_back(day.flat());
    }
    const std::size_t dim = first.h() * first.p();

    std::mt19937_64 rng(seed);
    ClusterModel best;
    bool have_best = false;
    for (std::size_t run = 0; run < options.n_init; ++run) {
        ClusterModel candidate = lloyd(points, k, dim, options.max_iter, rng);
        if (!have_best || candidate.inertia < best.inertia) {
            best = std::move(candidate);
            have_best = true;
        }
    }
    best.h = first.h();
    best.p = first.p();
    return best;
}

std::size_t assign(const ClusterModel& model, const core::DayMatrix& day) {
    if (day.h() != model.h || day.p() != model.p) {
        throw GeometryError("day geometry " + std::to_string(day.h()) + "x" + std::to_string(day.p()) +
                            " does not match model " + std::to_string(model.h) + "x" +
                            std::to_string(model.p));
    }
    return nearest(model.centroids, day.flat());
}

std::vector<std::size_t> encode_sequence(const ClusterModel& model,
                                         std::span<const core::DayMatrix> days) {
    if (days.empty()) {
        throw InsufficientDataError("cannot encode an empty day sequence");
    }
    std::vector<std::size_t> seq;
    seq.reserve(days.size());
    for (const auto& day : days) {
        seq.push_back(assign(model, day));
    }
    return seq;
}

} // namespace dayahead::clustering
