#include "dayahead/forecaster.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dayahead;
using core::DayMatrix;
using core::MultiSeries;

namespace {

const std::vector<double> kHigh{1.0, 4.0, 5.0, 2.0};
const std::vector<double> kLow{0.5, 1.0, 1.5, 0.5};

MultiSeries from_profiles(const std::vector<std::vector<double>>& profiles, const std::vector<std::size_t>& order,
                          double noise = 0.0, std::uint64_t seed = 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v;
    for (auto idx : order) {
        for (double x : profiles[idx]) {
            v.push_back(x + (noise > 0 ? noise * g(rng) : 0.0));
        }
    }
    return MultiSeries::univariate(std::move(v));
}

std::vector<std::size_t> weekly(std::size_t days) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < days; ++i) {
        order.push_back(i % 7 < 5 ? 0 : 1);
    }
    return order;
}

std::size_t high_cluster(const forecaster::DayAheadModel& m) {
    double s0 = 0, s1 = 0;
    for (double x : m.clusters.centroids[0]) {
        s0 += x;
    }
    for (double x : m.clusters.centroids[1]) {
        s1 += x;
    }
    return s0 > s1 ? 0 : 1;
}

} // namespace

TEST(Train, WeeklyTwoProfileTransitions) {
    const auto series = from_profiles({kHigh, kLow}, weekly(14));
    const auto model = forecaster::train(series, 2, 4, 0);
    const std::size_t ha = high_cluster(model);
    EXPECT_DOUBLE_EQ(model.transitions.probs[ha][ha], 0.8);
    EXPECT_DOUBLE_EQ(model.transitions.probs[ha][1 - ha], 0.2);
    EXPECT_EQ(model.selected_k, 2u);
    EXPECT_EQ(model.clusters.k(), model.transitions.k());
}

TEST(Train, KOneForecastsMeanDay) {
    const auto series = from_profiles({kHigh, kLow}, weekly(14), 0.1, 3);
    const auto model = forecaster::train(series, 1, 4, 0);
    const auto mean = core::mean_day(core::split_days(series, 4));
    for (const auto& day : {DayMatrix(4, 1, kHigh), DayMatrix(4, 1, kLow), DayMatrix(4, 1, {9, 9, 9, 9})}) {
        const auto f = forecaster::forecast_next(model, day);
        EXPECT_EQ(f.predicted_cluster, 0u);
        for (std::size_t t = 0; t < 4; ++t) {
            EXPECT_NEAR(f.values.at(t, 0), mean.at(t, 0), 1e-12);
        }
    }
}

TEST(Train, AlternatingDaysGivePermutationMatrix) {
    const auto series = from_profiles({kHigh, kLow}, {0, 1, 0, 1});
    const auto model = forecaster::train(series, 2, 4, 7);
    const auto seq = clustering::encode_sequence(
        model.clusters, core::split_days(core::apply_norm(series, model.norm), 4));
    EXPECT_NE(seq[0], seq[1]);
    EXPECT_EQ(seq[0], seq[2]);
    EXPECT_EQ(seq[1], seq[3]);
    EXPECT_DOUBLE_EQ(model.transitions.probs[seq[0]][seq[1]], 1.0);
    EXPECT_DOUBLE_EQ(model.transitions.probs[seq[1]][seq[0]], 1.0);
}

TEST(Train, Errors) {
    const auto series = from_profiles({kHigh}, {0, 0, 0});
    EXPECT_THROW(forecaster::train(series, 4, 4, 0), InsufficientDataError);
    EXPECT_THROW(forecaster::train(from_profiles({kHigh}, {0}), 1, 4, 0), InsufficientDataError);
    EXPECT_THROW(forecaster::train(series, 0, 4, 0), ConfigError);
}

namespace {

forecaster::DayAheadModel handmade_model() {
    forecaster::DayAheadModel m;
    m.h = 2;
    m.p = 1;
    m.selected_k = 2;
    m.norm = {{10.0}, {2.0}};
    m.clusters.h = 2;
    m.clusters.p = 1;
    m.clusters.centroids = {{-1.0, -1.0}, {1.0, 2.0}};
    m.transitions = markov::from_counts({{1, 4}, {3, 1}});
    m.dim_names = {"x"};
    return m;
}

} // namespace

TEST(ForecastNext, ComposesAssignAndArgmax) {
    const auto model = handmade_model();
    // Raw day near denorm(C0) = (8, 8).
    const auto f = forecaster::forecast_next(model, DayMatrix(2, 1, {8.3, 7.9}, 5));
    EXPECT_EQ(f.predicted_cluster, 1u);
    EXPECT_DOUBLE_EQ(f.values.at(0, 0), 12.0);
    EXPECT_DOUBLE_EQ(f.values.at(1, 0), 14.0);
    EXPECT_EQ(f.source_day_index, 5u);
}

TEST(ForecastNext, FixedPointUnderIdentityTransitions) {
    auto model = handmade_model();
    model.transitions = markov::from_counts({{3, 0}, {0, 3}});
    const auto c0 = core::denorm(model.clusters.centroid_day(0), model.norm);
    const auto f = forecaster::forecast_next(model, c0);
    EXPECT_EQ(f.predicted_cluster, 0u);
    EXPECT_EQ(f.values.values(), c0.values());
}

TEST(ForecastNext, GeometryMismatch) {
    const auto model = handmade_model();
    EXPECT_THROW(forecaster::forecast_next(model, DayMatrix(3, 1, {1, 2, 3})), GeometryError);
    EXPECT_THROW(forecaster::forecast_next(model, DayMatrix(2, 2, {1, 2, 3, 4})), GeometryError);
}

TEST(ForecastNext, OutputIsAlwaysADenormalizedCentroid) {
    const auto series = from_profiles({kHigh, kLow, {3, 3, 0, 0}}, {0, 1, 2, 0, 0, 1, 2, 2, 1, 0, 2, 1}, 0.2, 9);
    const auto model = forecaster::train(series, 3, 4, 1);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-2, 6);
    for (int i = 0; i < 50; ++i) {
        const DayMatrix day(4, 1, {u(rng), u(rng), u(rng), u(rng)});
        const auto f = forecaster::forecast_next(model, day);
        const auto expected = core::denorm(model.clusters.centroid_day(f.predicted_cluster), model.norm);
        EXPECT_EQ(f.values.values(), expected.values());
    }
}

TEST(SelectK, PlantedTwoProfiles) {
    std::vector<std::size_t> order;
    for (int i = 0; i < 40; ++i) {
        order.push_back(static_cast<std::size_t>(i % 2));
    }
    const auto all = from_profiles({kHigh, kLow}, order, 0.05, 4);
    const auto train = all.slice(0, 28 * 4);
    const auto valid = all.slice(28 * 4, 34 * 4);
    const auto sel = forecaster::select_k(train, valid, {2, 10}, 4, 0);
    EXPECT_EQ(sel.best_k, 2u);
    EXPECT_EQ(sel.model.selected_k, 2u);
    EXPECT_EQ(sel.scores.size(), 9u);
}

TEST(SelectK, SingletonRange) {
    const auto all = from_profiles({kHigh, kLow}, weekly(21), 0.05, 1);
    const auto sel = forecaster::select_k(all.slice(0, 15 * 4), all.slice(15 * 4, 18 * 4), {3, 3}, 4, 0);
    EXPECT_EQ(sel.best_k, 3u);
    EXPECT_EQ(sel.model.clusters.k(), 3u);
}

TEST(SelectK, TiesGoToSmallerK) {
    // Noise-free alternation: every k >= 2 forecasts perfectly.
    std::vector<std::size_t> order;
    for (int i = 0; i < 20; ++i) {
        order.push_back(static_cast<std::size_t>(i % 2));
    }
    const auto all = from_profiles({kHigh, kLow}, order);
    const auto sel = forecaster::select_k(all.slice(0, 14 * 4), all.slice(14 * 4, 17 * 4), {2, 5}, 4, 0);
    for (const auto& s : sel.scores) {
        EXPECT_NEAR(s.validation_mse, 0.0, 1e-20);
    }
    EXPECT_EQ(sel.best_k, 2u);
}

TEST(SelectK, ClampsAndRejectsEmptyRange) {
    const auto all = from_profiles({kHigh, kLow}, weekly(10), 0.05, 2);
    std::vector<std::string> seen;
    core::set_warning_sink([&](const std::string& m) { seen.push_back(m); });
    const auto sel = forecaster::select_k(all.slice(0, 7 * 4), all.slice(7 * 4, 10 * 4), {2, 200}, 4, 0);
    core::set_warning_sink(nullptr);
    EXPECT_EQ(sel.scores.size(), 6u);
    EXPECT_EQ(sel.scores.back().k, 7u);
    ASSERT_EQ(seen.size(), 1u);
    EXPECT_EQ(sel.warnings.size(), 1u);
    EXPECT_THROW(forecaster::select_k(all.slice(0, 7 * 4), all.slice(7 * 4, 10 * 4), {8, 20}, 4, 0),
                 InsufficientDataError);
}

TEST(SelectK, ParallelMatchesSequential) {
    const auto all = from_profiles({kHigh, kLow, {2, 2, 2, 2}}, weekly(42), 0.1, 6);
    forecaster::SelectOptions par;
    par.jobs = 4;
    const auto a = forecaster::select_k(all.slice(0, 30 * 4), all.slice(30 * 4, 36 * 4), {2, 12}, 4, 3);
    const auto b = forecaster::select_k(all.slice(0, 30 * 4), all.slice(30 * 4, 36 * 4), {2, 12}, 4, 3, par);
    EXPECT_EQ(a.best_k, b.best_k);
    EXPECT_EQ(a.model.clusters.centroids, b.model.clusters.centroids);
    for (std::size_t i = 0; i < a.scores.size(); ++i) {
        EXPECT_EQ(a.scores[i].validation_mse, b.scores[i].validation_mse);
    }
}

TEST(ModelJson, RoundTripIsBitExact) {
    const auto series = from_profiles({kHigh, kLow}, weekly(21), 0.137, 5);
    const auto model = forecaster::train(series, 3, 4, 11);
    const auto loaded = forecaster::from_json(forecaster::to_json(model));
    EXPECT_EQ(loaded.norm.mean, model.norm.mean);
    EXPECT_EQ(loaded.norm.std, model.norm.std);
    EXPECT_EQ(loaded.clusters.centroids, model.clusters.centroids);
    EXPECT_EQ(loaded.transitions.counts, model.transitions.counts);
    EXPECT_EQ(loaded.transitions.probs, model.transitions.probs);
    EXPECT_EQ(loaded.seed, 11u);
    EXPECT_EQ(loaded.selected_k, 3u);
    const DayMatrix day(4, 1, {0.9, 3.7, 5.2, 2.1});
    EXPECT_EQ(forecaster::forecast_next(loaded, day).values.values(),
              forecaster::forecast_next(model, day).values.values());
    EXPECT_EQ(forecaster::to_json(loaded), forecaster::to_json(model));
}

TEST(ModelJson, RejectsBadDocuments) {
    EXPECT_THROW(forecaster::from_json("not json"), DataError);
    EXPECT_THROW(forecaster::from_json("{\"format_version\": 99}"), DataError);
    EXPECT_THROW(forecaster::from_json("{\"format_version\": 1}"), DataError);
}
