#include "dayahead/markov.hpp"

#include <string>

namespace dayahead::markov {

TransitionMatrix from_counts(std::vector<std::vector<std::uint64_t>> counts) {
    const std::size_t k = counts.size();
    if (k < 1) {
        throw ConfigError("transition matrix needs at least one state");
    }
    TransitionMatrix m;
    m.probs.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        if (counts[i].size() != k) {
            throw ConfigError("count matrix is not square");
        }
        std::uint64_t total = 0;
        for (auto c : counts[i]) {
            total += c;
        }
        for (std::size_t j = 0; j < k; ++j) {
            m.probs[i][j] = total > 0
                                ? static_cast<double>(counts[i][j]) / static_cast<double>(total)
                                : 1.0 / static_cast<double>(k);
        }
    }
    m.counts = std::move(counts);
    return m;
}

TransitionMatrix fit_transitions(std::span<const std::size_t> sequence, std::size_t k) {
    if (k < 1) {
        throw ConfigError("k must be at least 1");
    }
    if (sequence.size() < 2) {
        throw InsufficientDataError("need at least two states to estimate transitions");
    }
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        if (sequence[i] >= k) {
            throw ConfigError("state " + std::to_string(sequence[i]) + " at position " +
                              std::to_string(i) + " is outside [0, " + std::to_string(k) + ")");
        }
    }
    std::vector<std::vector<std::uint64_t>> counts(k, std::vector<std::uint64_t>(k, 0));
    for (std::size_t t = 1; t < sequence.size(); ++t) {
        ++counts[sequence[t - 1]][sequence[t]];
    }
    return from_counts(std::move(counts));
}

std::size_t predict_next(const TransitionMatrix& matrix, std::size_t current) {
    if (current >= matrix.k()) {
        throw ConfigError("state " + std::to_string(current) + " out of range for k = " +
                          std::to_string(matrix.k()));
    }
    const auto& row = matrix.probs[current];
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j) {
        if (row[j] > row[best]) {
            best = j;
        }
    }
    return best;
}

} // namespace dayahead::markov
