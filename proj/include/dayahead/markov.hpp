#pragma once

#include "dayahead/error.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dayahead::markov {

/// First-order transition model over k day types.
struct TransitionMatrix {
    /// counts[i][j]: observed i -> j transitions.
    std::vector<std::vector<std::uint64_t>> counts;
    /// Empirical frequencies; rows never observed as a source are uniform.
    std::vector<std::vector<double>> probs;

    std::size_t k() const { return probs.size(); }
};

TransitionMatrix fit_transitions(std::span<const std::size_t> sequence, std::size_t k);

/// Rebuilds probabilities from a count matrix using the same rule as fit_transitions.
TransitionMatrix from_counts(std::vector<std::vector<std::uint64_t>> counts);

/// Most probable next state; ties go to the lowest index.
std::size_t predict_next(const TransitionMatrix& matrix, std::size_t current);

} // namespace dayahead::markov
