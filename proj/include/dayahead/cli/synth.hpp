#pragma once

#include "dayahead/core.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace dayahead::cli {

enum class SynthProfile {
    /// Five high-activity days followed by two low-activity days, repeated.
    Weekly,
    /// k distinct day shapes visited in a fixed random cyclic order.
    PlantedK,
};

SynthProfile parse_profile(const std::string& name);

struct SynthOptions {
    SynthProfile profile = SynthProfile::Weekly;
    std::size_t days = 70;
    std::size_t h = 96;
    std::size_t dims = 1;
    /// Standard deviation of the additive Gaussian noise.
    double noise = 0.0;
    std::uint64_t seed = 0;
    /// Number of shapes for the planted-k profile.
    std::size_t k = 3;
    /// First sample; 2024-01-01 is a Monday.
    core::Timestamp start = 1704067200;
};

struct SynthData {
    core::MultiSeries series;
    /// Profile index of each day: 0 = HA, 1 = LA for the weekly profile.
    std::vector<std::size_t> day_labels;
};

SynthData generate(const SynthOptions& options);

} // namespace dayahead::cli
