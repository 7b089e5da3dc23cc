#include "dayahead/cli/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

namespace dayahead::cli {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller keeps the stream identical across standard libraries.
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::size_t index(std::size_t n) {
        return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
    }

private:
    std::mt19937_64 engine_;
};

double bump(double x, double center, double width) {
    const double z = (x - center) / width;
    return std::exp(-z * z);
}

struct Shape {
    double level;
    double amplitude;
    double center;
    double width;

    double operator()(double x) const { return level + amplitude * bump(x, center, width); }
};

} // namespace

SynthProfile parse_profile(const std::string& name) {
    if (name == "weekly") {
        return SynthProfile::Weekly;
    }
    if (name == "planted-k") {
        return SynthProfile::PlantedK;
    }
    throw ConfigError("unknown synthetic profile '" + name + "' (expected weekly or planted-k)");
}

SynthData generate(const SynthOptions& options) {
    if (options.h < 1 || options.dims < 1 || options.days < 1) {
        throw ConfigError("days, h and dims must be positive");
    }
    if (!(options.noise >= 0.0) || !std::isfinite(options.noise)) {
        throw ConfigError("noise must be a non-negative number");
    }
    Rng rng(options.seed);

    std::vector<Shape> shapes;
    std::vector<std::size_t> labels(options.days);
    if (options.profile == SynthProfile::Weekly) {
        if (options.days < 7) {
            throw ConfigError("weekly profile needs at least 7 days");
        }
        shapes = {{0.25, 0.60, 0.55, 0.15}, {0.15, 0.15, 0.60, 0.20}};
        for (std::size_t i = 0; i < options.days; ++i) {
            labels[i] = i % 7 < 5 ? 0 : 1;
        }
    } else {
        if (options.k < 1) {
            throw ConfigError("planted-k profile needs k >= 1");
        }
        // Levels one unit apart keep the shapes well separated.
        for (std::size_t s = 0; s < options.k; ++s) {
            shapes.push_back({static_cast<double>(s), rng.uniform(0.5, 1.0), rng.uniform(0.2, 0.8),
                              rng.uniform(0.08, 0.2)});
        }
        std::vector<std::size_t> cycle(options.k);
        std::iota(cycle.begin(), cycle.end(), std::size_t{0});
        for (std::size_t i = cycle.size(); i > 1; --i) {
            std::swap(cycle[i - 1], cycle[rng.index(i)]);
        }
        for (std::size_t i = 0; i < options.days; ++i) {
            labels[i] = cycle[i % options.k];
        }
    }

    const std::size_t h = options.h;
    const std::size_t p = options.dims;
    const std::size_t n = options.days * h;
    std::vector<double> values(n * p);
    std::vector<core::Timestamp> stamps(n);
    const core::Timestamp step = std::max<core::Timestamp>(1, 86400 / static_cast<core::Timestamp>(h));
    for (std::size_t i = 0; i < options.days; ++i) {
        const Shape& shape = shapes[labels[i]];
        for (std::size_t t = 0; t < h; ++t) {
            const double x = (static_cast<double>(t) + 0.5) / static_cast<double>(h);
            const std::size_t row = i * h + t;
            stamps[row] = options.start + static_cast<core::Timestamp>(row) * step;
            for (std::size_t j = 0; j < p; ++j) {
                const double scale = 1.0 + 0.5 * static_cast<double>(j);
                double v = scale * shape(x);
                if (options.noise > 0.0) {
                    v += options.noise * rng.normal();
                }
                values[row * p + j] = v;
            }
        }
    }
    std::vector<std::string> names;
    for (std::size_t j = 0; j < p; ++j) {
        names.push_back("kpi" + std::to_string(j + 1));
    }
    return SynthData{core::MultiSeries(n, p, std::move(values), std::move(names), std::move(stamps)),
                     std::move(labels)};
}

} // namespace dayahead::cli
