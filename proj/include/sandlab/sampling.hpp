#pragma once

#include <cstdint>
#include <random>

#include "sandlab/configuration.hpp"

namespace sandlab {

struct SampleOptions {
    int dim = 1;
    std::size_t max_width = 12;
    std::int64_t min_height = -6;
    std::int64_t max_height = 6;
    /// Probability that a core cell is +inf or -inf.
    double p_infinite = 0.1;
    /// Probability that a background is +inf or -inf.
    double p_infinite_background = 0.1;
    /// Probability of distinct left/right backgrounds (dim 1).
    double p_two_backgrounds = 0.3;
    /// Probability of a periodic configuration instead (dim 1).
    double p_periodic = 0.0;
    std::int64_t max_origin = 4;
};

/// Deterministic generator of random configurations.
class ConfigSampler {
public:
    explicit ConfigSampler(std::uint64_t seed, SampleOptions options = {});

    Configuration next();
    /// A configuration without infinite piles.
    Configuration next_bounded();

    std::int64_t uniform(std::int64_t lo, std::int64_t hi);
    bool chance(double p);
    std::mt19937_64& engine() noexcept { return rng_; }
    const SampleOptions& options() const noexcept { return options_; }

private:
    Height cell(double p_inf);

    SampleOptions options_;
    std::mt19937_64 rng_;
};

}  // namespace sandlab
