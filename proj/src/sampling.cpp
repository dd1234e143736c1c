#include "sandlab/sampling.hpp"

namespace sandlab {

ConfigSampler::ConfigSampler(std::uint64_t seed, SampleOptions options)
    : options_(options), rng_(seed) {}

std::int64_t ConfigSampler::uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
}

bool ConfigSampler::chance(double p) { return p > 0.0 && std::bernoulli_distribution(p)(rng_); }

Height ConfigSampler::cell(double p_inf) {
    if (chance(p_inf)) return chance(0.5) ? Height::plus_inf() : Height::minus_inf();
    return Height(uniform(options_.min_height, options_.max_height));
}

Configuration ConfigSampler::next() {
    const auto width = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(options_.max_width)));
    if (options_.dim == 1 && chance(options_.p_periodic)) {
        std::vector<Height> cells(std::max<std::size_t>(width, 1));
        for (auto& c : cells) c = cell(options_.p_infinite);
        return Configuration::periodic(std::move(cells));
    }
    const Height left = cell(options_.p_infinite_background);
    if (options_.dim == 1) {
        const Height right = chance(options_.p_two_backgrounds) ? cell(options_.p_infinite_background) : left;
        std::vector<Height> core(width);
        for (auto& c : core) c = cell(options_.p_infinite);
        return Configuration::line(left, right, uniform(-options_.max_origin, options_.max_origin) -
                                                    static_cast<std::int64_t>(width) / 2,
                                   std::move(core));
    }
    const auto height = static_cast<std::size_t>(uniform(1, static_cast<std::int64_t>(options_.max_width)));
    std::vector<Height> core(width * height);
    for (auto& c : core) c = cell(options_.p_infinite);
    const Point origin{uniform(-options_.max_origin, options_.max_origin) - static_cast<std::int64_t>(width) / 2,
                       uniform(-options_.max_origin, options_.max_origin) - static_cast<std::int64_t>(height) / 2};
    return Configuration::plane(left, origin, width, height, std::move(core));
}

Configuration ConfigSampler::next_bounded() {
    SampleOptions saved = options_;
    options_.p_infinite = 0.0;
    options_.p_infinite_background = 0.0;
    Configuration x = next();
    options_ = saved;
    return x;
}

}  // namespace sandlab
