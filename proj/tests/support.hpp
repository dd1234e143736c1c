#pragma once

#include <initializer_list>
#include <vector>

#include "sandlab/configuration.hpp"

namespace testing_support {

using sandlab::Configuration;
using sandlab::Height;

inline const Height PINF = Height::plus_inf();
inline const Height MINF = Height::minus_inf();

inline std::vector<Height> H(std::initializer_list<Height> xs) { return std::vector<Height>(xs); }

/// The figure configuration: core (5,-2,1,4,2,2,5) at origin -3 over 0.
inline Configuration figure_config() {
    return Configuration::line(Height{0}, -3, H({5, -2, 1, 4, 2, 2, 5}));
}

/// (...0, [v], 0...) with the bracketed pile at index 0.
inline Configuration spike(Height v) { return Configuration::line(Height{0}, 0, {v}); }

}  // namespace testing_support
