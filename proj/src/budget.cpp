#include "sandlab/budget.hpp"

#include <cstdlib>
#include <limits>
#include <string>

namespace sandlab {

std::uint64_t enumeration_budget() {
    constexpr std::uint64_t kDefault = 100'000'000;
    const char* env = std::getenv("SANDLAB_BUDGET");
    if (env == nullptr || *env == '\0') return kDefault;
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        return kDefault;
    }
}

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t out = 1;
    for (std::uint64_t k = 0; k < exp; ++k) {
        if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        out *= base;
    }
    return out;
}

}  // namespace sandlab
