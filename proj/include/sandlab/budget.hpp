#pragma once

#include <cstdint>

namespace sandlab {

/// Default cap on exhaustive enumerations (staircase windows, CA
/// neighborhoods, candidate configurations). SANDLAB_BUDGET overrides it.
std::uint64_t enumeration_budget();

/// Default cap on dense SA rule tables built by iteration/extraction.
inline constexpr std::uint64_t kDefaultTableBudget = std::uint64_t{1} << 20;

/// Dense CA tables are only materialized at or below this size.
inline constexpr std::uint64_t kCaTableLimit = std::uint64_t{1} << 26;

/// base^exp, saturating at UINT64_MAX.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp);

}  // namespace sandlab
