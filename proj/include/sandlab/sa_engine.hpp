#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sandlab/budget.hpp"
#include "sandlab/configuration.hpp"
#include "sandlab/pattern.hpp"
#include "sandlab/sa_rule.hpp"

namespace sandlab {

/// R^i_r(x); throws CenterInfiniteError when x_i is infinite.
Range range_at(const Configuration& x, Point i, std::int64_t r);
Range range_at(const Configuration& x, std::int64_t i, std::int64_t r);

inline int apply_local(const SaRule& f, const Range& range) { return f.apply(range); }

/// One synchronous application of the global rule. Infinite piles are kept,
/// backgrounds move by f(flat range), and the core is recomputed over its
/// light cone.
Configuration step(const SaRule& f, const Configuration& x);
Configuration step_n(const SaRule& f, Configuration x, std::int64_t n);

/// F^0(x) .. F^n(x). Throws BudgetError when a core grows past `max_core_cells`.
std::vector<OrbitRecord> orbit(const SaRule& f, const Configuration& x, std::int64_t n_steps,
                               std::size_t max_core_cells = std::size_t{1} << 22);

/// Brute-force reference: n naive updates on an explicit window, each
/// dropping r cells per side. Requires width (and height in dim 2) >= 2nr+1.
Pattern<Height> oracle_step_window(const SaRule& f, const Pattern<Height>& heights, std::int64_t n);

/// Variation of F^n at the origin of the configuration realizing `range`
/// (a range of radius (2n-1)r), computed with the oracle.
int iterated_variation(const SaRule& f, std::int64_t n, const Range& range);

/// Rule of radius (2n-1)r whose global map is F^n. Dense (parallel fill)
/// when the table fits `table_budget`, otherwise computed on demand.
SaRule iterate_local_rule(const SaRule& f, std::int64_t n,
                          std::uint64_t table_budget = kDefaultTableBudget);
/// Same construction with a single-threaded table fill.
SaRule iterate_local_rule_serial(const SaRule& f, std::int64_t n,
                                 std::uint64_t table_budget = kDefaultTableBudget);

/// Restriction of a rule to a larger radius with the same global map:
/// each entry is re-saturated to the rule's own precision.
SaRule widen_rule(const SaRule& f, std::int64_t radius);

struct CharacterizationReport {
    bool passed = true;
    std::size_t samples_checked = 0;
    /// "shift", "vertical", "infinity" or "continuity" when a check failed.
    std::string failed_property;
    std::optional<Configuration> witness;
    std::optional<Configuration> witness_pair;
    std::string detail;
};

/// Property harness for the four defining properties of SA global maps:
/// shift commutation, vertical commutation, infinity preservation, and the
/// continuity modulus C^0_{w+2r}(x) = C^0_{w+2r}(y) => C^0_w(F x) = C^0_w(F y).
CharacterizationReport check_characterization(const SaRule& f, std::size_t samples, std::uint64_t seed = 1);

}  // namespace sandlab
