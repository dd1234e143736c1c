#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sandlab/budget.hpp"
#include "sandlab/ca_engine.hpp"
#include "sandlab/configuration.hpp"
#include "sandlab/rule_program.hpp"
#include "sandlab/sa_rule.hpp"

namespace sandlab {

/// Dim-1 CA over A = {0, .., states-1} in which 0 is a spreading state.
class SpreadingCa {
public:
    /// Throws InvalidArgument when g is not dim 1 or 0 is not spreading.
    explicit SpreadingCa(CaRule g);

    const CaRule& rule() const noexcept { return g_; }
    std::int64_t radius() const noexcept { return g_.radius(); }
    int states() const noexcept { return g_.states(); }
    /// Largest state, max A.
    int max_state() const noexcept { return g_.states() - 1; }

private:
    CaRule g_;
};

/// Finite-support CA configuration: cells[k] is the state at origin + k,
/// 0 elsewhere. Kept trimmed (no zero at either end).
struct CaLine {
    std::int64_t origin = 0;
    std::vector<Cell> cells;

    static CaLine make(std::int64_t origin, std::vector<Cell> cells);
    Cell at(std::int64_t i) const;
    friend bool operator==(const CaLine&, const CaLine&) = default;
};

CaLine ca_step_line(const CaRule& g, const CaLine& y);

/// Markers at odd positions (height c), state y_i at position 2i (height y_i + c).
Configuration xi_encode(const CaLine& y, std::int64_t c = 0);
/// Encoding of the spatially periodic configuration with the given period word.
Configuration xi_encode_periodic(const std::vector<Cell>& word, std::int64_t c = 0);

/// SA simulating S on encodings and collapsing invalid regions; radius
/// max(2s, max A).
SaRule build_reduction(const SpreadingCa& S);
/// The same rule written as guarded cases; throws BudgetError when the
/// number of simulation cases exceeds `max_cases`.
RuleProgram reduction_program(const SpreadingCa& S, std::size_t max_cases = 4096);

struct FlattenReport {
    enum class Outcome { Converged, NotConverged, DivergedWindow };
    Outcome outcome = Outcome::NotConverged;
    /// Limit constant when Converged.
    std::optional<Height> limit;
    /// First step at which the orbit is the fixed constant, or steps run.
    std::int64_t steps = 0;
    /// Largest w <= 64 whose ground cylinder C^0_w did not change during the
    /// second half of the run (NotConverged only).
    std::int64_t stable_window = -1;
    std::string note;
};
const char* to_string(FlattenReport::Outcome o);

/// Runs the orbit of a bounded configuration until it is a constant fixed
/// point or `budget` steps elapse. Throws InvalidArgument for unbounded x.
FlattenReport detect_flatten(const SaRule& f, const Configuration& x, std::int64_t budget,
                             std::size_t max_core_cells = std::size_t{1} << 20);

struct PeriodReport {
    enum class Outcome { Periodic, Refuted, Unknown };
    Outcome outcome = Outcome::Unknown;
    // Periodic: F^(n+p) = rho^drift o F^n.
    std::int64_t n = 0;
    std::int64_t p = 0;
    std::int64_t drift = 0;
    // Refuted: F^0(witness) .. F^b(witness) are pairwise distinct modulo raising,
    // so no n + p <= b works.
    std::optional<Configuration> witness;
    std::int64_t a = 0;
    std::int64_t b = 0;
    /// Largest n + p covered by the verdict.
    std::int64_t bound = 0;
    std::size_t pairs_compared = 0;
    std::string detail;
};
const char* to_string(PeriodReport::Outcome o);

/// Rule-level comparison of F^(n+p) with F^n (n + p <= min(max_sum, 2)),
/// then a sampled search for one orbit refuting every n + p <= max_sum.
PeriodReport find_ultimate_period(const SaRule& f, std::int64_t max_sum, std::size_t sample_budget,
                                  std::uint64_t seed = 1, std::uint64_t table_budget = kDefaultTableBudget);

/// Re-simulates a Refuted report's witness.
bool replay_refutation(const SaRule& f, const PeriodReport& report);

/// Dense tables of F^n at a common radius, for replaying Periodic verdicts.
std::vector<std::int8_t> power_table(const SaRule& f, std::int64_t n, std::int64_t radius,
                                     std::uint64_t table_budget = kDefaultTableBudget);

/// y and z agree up to a vertical translation; returns it.
std::optional<std::int64_t> equal_modulo_raise(const Configuration& y, const Configuration& z);

struct CaProbeReport {
    enum class Verdict { No, ConsistentWithNilpotent };
    Verdict verdict = Verdict::ConsistentWithNilpotent;
    /// Word of a witness (finite support or one period).
    std::vector<Cell> witness;
    bool witness_periodic = false;
    std::uint64_t configs_tested = 0;
};
const char* to_string(CaProbeReport::Verdict v);

/// Finite-support configurations of support <= max_support and periodic
/// words of length <= max_support, each run for max_steps with cycle
/// detection. No is reported when some orbit cycles without a 0 at the origin.
CaProbeReport probe_ca_nilpotency(const SpreadingCa& S, std::size_t max_support, std::int64_t max_steps,
                                  std::uint64_t budget = enumeration_budget());

/// Bounded configuration over background c: a valid encoding around the
/// lowest marker, flanked by invalid piles >= c.
struct RepairScenario {
    Configuration x;
    std::int64_t c = 0;
    /// Index of a lowest pile (a marker).
    std::int64_t anchor = 0;
};

RepairScenario invalid_repair_scenario(const SpreadingCa& S, std::uint64_t seed);

/// Maximal valid sequence [i, j] containing `anchor` (a marker position);
/// scanning stops `limit` cells away from the anchor.
std::pair<std::int64_t, std::int64_t> maximal_valid_sequence(const Configuration& x, std::int64_t anchor, int states,
                                                             std::int64_t limit);
/// x is rho^c(xi(y)) for some CA configuration y, markers on anchor's parity.
bool is_valid_encoding(const Configuration& x, std::int64_t anchor, int states);

struct RepairTrace {
    std::vector<std::pair<std::int64_t, std::int64_t>> valid;
    bool never_shrinks = true;
    /// First step at which the whole configuration is valid (-1 if never).
    std::int64_t valid_at = -1;
};

RepairTrace trace_repair(const SaRule& f, const RepairScenario& scenario, int states, std::int64_t steps);

}  // namespace sandlab
