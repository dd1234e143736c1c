#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sandlab/budget.hpp"
#include "sandlab/ca_engine.hpp"
#include "sandlab/configuration.hpp"
#include "sandlab/metric.hpp"
#include "sandlab/sa_rule.hpp"

namespace sandlab {

/// Relative row j' = j - (2r+1) of the top of the central column of a
/// (4r+1)x(4r+1) window, when it lies in [-r, r-1]; nullopt otherwise.
std::optional<std::int64_t> find_bridge_top(const Pattern<Cell>& window, std::int64_t r);

/// Range of radius r read from the columns around the central column, taking
/// the central top at relative row j'.
Range bridge_range(const Pattern<Cell>& window, std::int64_t r, std::int64_t top);

/// The binary CA of dimension 2 and radius 2r acting on zeta(C) like F.
CaRule build_ca_from_sa(const SaRule& f);

struct ConjugacyReport {
    bool passed = true;
    std::size_t samples_checked = 0;
    std::optional<Configuration> witness;
    std::int64_t failed_step = 0;
    std::string detail;
};

/// Compares zeta(F^t(x)) with G^t(zeta(x)) for t = 1..n_steps on sampled x,
/// cell by cell on windows shrunk by 2rt per side.
ConjugacyReport check_conjugacy(const SaRule& f, const CaRule& g, std::size_t samples, std::int64_t n_steps,
                                std::uint64_t seed = 1);
ConjugacyReport check_conjugacy(const SaRule& f, std::size_t samples, std::int64_t n_steps, std::uint64_t seed = 1);

enum class CheckKind { Invariance, ColumnPreservation };
const char* to_string(CheckKind kind);

struct CheckWitness {
    CheckKind kind = CheckKind::Invariance;
    /// Position in the check's enumeration order.
    std::uint64_t index = 0;
    StaircasePattern window;
};

struct CheckResult {
    bool passed = true;
    std::uint64_t windows_checked = 0;
    std::optional<CheckWitness> witness;
};

/// Every staircase of width 2rho+1 and height 2rho+2 must map to a K-free
/// 1x2 pattern. The reported witness is the lowest violating index.
CheckResult check_invariance(const CaRule& g, std::uint64_t budget = enumeration_budget());
CheckResult check_invariance_serial(const CaRule& g, std::uint64_t budget = enumeration_budget());

/// Staircases of order (2rho+1)^2 with an all-1 (all-0) central column must
/// map to 1 (0).
CheckResult check_column_preservation(const CaRule& g, std::uint64_t budget = enumeration_budget());
CheckResult check_column_preservation_serial(const CaRule& g, std::uint64_t budget = enumeration_budget());

/// Re-runs the check on the witness window; true when the violation recurs.
bool replay_witness(const CaRule& g, const CheckWitness& witness);

/// The window enumerated by a check at a given index.
StaircasePattern invariance_window(std::int64_t rho, std::uint64_t index);
StaircasePattern column_window(std::int64_t rho, std::uint64_t index);

enum class Verdict { IsSa, NotSa };
const char* to_string(Verdict v);

struct DecisionReport {
    Verdict verdict = Verdict::IsSa;
    std::optional<CheckWitness> witness;
    std::optional<SaRule> extracted;
    std::uint64_t invariance_windows = 0;
    std::uint64_t column_windows = 0;
};

/// Decides whether a binary CA of dimension 2 restricted to S_K is a sand
/// automaton. With `extract`, an equivalent SA rule of radius 2rho is attached.
DecisionReport decide_sa(const CaRule& g, bool extract = false, std::uint64_t budget = enumeration_budget());

/// SA rule of radius 2rho read off the CA by realizing each range, encoding,
/// applying g and decoding the new central top. Assumes g passed decide_sa.
SaRule extract_sa(const CaRule& g);

}  // namespace sandlab
