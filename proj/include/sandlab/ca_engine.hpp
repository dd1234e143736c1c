#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sandlab/budget.hpp"
#include "sandlab/pattern.hpp"

namespace sandlab {

using Cell = std::uint8_t;

/// Cellular automaton local rule <A, d, rho, g> with A = {0, .., states-1}.
///
/// Neighborhoods are Patterns of order (2 rho + 1)^d. The dense-table index
/// of a neighborhood is sum state * |A|^pos over the flat cell positions
/// (row-major, last axis fastest).
class CaRule {
public:
    enum class Backing { DenseTable, Function };
    using Fn = std::function<Cell(const Pattern<Cell>&)>;

    static CaRule dense(int dim, std::int64_t radius, int states, std::vector<Cell> table,
                        std::string name = "table");
    /// On-demand rule; memoized when requested and the index fits 64 bits.
    static CaRule function(int dim, std::int64_t radius, int states, Fn fn, std::string name,
                           bool memoize = true);

    int dim() const noexcept { return dim_; }
    std::int64_t radius() const noexcept { return radius_; }
    int states() const noexcept { return states_; }
    Backing backing() const noexcept { return backing_; }
    const std::string& name() const noexcept { return name_; }

    /// Side length 2 rho + 1 and number of cells in a neighborhood.
    std::size_t side() const noexcept { return static_cast<std::size_t>(2 * radius_ + 1); }
    std::size_t cells() const noexcept { return dim_ == 1 ? side() : side() * side(); }
    /// |A|^cells, saturating at UINT64_MAX.
    std::uint64_t neighborhood_count() const;

    std::uint64_t index_of(const Pattern<Cell>& neighborhood) const;
    Pattern<Cell> neighborhood_at(std::uint64_t index) const;

    /// g(U) for a neighborhood; throws DimensionError on an order mismatch.
    Cell apply(const Pattern<Cell>& neighborhood) const;

    std::span<const Cell> table() const;

    /// Dense copy filled in parallel; throws BudgetError above `limit` entries.
    CaRule materialize(std::uint64_t limit = kCaTableLimit) const;
    CaRule materialize_serial(std::uint64_t limit = kCaTableLimit) const;

    /// Copy with a single neighborhood's output replaced.
    CaRule with_entry(std::uint64_t index, Cell value) const;

private:
    struct Memo;

    CaRule() = default;
    Cell evaluate(const Pattern<Cell>& neighborhood) const;
    CaRule materialize_impl(std::uint64_t limit, bool parallel) const;

    int dim_ = 1;
    std::int64_t radius_ = 0;
    int states_ = 2;
    Backing backing_ = Backing::Function;
    std::string name_;
    std::shared_ptr<const std::vector<Cell>> table_;
    Fn fn_;
    std::shared_ptr<Memo> memo_;
};

inline Cell ca_apply(const CaRule& g, const Pattern<Cell>& neighborhood) { return g.apply(neighborhood); }

/// g(U): the rule applied at every inner position of U; each side shrinks by 2 rho.
Pattern<Cell> ca_extend(const CaRule& g, const Pattern<Cell>& U);

/// One global step on a cyclic dim-1 word (index arithmetic mod length).
std::vector<Cell> ca_step_cyclic(const CaRule& g, std::span<const Cell> word);

struct StateReport {
    std::vector<int> spreading;
    std::vector<int> quiescent;
};

/// Exhaustive scan of all neighborhoods; throws BudgetError above `budget`.
StateReport find_spreading_states(const CaRule& g, std::uint64_t budget = enumeration_budget());
bool is_quiescent(const CaRule& g, int state);

/// Center projection.
CaRule make_ca_identity(int dim, std::int64_t radius, int states = 2);
CaRule make_ca_constant(int dim, std::int64_t radius, int states, Cell value);
/// Minimum over the neighborhood.
CaRule make_ca_min(int dim, std::int64_t radius, int states = 2);
/// G(x)_i = x_{i-1} (dim 1, radius 1).
CaRule make_ca_shift_right(int states = 2);
/// Binary rule returning 1 - center.
CaRule make_ca_complement_center(int dim, std::int64_t radius);

}  // namespace sandlab
