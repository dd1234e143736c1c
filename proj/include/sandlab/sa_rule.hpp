#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sandlab/configuration.hpp"
#include "sandlab/height.hpp"
#include "sandlab/rule_program.hpp"

namespace sandlab {

/// What a pile sees from its top: saturated relative heights of every
/// neighbor at offsets in [-r, r]^d except the center.
///
/// Entries are stored in lexicographic offset order (see range_offsets) and
/// lie in [-r, r] or are +/-inf.
class Range {
public:
    /// Flat range (all entries 0).
    Range(int dim, std::int64_t radius);
    Range(int dim, std::int64_t radius, std::vector<Height> entries);

    int dim() const noexcept { return dim_; }
    std::int64_t radius() const noexcept { return radius_; }
    std::size_t size() const noexcept { return entries_.size(); }

    std::span<const Height> entries() const noexcept { return entries_; }
    std::span<Height> entries() noexcept { return entries_; }

    Height at(std::int64_t offset) const;
    Height at(Point offset) const;

    friend bool operator==(const Range&, const Range&) = default;

private:
    int dim_;
    std::int64_t radius_;
    std::vector<Height> entries_;
};

/// Offsets of a range in storage order: lexicographic, center omitted.
std::vector<Point> range_offsets(int dim, std::int64_t radius);
/// Storage position of an offset; throws InvalidArgument for the center or
/// an offset outside the radius.
std::size_t offset_position(int dim, std::int64_t radius, Point offset);

/// Number of ranges, (2r+3)^((2r+1)^d - 1), saturating at UINT64_MAX.
std::uint64_t range_count(int dim, std::int64_t radius);

/// Dense-table index: digits -inf -> 0, v -> v + r + 1, +inf -> 2r + 2, in
/// base 2r + 3, position 0 least significant.
std::uint64_t range_index(const Range& range);
Range range_from_index(int dim, std::int64_t radius, std::uint64_t index);

/// Canonical configuration realizing a range at the origin: x_0 = 0,
/// finite entries at their value, saturated entries at +/-(radius + 1),
/// background 0 elsewhere.
Configuration realize_range(const Range& range);

/// SA local rule f: ranges of radius r -> [-r, r].
class SaRule {
public:
    enum class Backing { DenseTable, Program, Native, Computed };
    enum class NativeKind { None, Collapse, Raise, Identity, Reduction };

    using Evaluator = std::function<int(const Range&)>;

    /// Entries in range_index order; each must lie in [-r, r].
    static SaRule dense(int dim, std::int64_t radius, std::vector<std::int8_t> table,
                        std::string name = "table");
    static SaRule from_program(RuleProgram program, std::string name = "program");
    static SaRule native(NativeKind kind, int dim, std::int64_t radius, Evaluator evaluator,
                         std::string name);
    /// Rule evaluated on demand; results are memoized when `memoize`.
    static SaRule computed(int dim, std::int64_t radius, Evaluator evaluator, std::string name,
                           bool memoize = true);

    int dim() const noexcept { return dim_; }
    std::int64_t radius() const noexcept { return radius_; }
    Backing backing() const noexcept { return backing_; }
    NativeKind native_kind() const noexcept { return native_; }
    const std::string& name() const noexcept { return name_; }

    /// Variation for a range; checks dimension, radius and output bounds.
    int apply(const Range& range) const;

    std::span<const std::int8_t> table() const;
    const RuleProgram* program() const noexcept { return program_.get(); }

    /// Dense copy; throws BudgetError above `budget` entries.
    SaRule to_dense(std::uint64_t budget) const;

private:
    struct Memo;

    SaRule() = default;
    int evaluate(const Range& range) const;

    int dim_ = 1;
    std::int64_t radius_ = 0;
    Backing backing_ = Backing::Native;
    NativeKind native_ = NativeKind::None;
    std::string name_;
    std::shared_ptr<const std::vector<std::int8_t>> table_;
    std::shared_ptr<const RuleProgram> program_;
    Evaluator evaluator_;
    std::shared_ptr<Memo> memo_;
};

/// Returns -1 iff some range entry is negative, else 0. collapse(1, 1) is
/// the automaton that collapses every pile towards the lowest one.
SaRule make_collapse(std::int64_t radius, int dim = 1);
/// Radius-1 rule adding one grain everywhere (the raising map).
SaRule make_raise(int dim = 1);
SaRule make_identity(int dim = 1, std::int64_t radius = 1);

}  // namespace sandlab
