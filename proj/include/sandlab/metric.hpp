#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sandlab/budget.hpp"
#include "sandlab/configuration.hpp"
#include "sandlab/pattern.hpp"

namespace sandlab {

/// Measuring device of precision r and reference m (finite).
/// Returns +inf if n > m + r, -inf if n < m - r, n - m otherwise.
Height beta(std::int64_t r, Height::rep m, Height n);

/// Top cylinder C'^i_r(x): center holds x_i, other entries are measured
/// from the top of x_i (or from 0 when x_i is infinite).
struct TopCylinder {
    std::int64_t radius = 0;
    Pattern<Height> entries;

    friend bool operator==(const TopCylinder&, const TopCylinder&) = default;
};

/// Ground cylinder C^i_r(x): every entry is measured from height 0.
struct GroundCylinder {
    std::int64_t radius = 0;
    Pattern<Height> entries;

    friend bool operator==(const GroundCylinder&, const GroundCylinder&) = default;
};

TopCylinder top_cylinder(const Configuration& x, Point i, std::int64_t r);
GroundCylinder ground_cylinder(const Configuration& x, Point i, std::int64_t r);

/// Exact dyadic distance 2^-k; `exponent` is empty for distance 0.
struct Distance {
    std::optional<std::int64_t> exponent;

    static Distance zero() { return {}; }
    static Distance pow2(std::int64_t k) { return {k}; }

    bool is_zero() const noexcept { return !exponent.has_value(); }
    /// "0" or "2^-k".
    std::string to_string() const;

    /// Numeric order of the distances (a larger exponent is a smaller distance).
    friend std::strong_ordering operator<=>(const Distance& a, const Distance& b) noexcept;
    friend bool operator==(const Distance&, const Distance&) = default;
};

/// d'(x, y): first radius at which the top cylinders at 0 differ.
Distance dist_top(const Configuration& x, const Configuration& y);

/// d(x, y): first radius at which the ground cylinders at 0 differ.
/// Closed form: min over sites i of max(|i|, first radius separating x_i and y_i).
Distance dist_ground(const Configuration& x, const Configuration& y);

/// Same distances computed by the literal radius scan r = 0, 1, 2, ... up to
/// the a-priori bound; used to cross-check the closed forms.
Distance dist_ground_scan(const Configuration& x, const Configuration& y);
Distance dist_top_scan(const Configuration& x, const Configuration& y);

/// Tychonoff distance between the zeta encodings: min |(i, k)| over the
/// cells where zeta(x) and zeta(y) differ.
Distance dist_zeta(const Configuration& x, const Configuration& y);

/// Binary (d+1)-dimensional window with no 0 directly below a 1.
///
/// Stored as per-column counts of ones from the bottom; column j reads
/// tops[j] ones followed by height - tops[j] zeros going upward.
struct StaircasePattern {
    std::size_t height = 0;
    std::vector<std::uint32_t> tops;

    std::size_t width() const noexcept { return tops.size(); }
    /// Binary matrix, first axis horizontal, last axis vertical (upward).
    Pattern<std::uint8_t> to_pattern() const;
    /// Throws ForbiddenPatternError if `p` contains the forbidden pattern.
    static StaircasePattern from_pattern(const Pattern<std::uint8_t>& p);

    friend bool operator==(const StaircasePattern&, const StaircasePattern&) = default;
};

/// True when some cell holds 0 with a 1 immediately above it.
bool contains_forbidden(const Pattern<std::uint8_t>& p);

/// zeta(x) restricted to columns [hlo, hhi] and levels [vlo, vhi];
/// cell (i, k) is 1 iff x_i >= k.
StaircasePattern zeta_window(const Configuration& x, std::int64_t hlo, std::int64_t hhi,
                             std::int64_t vlo, std::int64_t vhi);

struct ColumnContext {
    /// The column is known to be all-1 above the window (source of grains).
    bool saturated_top = false;
    /// The column is known to be all-0 below the window (sink).
    bool saturated_bottom = false;
};

/// Recovers x_i = sup{k : column(k) = 1} from a column read bottom-to-top
/// over levels [k_lo, k_lo + size). Returns nullopt when the top is outside
/// the window and no saturation flag resolves it.
/// Throws ForbiddenPatternError on a non-monotone column.
std::optional<Height> zeta_decode_column(std::span<const std::uint8_t> column, std::int64_t k_lo,
                                         ColumnContext context = {});

/// The (height+1)^width staircase windows of the given order, indexed in
/// lexicographic order of the top counts (first column most significant).
class StaircaseSpace {
public:
    StaircaseSpace(std::size_t width, std::size_t height);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::uint64_t size() const noexcept { return size_; }

    StaircasePattern at(std::uint64_t index) const;
    /// Top counts only, written into `tops` (size width()).
    void tops_at(std::uint64_t index, std::span<std::uint32_t> tops) const;
    std::uint64_t index_of(const StaircasePattern& p) const;

private:
    std::size_t width_;
    std::size_t height_;
    std::uint64_t size_;
};

/// Checks the budget and returns the enumeration space.
StaircaseSpace enumerate_staircase(std::size_t width, std::size_t height,
                                   std::uint64_t budget = enumeration_budget());

/// Visits every staircase pattern of the order in index order.
void for_each_staircase(const StaircaseSpace& space,
                        const std::function<void(std::uint64_t, const StaircasePattern&)>& visit);

}  // namespace sandlab
