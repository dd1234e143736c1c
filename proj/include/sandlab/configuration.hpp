#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sandlab/height.hpp"
#include "sandlab/pattern.hpp"

namespace sandlab {

/// Lattice point. One-dimensional configurations only use the first component.
using Point = std::array<std::int64_t, 2>;

/// Finite description of an infinite pile configuration.
///
/// Two families are representable:
///  - eventually constant: a finite core over a background (two backgrounds,
///    left and right, in dimension 1; a single background in dimension 2);
///  - spatially periodic (dimension 1 only).
///
/// Values are always stored in canonical form, so structural equality is
/// equality of the denoted configurations.
///
/// Canonical forms:
///  - dim 1, eventually constant: `origin` is the first index whose pile
///    differs from the left background and the core ends at the last index
///    differing from the right background, except that the core keeps at
///    least one cell when the two backgrounds differ. Constant configurations
///    have an empty core at origin 0.
///  - dim 2: the core is the bounding box of the cells differing from the
///    background; empty core at origin (0, 0) for a constant configuration.
///  - periodic: least period, `cells[k] = x_k` for k in [0, period). A
///    period-1 configuration is stored as the constant configuration.
class Configuration {
public:
    enum class Kind { EventuallyConstant, Periodic };

    /// The constant configuration 0 in dimension 1.
    Configuration();

    static Configuration constant(Height c, int dim = 1);
    static Configuration line(Height left_bg, Height right_bg, std::int64_t origin,
                              std::vector<Height> core);
    /// Single-background dim-1 configuration.
    static Configuration line(Height bg, std::int64_t origin, std::vector<Height> core) {
        return line(bg, bg, origin, std::move(core));
    }
    static Configuration periodic(std::vector<Height> cells);
    /// Dim-2 configuration; `core` is row-major with the second axis fastest.
    static Configuration plane(Height bg, Point origin, std::size_t width, std::size_t height,
                               std::vector<Height> core);

    int dim() const noexcept { return dim_; }
    Kind kind() const noexcept { return kind_; }
    bool is_periodic() const noexcept { return kind_ == Kind::Periodic; }

    bool is_constant() const noexcept;
    /// The constant value when is_constant().
    std::optional<Height> constant_value() const;

    // Eventually-constant accessors.
    Height left_bg() const noexcept { return left_; }
    Height right_bg() const noexcept { return right_; }
    Height bg() const noexcept { return left_; }
    std::int64_t origin() const noexcept { return origin_[0]; }
    Point origin_point() const noexcept { return origin_; }
    /// Core width along the first axis (number of cells in dim 1).
    std::size_t core_width() const noexcept { return width_; }
    /// Core extent along the second axis (1 in dim 1).
    std::size_t core_height() const noexcept { return height_; }

    // Periodic accessors.
    std::size_t period() const noexcept { return kind_ == Kind::Periodic ? cells_.size() : 1; }

    /// Core cells (eventually constant) or one period (periodic).
    std::span<const Height> cells() const noexcept { return cells_; }

    Height at(std::int64_t i) const;
    Height at(Point p) const;
    /// Pile value at an index of dimension dim(); throws DimensionError otherwise.
    Height height_at(std::span<const std::int64_t> index) const;

    /// True when no pile is infinite.
    bool is_bounded() const noexcept;

    /// Smallest and largest finite pile (nullopt when every pile is infinite).
    std::optional<std::pair<Height::rep, Height::rep>> finite_range() const;

    friend bool operator==(const Configuration&, const Configuration&) = default;

private:
    void canonicalize();

    int dim_ = 1;
    Kind kind_ = Kind::EventuallyConstant;
    Height left_{0};
    Height right_{0};
    Point origin_{0, 0};
    std::size_t width_ = 0;
    std::size_t height_ = 1;
    std::vector<Height> cells_;
};

std::string to_string(const Configuration& x);

/// sigma^k: result_i = x_{i+k}.
Configuration shift(const Configuration& x, std::span<const std::int64_t> k);
Configuration shift(const Configuration& x, std::int64_t k);
Configuration shift(const Configuration& x, Point k);

/// rho^n: every finite pile moves by n; infinities are unchanged.
Configuration raise(const Configuration& x, std::int64_t n);

/// Finite portion with entry k equal to x_{lo + k - 1}; lo <= hi componentwise.
Pattern<Height> window(const Configuration& x, std::span<const std::int64_t> lo,
                       std::span<const std::int64_t> hi);
Pattern<Height> window(const Configuration& x, std::int64_t lo, std::int64_t hi);

/// Trajectory element.
struct OrbitRecord {
    std::int64_t step = 0;
    Configuration config;
    std::int64_t drift = 0;

    friend bool operator==(const OrbitRecord&, const OrbitRecord&) = default;
};

}  // namespace sandlab
