#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

#include "sandlab/error.hpp"

namespace sandlab {

/// Finite matrix of dimension 1 or 2 with 1-based indices.
///
/// In dimension 2 the first index is horizontal and the second (last) index
/// is vertical, increasing upward. Cells are stored row-major with the last
/// axis varying fastest; that flat order is the "position" order used by
/// dense rule tables.
template <class T>
class Pattern {
public:
    Pattern() = default;

    explicit Pattern(std::size_t width, T fill = T{})
        : dim_(1), width_(width), height_(1), cells_(width, fill) {}

    Pattern(std::size_t width, std::size_t height, T fill)
        : dim_(2), width_(width), height_(height), cells_(width * height, fill) {}

    static Pattern from_cells(std::size_t width, std::vector<T> cells) {
        Pattern p;
        p.dim_ = 1;
        p.width_ = width;
        p.height_ = 1;
        if (cells.size() != width) throw DimensionError("pattern cell count mismatch");
        p.cells_ = std::move(cells);
        return p;
    }

    static Pattern from_cells(std::size_t width, std::size_t height, std::vector<T> cells) {
        Pattern p;
        p.dim_ = 2;
        p.width_ = width;
        p.height_ = height;
        if (cells.size() != width * height) throw DimensionError("pattern cell count mismatch");
        p.cells_ = std::move(cells);
        return p;
    }

    int dim() const noexcept { return dim_; }
    std::size_t width() const noexcept { return width_; }
    /// Vertical extent; 1 for one-dimensional patterns.
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return cells_.size(); }

    T& operator()(std::size_t k) {
        assert(k >= 1 && k <= cells_.size());
        return cells_[k - 1];
    }
    const T& operator()(std::size_t k) const {
        assert(k >= 1 && k <= cells_.size());
        return cells_[k - 1];
    }

    T& operator()(std::size_t a, std::size_t b) {
        assert(a >= 1 && a <= width_ && b >= 1 && b <= height_);
        return cells_[(a - 1) * height_ + (b - 1)];
    }
    const T& operator()(std::size_t a, std::size_t b) const {
        assert(a >= 1 && a <= width_ && b >= 1 && b <= height_);
        return cells_[(a - 1) * height_ + (b - 1)];
    }

    std::span<const T> cells() const noexcept { return cells_; }
    std::span<T> cells() noexcept { return cells_; }

    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    int dim_ = 1;
    std::size_t width_ = 0;
    std::size_t height_ = 1;
    std::vector<T> cells_;
};

}  // namespace sandlab
