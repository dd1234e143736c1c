#include "sandlab/configuration.hpp"

#include <algorithm>
#include <sstream>

namespace sandlab {

namespace {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_sub_overflow(a, b, &out)) throw OverflowError("index overflow");
    return out;
}

}  // namespace

Configuration::Configuration() = default;

Configuration Configuration::constant(Height c, int dim) {
    if (dim != 1 && dim != 2) throw DimensionError("dimension must be 1 or 2");
    Configuration x;
    x.dim_ = dim;
    x.left_ = c;
    x.right_ = c;
    return x;
}

Configuration Configuration::line(Height left_bg, Height right_bg, std::int64_t origin,
                                  std::vector<Height> core) {
    Configuration x;
    x.dim_ = 1;
    x.left_ = left_bg;
    x.right_ = right_bg;
    x.origin_ = {origin, 0};
    x.width_ = core.size();
    x.cells_ = std::move(core);
    x.canonicalize();
    return x;
}

Configuration Configuration::periodic(std::vector<Height> cells) {
    if (cells.empty()) throw InvalidArgument("periodic configuration needs period >= 1");
    Configuration x;
    x.dim_ = 1;
    x.kind_ = Kind::Periodic;
    x.cells_ = std::move(cells);
    x.canonicalize();
    return x;
}

Configuration Configuration::plane(Height bg, Point origin, std::size_t width, std::size_t height,
                                   std::vector<Height> core) {
    if (core.size() != width * height) throw DimensionError("core size does not match width*height");
    Configuration x;
    x.dim_ = 2;
    x.left_ = bg;
    x.right_ = bg;
    x.origin_ = origin;
    x.width_ = width;
    x.height_ = height;
    x.cells_ = std::move(core);
    if (x.cells_.empty()) {
        x.width_ = 0;
        x.height_ = 1;
    }
    x.canonicalize();
    return x;
}

void Configuration::canonicalize() {
    if (kind_ == Kind::Periodic) {
        const std::size_t n = cells_.size();
        for (std::size_t p = 1; p <= n; ++p) {
            if (n % p != 0) continue;
            bool ok = true;
            for (std::size_t i = p; i < n && ok; ++i) ok = cells_[i] == cells_[i - p];
            if (ok) {
                cells_.resize(p);
                break;
            }
        }
        if (cells_.size() == 1) {
            const Height c = cells_.front();
            *this = constant(c, 1);
        }
        return;
    }

    if (dim_ == 1) {
        const auto n = static_cast<std::int64_t>(cells_.size());
        std::int64_t first = 0;
        while (first < n && cells_[first] == left_) ++first;
        std::int64_t last = n - 1;
        while (last >= 0 && cells_[last] == right_) --last;
        if (left_ == right_) {
            if (first == n) {
                cells_.clear();
                width_ = 0;
                origin_ = {0, 0};
                return;
            }
            std::vector<Height> core(cells_.begin() + first, cells_.begin() + last + 1);
            origin_[0] += first;
            cells_ = std::move(core);
        } else {
            const std::int64_t end = std::max(first, last);
            std::vector<Height> core;
            core.reserve(static_cast<std::size_t>(end - first + 1));
            for (std::int64_t k = first; k <= end; ++k) core.push_back(k < n ? cells_[k] : right_);
            origin_[0] += first;
            cells_ = std::move(core);
        }
        width_ = cells_.size();
        return;
    }

    // dim 2: bounding box of non-background cells.
    std::int64_t amin = -1, amax = -1, bmin = -1, bmax = -1;
    for (std::size_t a = 0; a < width_; ++a) {
        for (std::size_t b = 0; b < height_; ++b) {
            if (cells_[a * height_ + b] == left_) continue;
            const auto ia = static_cast<std::int64_t>(a);
            const auto ib = static_cast<std::int64_t>(b);
            if (amin < 0 || ia < amin) amin = ia;
            if (amax < 0 || ia > amax) amax = ia;
            if (bmin < 0 || ib < bmin) bmin = ib;
            if (bmax < 0 || ib > bmax) bmax = ib;
        }
    }
    if (amin < 0) {
        cells_.clear();
        width_ = 0;
        height_ = 1;
        origin_ = {0, 0};
        return;
    }
    const auto w = static_cast<std::size_t>(amax - amin + 1);
    const auto h = static_cast<std::size_t>(bmax - bmin + 1);
    std::vector<Height> core(w * h);
    for (std::size_t a = 0; a < w; ++a) {
        for (std::size_t b = 0; b < h; ++b) {
            core[a * h + b] = cells_[(a + static_cast<std::size_t>(amin)) * height_ + b +
                                     static_cast<std::size_t>(bmin)];
        }
    }
    origin_ = {origin_[0] + amin, origin_[1] + bmin};
    width_ = w;
    height_ = h;
    cells_ = std::move(core);
}

bool Configuration::is_constant() const noexcept {
    return kind_ == Kind::EventuallyConstant && cells_.empty() && left_ == right_;
}

std::optional<Height> Configuration::constant_value() const {
    if (!is_constant()) return std::nullopt;
    return left_;
}

Height Configuration::at(std::int64_t i) const {
    if (dim_ != 1) throw DimensionError("one-dimensional index on a dim-2 configuration");
    if (kind_ == Kind::Periodic) {
        return cells_[static_cast<std::size_t>(floor_mod(i, static_cast<std::int64_t>(cells_.size())))];
    }
    if (i < origin_[0]) return left_;
    const std::int64_t k = i - origin_[0];
    if (k >= static_cast<std::int64_t>(width_)) return right_;
    return cells_[static_cast<std::size_t>(k)];
}

Height Configuration::at(Point p) const {
    if (dim_ == 1) return at(p[0]);
    const std::int64_t a = p[0] - origin_[0];
    const std::int64_t b = p[1] - origin_[1];
    if (a < 0 || b < 0 || a >= static_cast<std::int64_t>(width_) ||
        b >= static_cast<std::int64_t>(height_) || cells_.empty()) {
        return left_;
    }
    return cells_[static_cast<std::size_t>(a) * height_ + static_cast<std::size_t>(b)];
}

Height Configuration::height_at(std::span<const std::int64_t> index) const {
    if (static_cast<int>(index.size()) != dim_) {
        throw DimensionError("index dimension " + std::to_string(index.size()) +
                             " does not match configuration dimension " + std::to_string(dim_));
    }
    if (dim_ == 1) return at(index[0]);
    return at(Point{index[0], index[1]});
}

bool Configuration::is_bounded() const noexcept {
    auto finite = [](const Height& h) { return h.is_finite(); };
    if (kind_ == Kind::EventuallyConstant && (!left_.is_finite() || !right_.is_finite())) return false;
    return std::all_of(cells_.begin(), cells_.end(), finite);
}

std::optional<std::pair<Height::rep, Height::rep>> Configuration::finite_range() const {
    std::optional<std::pair<Height::rep, Height::rep>> out;
    auto take = [&](const Height& h) {
        if (!h.is_finite()) return;
        const auto v = h.raw();
        if (!out) {
            out = std::make_pair(v, v);
        } else {
            out->first = std::min(out->first, v);
            out->second = std::max(out->second, v);
        }
    };
    if (kind_ == Kind::EventuallyConstant) {
        take(left_);
        take(right_);
    }
    for (const auto& h : cells_) take(h);
    return out;
}

std::string to_string(const Configuration& x) {
    std::ostringstream os;
    if (x.is_periodic()) {
        os << "periodic(";
        for (std::size_t k = 0; k < x.cells().size(); ++k) os << (k ? "," : "") << x.cells()[k];
        os << ")";
        return os.str();
    }
    if (x.dim() == 1) {
        os << "(..." << x.left_bg() << ", @" << x.origin() << "[";
        for (std::size_t k = 0; k < x.cells().size(); ++k) os << (k ? "," : "") << x.cells()[k];
        os << "], " << x.right_bg() << "...)";
        return os.str();
    }
    os << "plane(bg=" << x.bg() << ", @(" << x.origin_point()[0] << "," << x.origin_point()[1]
       << ") " << x.core_width() << "x" << x.core_height() << " [";
    for (std::size_t k = 0; k < x.cells().size(); ++k) os << (k ? "," : "") << x.cells()[k];
    os << "])";
    return os.str();
}

Configuration shift(const Configuration& x, std::span<const std::int64_t> k) {
    if (static_cast<int>(k.size()) != x.dim()) throw DimensionError("shift vector dimension mismatch");
    if (x.dim() == 1) return shift(x, k[0]);
    return shift(x, Point{k[0], k[1]});
}

Configuration shift(const Configuration& x, std::int64_t k) {
    if (x.dim() != 1) throw DimensionError("one-dimensional shift on a dim-2 configuration");
    if (x.is_constant()) return x;
    if (x.is_periodic()) {
        const auto p = static_cast<std::int64_t>(x.period());
        std::vector<Height> cells(x.cells().size());
        for (std::int64_t j = 0; j < p; ++j) cells[static_cast<std::size_t>(j)] = x.at(j + floor_mod(k, p));
        return Configuration::periodic(std::move(cells));
    }
    return Configuration::line(x.left_bg(), x.right_bg(), checked_sub(x.origin(), k),
                               std::vector<Height>(x.cells().begin(), x.cells().end()));
}

Configuration shift(const Configuration& x, Point k) {
    if (x.dim() == 1) return shift(x, k[0]);
    if (x.is_constant()) return x;
    const Point o = x.origin_point();
    return Configuration::plane(x.bg(), Point{checked_sub(o[0], k[0]), checked_sub(o[1], k[1])},
                                x.core_width(), x.core_height(),
                                std::vector<Height>(x.cells().begin(), x.cells().end()));
}

Configuration raise(const Configuration& x, std::int64_t n) {
    std::vector<Height> cells;
    cells.reserve(x.cells().size());
    for (const auto& h : x.cells()) cells.push_back(h.plus(n));
    if (x.is_periodic()) return Configuration::periodic(std::move(cells));
    if (x.dim() == 1) {
        return Configuration::line(x.left_bg().plus(n), x.right_bg().plus(n), x.origin(), std::move(cells));
    }
    if (x.is_constant()) return Configuration::constant(x.bg().plus(n), 2);
    return Configuration::plane(x.bg().plus(n), x.origin_point(), x.core_width(), x.core_height(),
                                std::move(cells));
}

Pattern<Height> window(const Configuration& x, std::span<const std::int64_t> lo,
                       std::span<const std::int64_t> hi) {
    if (static_cast<int>(lo.size()) != x.dim() || static_cast<int>(hi.size()) != x.dim()) {
        throw DimensionError("window bounds dimension mismatch");
    }
    if (x.dim() == 1) return window(x, lo[0], hi[0]);
    if (hi[0] < lo[0] || hi[1] < lo[1]) throw InvalidArgument("window requires lo <= hi");
    const auto w = static_cast<std::size_t>(hi[0] - lo[0] + 1);
    const auto h = static_cast<std::size_t>(hi[1] - lo[1] + 1);
    Pattern<Height> out(w, h, Height{0});
    for (std::size_t a = 1; a <= w; ++a) {
        for (std::size_t b = 1; b <= h; ++b) {
            out(a, b) = x.at(Point{lo[0] + static_cast<std::int64_t>(a) - 1,
                                   lo[1] + static_cast<std::int64_t>(b) - 1});
        }
    }
    return out;
}

Pattern<Height> window(const Configuration& x, std::int64_t lo, std::int64_t hi) {
    if (x.dim() != 1) throw DimensionError("one-dimensional window on a dim-2 configuration");
    if (hi < lo) throw InvalidArgument("window requires lo <= hi");
    const auto w = static_cast<std::size_t>(hi - lo + 1);
    Pattern<Height> out(w, Height{0});
    for (std::size_t k = 1; k <= w; ++k) out(k) = x.at(lo + static_cast<std::int64_t>(k) - 1);
    return out;
}

}  // namespace sandlab
