#include "sandlab/metric.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace sandlab {

namespace {

using i128 = __int128;

std::int64_t abs64(std::int64_t v) { return v < 0 ? -v : v; }

// Sites whose pile pairs represent every distinct situation nearest to the
// origin. Outside the scanned box the pair sequence repeats with period P.
std::vector<Point> candidate_sites(const Configuration& x, const Configuration& y) {
    if (x.dim() != y.dim()) throw DimensionError("distance between configurations of different dimension");
    std::vector<Point> sites;
    if (x.dim() == 1) {
        std::int64_t lo = 0, hi = 0;
        for (const Configuration* c : {&x, &y}) {
            if (c->is_periodic() || c->is_constant()) continue;
            lo = std::min(lo, c->origin());
            hi = std::max(hi, c->origin() + static_cast<std::int64_t>(c->core_width()) - 1);
        }
        const auto px = static_cast<std::int64_t>(x.period());
        const auto py = static_cast<std::int64_t>(y.period());
        const std::int64_t p = std::lcm(px, py);
        if (p > (std::int64_t{1} << 24)) throw BudgetError("period lcm too large for distance scan");
        for (std::int64_t i = lo - p; i <= hi + p; ++i) sites.push_back({i, 0});
        return sites;
    }
    std::int64_t alo = 0, ahi = 0, blo = 0, bhi = 0;
    for (const Configuration* c : {&x, &y}) {
        if (c->is_constant()) continue;
        const Point o = c->origin_point();
        alo = std::min(alo, o[0]);
        blo = std::min(blo, o[1]);
        ahi = std::max(ahi, o[0] + static_cast<std::int64_t>(c->core_width()) - 1);
        bhi = std::max(bhi, o[1] + static_cast<std::int64_t>(c->core_height()) - 1);
    }
    for (std::int64_t a = alo - 1; a <= ahi + 1; ++a) {
        for (std::int64_t b = blo - 1; b <= bhi + 1; ++b) sites.push_back({a, b});
    }
    return sites;
}

std::int64_t norm(const Point& p, int dim) {
    return dim == 1 ? abs64(p[0]) : std::max(abs64(p[0]), abs64(p[1]));
}

// Least radius r at which beta_r^ref separates a and b (nullopt if a == b).
// beta agrees iff both are above ref + r or both below ref - r.
std::optional<std::int64_t> separation_radius(Height a, Height b, i128 ref) {
    if (a == b) return std::nullopt;
    const Height lo = std::min(a, b);
    const Height hi = std::max(a, b);
    i128 t = 0;
    if (lo.is_finite()) t = std::max(t, i128{lo.raw()} - ref);
    if (hi.is_finite()) t = std::max(t, ref - i128{hi.raw()});
    if (t > std::numeric_limits<std::int64_t>::max()) throw OverflowError("separation radius overflow");
    return static_cast<std::int64_t>(t);
}

// Least |k| over the levels k where [a >= k] and [b >= k] differ.
std::optional<std::int64_t> zeta_separation(Height a, Height b) {
    if (a == b) return std::nullopt;
    const Height lo = std::min(a, b);
    const Height hi = std::max(a, b);
    // Differing levels: lo < k <= hi.
    if (lo.is_finite() && lo.raw() >= 0) return lo.raw() + 1;
    if (hi.is_finite() && hi.raw() < 0) return -hi.raw();
    return 0;
}

std::int64_t finite_abs_max(const Configuration& c, i128 ref) {
    i128 m = 0;
    if (auto range = c.finite_range()) {
        m = std::max(m, i128{range->first} - ref);
        m = std::max(m, ref - i128{range->first});
        m = std::max(m, i128{range->second} - ref);
        m = std::max(m, ref - i128{range->second});
    }
    if (m > (i128{1} << 40)) throw BudgetError("heights too large for a radius scan");
    return static_cast<std::int64_t>(m);
}

constexpr Point kOrigin{0, 0};

}  // namespace

Height beta(std::int64_t r, Height::rep m, Height n) {
    if (!n.is_finite()) return n;
    const i128 diff = i128{n.raw()} - i128{m};
    if (diff > r) return Height::plus_inf();
    if (diff < -i128{r}) return Height::minus_inf();
    return Height(static_cast<Height::rep>(diff));
}

TopCylinder top_cylinder(const Configuration& x, Point i, std::int64_t r) {
    if (r < 0) throw InvalidArgument("cylinder radius must be >= 0");
    const Height center = x.at(i);
    const Height::rep ref = center.is_finite() ? center.raw() : 0;
    const auto side = static_cast<std::size_t>(2 * r + 1);
    TopCylinder out{r, x.dim() == 1 ? Pattern<Height>(side) : Pattern<Height>(side, side, Height{0})};
    if (x.dim() == 1) {
        for (std::int64_t o = -r; o <= r; ++o) {
            out.entries(static_cast<std::size_t>(o + r + 1)) = o == 0 ? center : beta(r, ref, x.at(i[0] + o));
        }
        return out;
    }
    for (std::int64_t a = -r; a <= r; ++a) {
        for (std::int64_t b = -r; b <= r; ++b) {
            out.entries(static_cast<std::size_t>(a + r + 1), static_cast<std::size_t>(b + r + 1)) =
                (a == 0 && b == 0) ? center : beta(r, ref, x.at(Point{i[0] + a, i[1] + b}));
        }
    }
    return out;
}

GroundCylinder ground_cylinder(const Configuration& x, Point i, std::int64_t r) {
    if (r < 0) throw InvalidArgument("cylinder radius must be >= 0");
    const auto side = static_cast<std::size_t>(2 * r + 1);
    GroundCylinder out{r, x.dim() == 1 ? Pattern<Height>(side) : Pattern<Height>(side, side, Height{0})};
    if (x.dim() == 1) {
        for (std::int64_t o = -r; o <= r; ++o) {
            out.entries(static_cast<std::size_t>(o + r + 1)) = beta(r, 0, x.at(i[0] + o));
        }
        return out;
    }
    for (std::int64_t a = -r; a <= r; ++a) {
        for (std::int64_t b = -r; b <= r; ++b) {
            out.entries(static_cast<std::size_t>(a + r + 1), static_cast<std::size_t>(b + r + 1)) =
                beta(r, 0, x.at(Point{i[0] + a, i[1] + b}));
        }
    }
    return out;
}

std::string Distance::to_string() const {
    if (!exponent) return "0";
    return "2^-" + std::to_string(*exponent);
}

std::strong_ordering operator<=>(const Distance& a, const Distance& b) noexcept {
    if (a.is_zero() || b.is_zero()) {
        if (a.is_zero() && b.is_zero()) return std::strong_ordering::equal;
        return a.is_zero() ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return *b.exponent <=> *a.exponent;
}

Distance dist_ground(const Configuration& x, const Configuration& y) {
    std::optional<std::int64_t> best;
    for (const Point& p : candidate_sites(x, y)) {
        if (auto t = separation_radius(x.at(p), y.at(p), 0)) {
            const std::int64_t k = std::max(norm(p, x.dim()), *t);
            if (!best || k < *best) best = k;
        }
    }
    return Distance{best};
}

Distance dist_top(const Configuration& x, const Configuration& y) {
    const Point zero = kOrigin;
    const auto sites = candidate_sites(x, y);
    const Height cx = x.at(zero);
    if (cx != y.at(zero)) return Distance::pow2(0);
    const i128 ref = cx.is_finite() ? cx.raw() : 0;
    std::optional<std::int64_t> best;
    for (const Point& p : sites) {
        if (p == zero) continue;
        if (auto t = separation_radius(x.at(p), y.at(p), ref)) {
            const std::int64_t k = std::max(norm(p, x.dim()), *t);
            if (!best || k < *best) best = k;
        }
    }
    return Distance{best};
}

Distance dist_zeta(const Configuration& x, const Configuration& y) {
    std::optional<std::int64_t> best;
    for (const Point& p : candidate_sites(x, y)) {
        if (auto t = zeta_separation(x.at(p), y.at(p))) {
            const std::int64_t k = std::max(norm(p, x.dim()), *t);
            if (!best || k < *best) best = k;
        }
    }
    return Distance{best};
}

Distance dist_ground_scan(const Configuration& x, const Configuration& y) {
    std::int64_t extent = 0;
    for (const Point& p : candidate_sites(x, y)) extent = std::max(extent, norm(p, x.dim()));
    const std::int64_t bound = extent + std::max(finite_abs_max(x, 0), finite_abs_max(y, 0)) + 1;
    const Point zero = kOrigin;
    for (std::int64_t r = 0; r <= bound; ++r) {
        if (ground_cylinder(x, zero, r) != ground_cylinder(y, zero, r)) return Distance::pow2(r);
    }
    return Distance::zero();
}

Distance dist_top_scan(const Configuration& x, const Configuration& y) {
    const Point zero = kOrigin;
    std::int64_t extent = 0;
    for (const Point& p : candidate_sites(x, y)) extent = std::max(extent, norm(p, x.dim()));
    const Height cx = x.at(zero);
    const i128 ref = cx.is_finite() ? cx.raw() : 0;
    const std::int64_t bound = extent + std::max(finite_abs_max(x, ref), finite_abs_max(y, ref)) + 1;
    for (std::int64_t r = 0; r <= bound; ++r) {
        if (top_cylinder(x, zero, r) != top_cylinder(y, zero, r)) return Distance::pow2(r);
    }
    return Distance::zero();
}

Pattern<std::uint8_t> StaircasePattern::to_pattern() const {
    Pattern<std::uint8_t> out(tops.size(), height, 0);
    for (std::size_t a = 0; a < tops.size(); ++a) {
        for (std::size_t b = 0; b < tops[a]; ++b) out(a + 1, b + 1) = 1;
    }
    return out;
}

StaircasePattern StaircasePattern::from_pattern(const Pattern<std::uint8_t>& p) {
    if (p.dim() != 2) throw DimensionError("staircase patterns are two-dimensional");
    if (contains_forbidden(p)) throw ForbiddenPatternError("pattern contains a 0 below a 1");
    StaircasePattern out{p.height(), std::vector<std::uint32_t>(p.width(), 0)};
    for (std::size_t a = 1; a <= p.width(); ++a) {
        std::uint32_t t = 0;
        while (t < p.height() && p(a, t + 1) == 1) ++t;
        out.tops[a - 1] = t;
    }
    return out;
}

bool contains_forbidden(const Pattern<std::uint8_t>& p) {
    if (p.dim() != 2) return false;
    for (std::size_t a = 1; a <= p.width(); ++a) {
        for (std::size_t b = 1; b < p.height(); ++b) {
            if (p(a, b) == 0 && p(a, b + 1) == 1) return true;
        }
    }
    return false;
}

StaircasePattern zeta_window(const Configuration& x, std::int64_t hlo, std::int64_t hhi,
                             std::int64_t vlo, std::int64_t vhi) {
    if (x.dim() != 1) throw DimensionError("zeta windows are implemented for dim-1 configurations");
    if (hhi < hlo || vhi < vlo) throw InvalidArgument("empty zeta window");
    const auto h = static_cast<std::size_t>(vhi - vlo + 1);
    StaircasePattern out{h, std::vector<std::uint32_t>(static_cast<std::size_t>(hhi - hlo + 1), 0)};
    for (std::int64_t i = hlo; i <= hhi; ++i) {
        const Height v = x.at(i);
        std::uint32_t t = 0;
        if (v.is_plus_inf()) {
            t = static_cast<std::uint32_t>(h);
        } else if (v.is_finite()) {
            const i128 ones = i128{v.raw()} - vlo + 1;
            t = static_cast<std::uint32_t>(std::clamp<i128>(ones, 0, static_cast<i128>(h)));
        }
        out.tops[static_cast<std::size_t>(i - hlo)] = t;
    }
    return out;
}

std::optional<Height> zeta_decode_column(std::span<const std::uint8_t> column, std::int64_t k_lo,
                                         ColumnContext context) {
    std::size_t ones = 0;
    while (ones < column.size() && column[ones] == 1) ++ones;
    for (std::size_t k = ones; k < column.size(); ++k) {
        if (column[k] != 0) throw ForbiddenPatternError("column has a 0 below a 1");
    }
    if (ones == 0) {
        if (context.saturated_bottom) return Height::minus_inf();
        return std::nullopt;
    }
    if (ones == column.size()) {
        if (context.saturated_top) return Height::plus_inf();
        return std::nullopt;
    }
    return Height(k_lo + static_cast<std::int64_t>(ones) - 1);
}

StaircaseSpace::StaircaseSpace(std::size_t width, std::size_t height)
    : width_(width), height_(height), size_(saturating_pow(height + 1, width)) {}

void StaircaseSpace::tops_at(std::uint64_t index, std::span<std::uint32_t> tops) const {
    const std::uint64_t base = height_ + 1;
    for (std::size_t j = width_; j-- > 0;) {
        tops[j] = static_cast<std::uint32_t>(index % base);
        index /= base;
    }
}

StaircasePattern StaircaseSpace::at(std::uint64_t index) const {
    StaircasePattern out{height_, std::vector<std::uint32_t>(width_, 0)};
    tops_at(index, out.tops);
    return out;
}

std::uint64_t StaircaseSpace::index_of(const StaircasePattern& p) const {
    if (p.width() != width_ || p.height != height_) throw DimensionError("staircase order mismatch");
    std::uint64_t index = 0;
    for (std::uint32_t t : p.tops) index = index * (height_ + 1) + t;
    return index;
}

StaircaseSpace enumerate_staircase(std::size_t width, std::size_t height, std::uint64_t budget) {
    if (width < 1 || height < 1) throw InvalidArgument("staircase width and height must be >= 1");
    StaircaseSpace space(width, height);
    if (space.size() > budget) {
        throw BudgetError("staircase enumeration of " + std::to_string(width) + "x" +
                          std::to_string(height) + " exceeds budget " + std::to_string(budget));
    }
    return space;
}

void for_each_staircase(const StaircaseSpace& space,
                        const std::function<void(std::uint64_t, const StaircasePattern&)>& visit) {
    StaircasePattern p{space.height(), std::vector<std::uint32_t>(space.width(), 0)};
    for (std::uint64_t index = 0; index < space.size(); ++index) {
        space.tops_at(index, p.tops);
        visit(index, p);
    }
}

}  // namespace sandlab
