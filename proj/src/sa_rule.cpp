#include "sandlab/sa_rule.hpp"

#include <algorithm>

#include "sandlab/budget.hpp"
#include "sandlab/memo.hpp"

namespace sandlab {

struct SaRule::Memo {
    MemoCache<int> cache;
};

namespace {

std::size_t range_size(int dim, std::int64_t radius) {
    const auto side = static_cast<std::size_t>(2 * radius + 1);
    return (dim == 1 ? side : side * side) - 1;
}

void check_dim_radius(int dim, std::int64_t radius) {
    if (dim != 1 && dim != 2) throw DimensionError("rule dimension must be 1 or 2");
    if (radius < 0) throw InvalidArgument("rule radius must be >= 0");
}

}  // namespace

Range::Range(int dim, std::int64_t radius)
    : dim_(dim), radius_(radius), entries_(range_size(dim, radius), Height{0}) {
    check_dim_radius(dim, radius);
}

Range::Range(int dim, std::int64_t radius, std::vector<Height> entries)
    : dim_(dim), radius_(radius), entries_(std::move(entries)) {
    check_dim_radius(dim, radius);
    if (entries_.size() != range_size(dim, radius)) throw DimensionError("range entry count mismatch");
    for (const Height& h : entries_) {
        if (h.is_finite() && (h.raw() < -radius || h.raw() > radius)) {
            throw InvalidArgument("range entry " + h.to_string() + " is not saturated to precision " +
                                  std::to_string(radius));
        }
    }
}

Height Range::at(std::int64_t offset) const { return at(Point{offset, 0}); }

Height Range::at(Point offset) const { return entries_[offset_position(dim_, radius_, offset)]; }

std::vector<Point> range_offsets(int dim, std::int64_t radius) {
    std::vector<Point> out;
    if (dim == 1) {
        for (std::int64_t o = -radius; o <= radius; ++o) {
            if (o != 0) out.push_back({o, 0});
        }
        return out;
    }
    for (std::int64_t a = -radius; a <= radius; ++a) {
        for (std::int64_t b = -radius; b <= radius; ++b) {
            if (a != 0 || b != 0) out.push_back({a, b});
        }
    }
    return out;
}

std::size_t offset_position(int dim, std::int64_t radius, Point offset) {
    auto inside = [&](std::int64_t v) { return v >= -radius && v <= radius; };
    if (dim == 1) {
        const std::int64_t o = offset[0];
        if (o == 0 || !inside(o) || offset[1] != 0) {
            throw InvalidArgument("offset " + std::to_string(o) + " outside range of radius " +
                                  std::to_string(radius));
        }
        return static_cast<std::size_t>(o < 0 ? o + radius : o + radius - 1);
    }
    if ((offset[0] == 0 && offset[1] == 0) || !inside(offset[0]) || !inside(offset[1])) {
        throw InvalidArgument("offset outside range of radius " + std::to_string(radius));
    }
    const std::int64_t side = 2 * radius + 1;
    const std::int64_t flat = (offset[0] + radius) * side + (offset[1] + radius);
    const std::int64_t center = radius * side + radius;
    return static_cast<std::size_t>(flat < center ? flat : flat - 1);
}

std::uint64_t range_count(int dim, std::int64_t radius) {
    return saturating_pow(static_cast<std::uint64_t>(2 * radius + 3), range_size(dim, radius));
}

std::uint64_t range_index(const Range& range) {
    const std::int64_t r = range.radius();
    const auto base = static_cast<std::uint64_t>(2 * r + 3);
    std::uint64_t index = 0;
    const auto entries = range.entries();
    for (std::size_t k = entries.size(); k-- > 0;) {
        const Height& h = entries[k];
        std::uint64_t digit = 0;
        if (h.is_plus_inf()) {
            digit = static_cast<std::uint64_t>(2 * r + 2);
        } else if (h.is_finite()) {
            digit = static_cast<std::uint64_t>(h.raw() + r + 1);
        }
        index = index * base + digit;
    }
    return index;
}

Range range_from_index(int dim, std::int64_t radius, std::uint64_t index) {
    const auto base = static_cast<std::uint64_t>(2 * radius + 3);
    std::vector<Height> entries(range_size(dim, radius));
    for (auto& e : entries) {
        const auto digit = static_cast<std::int64_t>(index % base);
        index /= base;
        if (digit == 0) {
            e = Height::minus_inf();
        } else if (digit == 2 * radius + 2) {
            e = Height::plus_inf();
        } else {
            e = Height(digit - radius - 1);
        }
    }
    return Range(dim, radius, std::move(entries));
}

Configuration realize_range(const Range& range) {
    const std::int64_t r = range.radius();
    auto realize = [r](Height h) {
        if (h.is_plus_inf()) return Height(r + 1);
        if (h.is_minus_inf()) return Height(-r - 1);
        return h;
    };
    const auto offsets = range_offsets(range.dim(), r);
    if (range.dim() == 1) {
        std::vector<Height> core(static_cast<std::size_t>(2 * r + 1), Height{0});
        for (std::size_t k = 0; k < offsets.size(); ++k) {
            core[static_cast<std::size_t>(offsets[k][0] + r)] = realize(range.entries()[k]);
        }
        return Configuration::line(Height{0}, -r, std::move(core));
    }
    const auto side = static_cast<std::size_t>(2 * r + 1);
    std::vector<Height> core(side * side, Height{0});
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        core[static_cast<std::size_t>(offsets[k][0] + r) * side + static_cast<std::size_t>(offsets[k][1] + r)] =
            realize(range.entries()[k]);
    }
    return Configuration::plane(Height{0}, Point{-r, -r}, side, side, std::move(core));
}

SaRule SaRule::dense(int dim, std::int64_t radius, std::vector<std::int8_t> table, std::string name) {
    check_dim_radius(dim, radius);
    if (table.size() != range_count(dim, radius)) {
        throw DimensionError("dense table has " + std::to_string(table.size()) + " entries, expected " +
                             std::to_string(range_count(dim, radius)));
    }
    for (std::int8_t v : table) {
        if (v < -radius || v > radius) throw InvalidArgument("table output out of [-r, r]");
    }
    SaRule f;
    f.dim_ = dim;
    f.radius_ = radius;
    f.backing_ = Backing::DenseTable;
    f.name_ = std::move(name);
    f.table_ = std::make_shared<const std::vector<std::int8_t>>(std::move(table));
    return f;
}

SaRule SaRule::from_program(RuleProgram program, std::string name) {
    check_dim_radius(program.dim, program.radius);
    SaRule f;
    f.dim_ = program.dim;
    f.radius_ = program.radius;
    f.backing_ = Backing::Program;
    f.name_ = std::move(name);
    f.program_ = std::make_shared<const RuleProgram>(std::move(program));
    return f;
}

SaRule SaRule::native(NativeKind kind, int dim, std::int64_t radius, Evaluator evaluator, std::string name) {
    check_dim_radius(dim, radius);
    SaRule f;
    f.dim_ = dim;
    f.radius_ = radius;
    f.backing_ = Backing::Native;
    f.native_ = kind;
    f.name_ = std::move(name);
    f.evaluator_ = std::move(evaluator);
    return f;
}

SaRule SaRule::computed(int dim, std::int64_t radius, Evaluator evaluator, std::string name, bool memoize) {
    check_dim_radius(dim, radius);
    SaRule f;
    f.dim_ = dim;
    f.radius_ = radius;
    f.backing_ = Backing::Computed;
    f.name_ = std::move(name);
    f.evaluator_ = std::move(evaluator);
    if (memoize && range_count(dim, radius) != UINT64_MAX) f.memo_ = std::make_shared<Memo>();
    return f;
}

int SaRule::evaluate(const Range& range) const {
    switch (backing_) {
        case Backing::DenseTable:
            return (*table_)[range_index(range)];
        case Backing::Program:
            return program_->evaluate(range);
        case Backing::Native:
            return evaluator_(range);
        case Backing::Computed:
            if (memo_) {
                return memo_->cache.get_or_compute(range_index(range), [&] { return evaluator_(range); });
            }
            return evaluator_(range);
    }
    return 0;
}

int SaRule::apply(const Range& range) const {
    if (range.dim() != dim_ || range.radius() != radius_) {
        throw DimensionError("range of dim " + std::to_string(range.dim()) + " radius " +
                             std::to_string(range.radius()) + " given to rule of dim " + std::to_string(dim_) +
                             " radius " + std::to_string(radius_));
    }
    const int v = evaluate(range);
    if (v < -radius_ || v > radius_) {
        throw InvalidArgument("rule '" + name_ + "' produced variation " + std::to_string(v) +
                              " outside [-r, r]");
    }
    return v;
}

std::span<const std::int8_t> SaRule::table() const {
    if (!table_) return {};
    return *table_;
}

SaRule SaRule::to_dense(std::uint64_t budget) const {
    if (backing_ == Backing::DenseTable) return *this;
    const std::uint64_t count = range_count(dim_, radius_);
    if (count > budget) throw BudgetError("dense table of " + std::to_string(count) + " entries exceeds budget");
    std::vector<std::int8_t> table(count);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        table[idx] = static_cast<std::int8_t>(apply(range_from_index(dim_, radius_, idx)));
    }
    return dense(dim_, radius_, std::move(table), name_);
}

SaRule make_collapse(std::int64_t radius, int dim) {
    if (radius < 1) throw InvalidArgument("collapse radius must be >= 1");
    auto fn = [](const Range& range) {
        for (const Height& h : range.entries()) {
            if (h < Height{0}) return -1;
        }
        return 0;
    };
    return SaRule::native(SaRule::NativeKind::Collapse, dim, radius, fn,
                  "collapse(" + std::to_string(radius) + "," + std::to_string(dim) + ")");
}

SaRule make_raise(int dim) {
    return SaRule::native(SaRule::NativeKind::Raise, dim, 1, [](const Range&) { return 1; }, "raise");
}

SaRule make_identity(int dim, std::int64_t radius) {
    return SaRule::native(SaRule::NativeKind::Identity, dim, radius, [](const Range&) { return 0; }, "identity");
}

}  // namespace sandlab
