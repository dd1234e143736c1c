#include "sandlab/sa_engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>

#include "sandlab/metric.hpp"
#include "sandlab/sampling.hpp"

namespace sandlab {

namespace {

template <class Get>
Range range_from(int dim, std::int64_t r, Height center, Point i, const std::vector<Point>& offsets, Get&& get) {
    std::vector<Height> entries;
    entries.reserve(offsets.size());
    for (const Point& o : offsets) entries.push_back(beta(r, center.raw(), get(Point{i[0] + o[0], i[1] + o[1]})));
    return Range(dim, r, std::move(entries));
}

template <class Get>
Height next_value(const SaRule& f, Height center, Point i, const std::vector<Point>& offsets, Get&& get) {
    if (!center.is_finite()) return center;
    return center.plus(f.apply(range_from(f.dim(), f.radius(), center, i, offsets, get)));
}

Height next_background(const SaRule& f, Height bg) {
    if (!bg.is_finite()) return bg;
    return bg.plus(f.apply(Range(f.dim(), f.radius())));
}

}  // namespace

Range range_at(const Configuration& x, Point i, std::int64_t r) {
    const Height center = x.at(i);
    if (!center.is_finite()) throw CenterInfiniteError("range requested at an infinite pile");
    const auto offsets = range_offsets(x.dim(), r);
    return range_from(x.dim(), r, center, i, offsets, [&](Point p) { return x.at(p); });
}

Range range_at(const Configuration& x, std::int64_t i, std::int64_t r) { return range_at(x, Point{i, 0}, r); }

Configuration step(const SaRule& f, const Configuration& x) {
    if (f.dim() != x.dim()) throw DimensionError("rule and configuration dimensions differ");
    const std::int64_t r = f.radius();
    const auto offsets = range_offsets(x.dim(), r);

    if (x.is_periodic()) {
        const auto p = static_cast<std::int64_t>(x.period());
        std::vector<Height> cells(x.cells().size());
        for (std::int64_t k = 0; k < p; ++k) {
            cells[static_cast<std::size_t>(k)] =
                next_value(f, x.at(k), Point{k, 0}, offsets, [&](Point q) { return x.at(q); });
        }
        return Configuration::periodic(std::move(cells));
    }
    if (x.is_constant()) return Configuration::constant(next_background(f, x.bg()), x.dim());

    if (x.dim() == 1) {
        const std::int64_t lo = x.origin() - r;
        const std::int64_t hi = x.origin() + static_cast<std::int64_t>(x.core_width()) - 1 + r;
        // Buffer covering every cell read: [lo - r, hi + r].
        const Pattern<Height> buf = window(x, lo - r, hi + r);
        auto get = [&](Point q) { return buf(static_cast<std::size_t>(q[0] - (lo - r) + 1)); };
        std::vector<Height> core(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t i = lo; i <= hi; ++i) {
            core[static_cast<std::size_t>(i - lo)] = next_value(f, get(Point{i, 0}), Point{i, 0}, offsets, get);
        }
        return Configuration::line(next_background(f, x.left_bg()), next_background(f, x.right_bg()), lo,
                                   std::move(core));
    }

    const Point o = x.origin_point();
    const Point lo{o[0] - r, o[1] - r};
    const Point hi{o[0] + static_cast<std::int64_t>(x.core_width()) - 1 + r,
                   o[1] + static_cast<std::int64_t>(x.core_height()) - 1 + r};
    const std::array<std::int64_t, 2> blo{lo[0] - r, lo[1] - r};
    const std::array<std::int64_t, 2> bhi{hi[0] + r, hi[1] + r};
    const Pattern<Height> buf = window(x, blo, bhi);
    auto get = [&](Point q) {
        return buf(static_cast<std::size_t>(q[0] - blo[0] + 1), static_cast<std::size_t>(q[1] - blo[1] + 1));
    };
    const auto w = static_cast<std::size_t>(hi[0] - lo[0] + 1);
    const auto h = static_cast<std::size_t>(hi[1] - lo[1] + 1);
    std::vector<Height> core(w * h);
    for (std::int64_t a = lo[0]; a <= hi[0]; ++a) {
        for (std::int64_t b = lo[1]; b <= hi[1]; ++b) {
            const Point p{a, b};
            core[static_cast<std::size_t>(a - lo[0]) * h + static_cast<std::size_t>(b - lo[1])] =
                next_value(f, get(p), p, offsets, get);
        }
    }
    return Configuration::plane(next_background(f, x.bg()), lo, w, h, std::move(core));
}

Configuration step_n(const SaRule& f, Configuration x, std::int64_t n) {
    if (n < 0) throw InvalidArgument("step count must be >= 0");
    for (std::int64_t t = 0; t < n; ++t) x = step(f, x);
    return x;
}

std::vector<OrbitRecord> orbit(const SaRule& f, const Configuration& x, std::int64_t n_steps,
                               std::size_t max_core_cells) {
    if (n_steps < 0) throw InvalidArgument("step count must be >= 0");
    std::vector<OrbitRecord> out;
    out.reserve(static_cast<std::size_t>(n_steps) + 1);
    out.push_back({0, x, 0});
    for (std::int64_t t = 1; t <= n_steps; ++t) {
        Configuration next = step(f, out.back().config);
        if (next.cells().size() > max_core_cells) {
            throw BudgetError("orbit core grew past " + std::to_string(max_core_cells) + " cells at step " +
                              std::to_string(t));
        }
        out.push_back({t, std::move(next), 0});
    }
    return out;
}

Pattern<Height> oracle_step_window(const SaRule& f, const Pattern<Height>& heights, std::int64_t n) {
    if (n < 0) throw InvalidArgument("step count must be >= 0");
    if (heights.dim() != f.dim()) throw DimensionError("pattern and rule dimensions differ");
    const std::int64_t r = f.radius();
    const auto need = static_cast<std::size_t>(2 * n * r + 1);
    if (heights.width() < need || (heights.dim() == 2 && heights.height() < need)) {
        throw InvalidArgument("window too small for " + std::to_string(n) + " steps at radius " + std::to_string(r));
    }
    Pattern<Height> cur = heights;
    const auto ur = static_cast<std::size_t>(r);
    for (std::int64_t t = 0; t < n; ++t) {
        if (cur.dim() == 1) {
            Pattern<Height> next(cur.width() - 2 * ur);
            for (std::size_t a = 1; a <= next.width(); ++a) {
                const Height c = cur(a + ur);
                if (!c.is_finite()) {
                    next(a) = c;
                    continue;
                }
                std::vector<Height> entries;
                for (std::size_t k = a; k <= a + 2 * ur; ++k) {
                    if (k != a + ur) entries.push_back(beta(r, c.raw(), cur(k)));
                }
                next(a) = c.plus(f.apply(Range(1, r, std::move(entries))));
            }
            cur = std::move(next);
        } else {
            Pattern<Height> next(cur.width() - 2 * ur, cur.height() - 2 * ur, Height{0});
            for (std::size_t a = 1; a <= next.width(); ++a) {
                for (std::size_t b = 1; b <= next.height(); ++b) {
                    const Height c = cur(a + ur, b + ur);
                    if (!c.is_finite()) {
                        next(a, b) = c;
                        continue;
                    }
                    std::vector<Height> entries;
                    for (std::size_t p = a; p <= a + 2 * ur; ++p) {
                        for (std::size_t q = b; q <= b + 2 * ur; ++q) {
                            if (p != a + ur || q != b + ur) entries.push_back(beta(r, c.raw(), cur(p, q)));
                        }
                    }
                    next(a, b) = c.plus(f.apply(Range(2, r, std::move(entries))));
                }
            }
            cur = std::move(next);
        }
    }
    return cur;
}

int iterated_variation(const SaRule& f, std::int64_t n, const Range& range) {
    const std::int64_t reach = n * f.radius();
    const Configuration x = realize_range(range);
    Pattern<Height> out;
    if (range.dim() == 1) {
        out = oracle_step_window(f, window(x, -reach, reach), n);
    } else {
        const std::array<std::int64_t, 2> lo{-reach, -reach};
        const std::array<std::int64_t, 2> hi{reach, reach};
        out = oracle_step_window(f, window(x, lo, hi), n);
    }
    return static_cast<int>(out(1).value());
}

namespace {

SaRule iterate_impl(const SaRule& f, std::int64_t n, std::uint64_t table_budget, bool parallel) {
    if (n < 1) throw InvalidArgument("iteration count must be >= 1");
    if (n == 1) return f;
    const std::int64_t radius = (2 * n - 1) * f.radius();
    const int dim = f.dim();
    const std::string name = f.name() + "^" + std::to_string(n);
    const std::uint64_t count = range_count(dim, radius);
    if (count > table_budget) {
        return SaRule::computed(dim, radius, [f, n](const Range& R) { return iterated_variation(f, n, R); }, name);
    }
    std::vector<std::int8_t> table(count);
    const auto total = static_cast<std::int64_t>(count);
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 256) if (parallel)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        try {
            const Range R = range_from_index(dim, radius, static_cast<std::uint64_t>(idx));
            table[static_cast<std::size_t>(idx)] = static_cast<std::int8_t>(iterated_variation(f, n, R));
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return SaRule::dense(dim, radius, std::move(table), name);
}

}  // namespace

SaRule iterate_local_rule(const SaRule& f, std::int64_t n, std::uint64_t table_budget) {
    return iterate_impl(f, n, table_budget, true);
}

SaRule iterate_local_rule_serial(const SaRule& f, std::int64_t n, std::uint64_t table_budget) {
    return iterate_impl(f, n, table_budget, false);
}

SaRule widen_rule(const SaRule& f, std::int64_t radius) {
    if (radius < f.radius()) throw InvalidArgument("widened radius must be >= the rule radius");
    if (radius == f.radius()) return f;
    const std::int64_t r = f.radius();
    const int dim = f.dim();
    const auto inner = range_offsets(dim, r);
    auto fn = [f, r, dim, inner](const Range& R) {
        std::vector<Height> entries;
        entries.reserve(inner.size());
        for (const Point& o : inner) {
            const Height h = R.at(o);
            if (h.is_finite() && h.raw() > r) {
                entries.push_back(Height::plus_inf());
            } else if (h.is_finite() && h.raw() < -r) {
                entries.push_back(Height::minus_inf());
            } else {
                entries.push_back(h);
            }
        }
        return f.apply(Range(dim, r, std::move(entries)));
    };
    return SaRule::computed(dim, radius, fn, f.name() + "@" + std::to_string(radius), false);
}

namespace {

// Cells where the two sides of a characterization check must be compared.
std::vector<Point> probe_sites(const Configuration& x, std::int64_t margin) {
    std::vector<Point> sites;
    if (x.dim() == 1) {
        std::int64_t lo = 0, hi = 0;
        if (x.is_periodic()) {
            hi = static_cast<std::int64_t>(x.period()) - 1;
        } else if (!x.is_constant()) {
            lo = x.origin();
            hi = x.origin() + static_cast<std::int64_t>(x.core_width()) - 1;
        }
        for (std::int64_t i = lo - margin; i <= hi + margin; ++i) sites.push_back({i, 0});
        return sites;
    }
    Point lo{0, 0}, hi{0, 0};
    if (!x.is_constant()) {
        lo = x.origin_point();
        hi = {lo[0] + static_cast<std::int64_t>(x.core_width()) - 1,
              lo[1] + static_cast<std::int64_t>(x.core_height()) - 1};
    }
    for (std::int64_t a = lo[0] - margin; a <= hi[0] + margin; ++a) {
        for (std::int64_t b = lo[1] - margin; b <= hi[1] + margin; ++b) sites.push_back({a, b});
    }
    return sites;
}

// A configuration with the same ground cylinder of radius R at the origin:
// unsaturated piles inside the cylinder are kept, saturated ones are moved
// to other saturated heights, everything outside is random.
Configuration same_cylinder(const Configuration& x, std::int64_t R, ConfigSampler& rng) {
    auto random_cell = [&]() {
        if (rng.chance(0.1)) return rng.chance(0.5) ? Height::plus_inf() : Height::minus_inf();
        return Height(rng.uniform(-R - 4, R + 4));
    };
    auto perturb = [&](Height v) {
        if (v.is_finite() && v.raw() > R) return rng.chance(0.2) ? Height::plus_inf() : Height(rng.uniform(R + 1, R + 6));
        if (v.is_finite() && v.raw() < -R) return rng.chance(0.2) ? Height::minus_inf() : Height(rng.uniform(-R - 6, -R - 1));
        if (v.is_plus_inf()) return rng.chance(0.5) ? v : Height(rng.uniform(R + 1, R + 6));
        if (v.is_minus_inf()) return rng.chance(0.5) ? v : Height(rng.uniform(-R - 6, -R - 1));
        return v;
    };
    const std::int64_t M = R + 3;
    const auto side = static_cast<std::size_t>(2 * M + 1);
    if (x.dim() == 1) {
        std::vector<Height> core(side);
        for (std::int64_t i = -M; i <= M; ++i) {
            const Height v = x.at(i);
            core[static_cast<std::size_t>(i + M)] = (i >= -R && i <= R) ? perturb(v) : random_cell();
        }
        return Configuration::line(random_cell(), random_cell(), -M, std::move(core));
    }
    std::vector<Height> core(side * side);
    for (std::int64_t a = -M; a <= M; ++a) {
        for (std::int64_t b = -M; b <= M; ++b) {
            const bool inside = std::max(std::abs(a), std::abs(b)) <= R;
            core[static_cast<std::size_t>(a + M) * side + static_cast<std::size_t>(b + M)] =
                inside ? perturb(x.at(Point{a, b})) : random_cell();
        }
    }
    return Configuration::plane(random_cell(), Point{-M, -M}, side, side, std::move(core));
}

}  // namespace

CharacterizationReport check_characterization(const SaRule& f, std::size_t samples, std::uint64_t seed) {
    SampleOptions opts;
    opts.dim = f.dim();
    opts.max_width = f.dim() == 1 ? 10 : 5;
    opts.p_periodic = f.dim() == 1 ? 0.15 : 0.0;
    ConfigSampler rng(seed, opts);
    const std::int64_t r = f.radius();
    CharacterizationReport report;

    auto fail = [&](const char* property, const Configuration& x, std::optional<Configuration> y, std::string detail) {
        report.passed = false;
        report.failed_property = property;
        report.witness = x;
        report.witness_pair = std::move(y);
        report.detail = std::move(detail);
        return report;
    };

    for (std::size_t s = 0; s < samples; ++s) {
        const Configuration x = rng.next();
        const Configuration fx = step(f, x);
        ++report.samples_checked;

        const Point k = f.dim() == 1 ? Point{rng.uniform(-4, 4), 0} : Point{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        if (step(f, shift(x, k)) != shift(fx, k)) {
            return fail("shift", x, std::nullopt, "F(sigma^k x) != sigma^k F(x) for k = " + std::to_string(k[0]));
        }
        if (step(f, raise(x, 1)) != raise(fx, 1)) {
            return fail("vertical", x, std::nullopt, "F(rho x) != rho F(x)");
        }
        for (const Point& p : probe_sites(x, r + 1)) {
            const Height a = x.at(p);
            const Height b = fx.at(p);
            if (a.is_finite() != b.is_finite() || (!a.is_finite() && a != b)) {
                return fail("infinity", x, std::nullopt, "infinite piles not preserved at " + std::to_string(p[0]));
            }
        }
        const std::int64_t w = rng.uniform(0, 3);
        const std::int64_t R = w + 2 * r;
        const Configuration y = same_cylinder(x, R, rng);
        if (ground_cylinder(x, Point{0, 0}, R) != ground_cylinder(y, Point{0, 0}, R)) {
            throw Error("internal: perturbed configuration left the cylinder");
        }
        if (ground_cylinder(fx, Point{0, 0}, w) != ground_cylinder(step(f, y), Point{0, 0}, w)) {
            return fail("continuity", x, y, "cylinders of radius " + std::to_string(R) + " agree but images differ at radius " +
                                                std::to_string(w));
        }
    }
    return report;
}

}  // namespace sandlab
