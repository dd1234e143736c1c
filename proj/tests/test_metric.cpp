#include <doctest.h>

#include <algorithm>

#include "sandlab/metric.hpp"
#include "sandlab/sa_engine.hpp"
#include "sandlab/sampling.hpp"
#include "support.hpp"

using namespace sandlab;
using namespace testing_support;

namespace {

// Independent measuring device straight from the three-case definition.
Height naive_beta(std::int64_t r, std::int64_t m, Height n) {
    if (n == PINF || (n.is_finite() && n.raw() > m + r)) return PINF;
    if (n == MINF || (n.is_finite() && n.raw() < m - r)) return MINF;
    return Height(n.raw() - m);
}

// First radius where the ground (or top) views of two dim-1 configurations
// differ, scanning r upward to a generous limit.
std::optional<std::int64_t> naive_first_radius(const Configuration& x, const Configuration& y, bool top,
                                               std::int64_t limit = 60) {
    for (std::int64_t r = 0; r <= limit; ++r) {
        const Height cx = x.at(0), cy = y.at(0);
        for (std::int64_t o = -r; o <= r; ++o) {
            Height a, b;
            if (top && o == 0) {
                a = cx;
                b = cy;
            } else if (top) {
                a = naive_beta(r, cx.is_finite() ? cx.raw() : 0, x.at(o));
                b = naive_beta(r, cy.is_finite() ? cy.raw() : 0, y.at(o));
            } else {
                a = naive_beta(r, 0, x.at(o));
                b = naive_beta(r, 0, y.at(o));
            }
            if (a != b) return r;
        }
    }
    return std::nullopt;
}

std::vector<Height> cells_of(const Pattern<Height>& p) { return {p.cells().begin(), p.cells().end()}; }

}  // namespace

TEST_CASE("beta") {
    CHECK(beta(3, 4, Height{-2}) == MINF);
    CHECK(beta(3, 0, Height{5}) == PINF);
    CHECK(beta(3, 4, Height{4}) == Height{0});
    CHECK(beta(0, 7, Height{7}) == Height{0});
    CHECK(beta(2, 1, PINF) == PINF);
    CHECK(beta(2, 1, MINF) == MINF);
    for (std::int64_t r = 0; r <= 4; ++r) {
        for (std::int64_t m = -5; m <= 5; ++m) {
            for (std::int64_t n = -12; n <= 12; ++n) CHECK(beta(r, m, Height{n}) == naive_beta(r, m, Height{n}));
        }
    }
}

TEST_CASE("figure cylinders") {
    const auto x = figure_config();
    CHECK(cells_of(top_cylinder(x, {0, 0}, 3).entries) == H({1, MINF, -3, 4, -2, -2, 1}));
    CHECK(cells_of(ground_cylinder(x, {0, 0}, 3).entries) == H({PINF, -2, 1, PINF, 2, 2, PINF}));
    CHECK(cells_of(top_cylinder(Configuration::constant(Height{0}), {5, 0}, 2).entries) == H({0, 0, 0, 0, 0}));
    CHECK(cells_of(top_cylinder(Configuration::constant(PINF), {0, 0}, 1).entries) == H({PINF, PINF, PINF}));
    CHECK(cells_of(ground_cylinder(Configuration::constant(Height{0}), {0, 0}, 1).entries) == H({0, 0, 0}));
    CHECK(cells_of(ground_cylinder(Configuration::constant(PINF), {0, 0}, 2).entries) ==
          H({PINF, PINF, PINF, PINF, PINF}));
}

TEST_CASE("top cylinder agrees with the range off center") {
    ConfigSampler rng(3);
    for (int k = 0; k < 300; ++k) {
        const auto x = rng.next();
        const std::int64_t i = rng.uniform(-6, 6);
        const std::int64_t r = rng.uniform(1, 3);
        if (!x.at(i).is_finite()) {
            CHECK_THROWS_AS(range_at(x, i, r), CenterInfiniteError);
            continue;
        }
        const auto cyl = top_cylinder(x, {i, 0}, r);
        const auto R = range_at(x, i, r);
        for (std::int64_t o = -r; o <= r; ++o) {
            if (o != 0) CHECK(cyl.entries(static_cast<std::size_t>(o + r + 1)) == R.at(o));
        }
    }
}

TEST_CASE("distance examples") {
    const auto zero = Configuration::constant(Height{0});
    CHECK(dist_top(zero, zero).is_zero());
    CHECK(dist_ground(zero, zero).is_zero());
    CHECK(dist_top(zero, spike(1)) == Distance::pow2(0));
    CHECK(dist_top(zero, shift(spike(PINF), -3)) == Distance::pow2(3));
    for (std::int64_t n = 0; n <= 12; ++n) {
        const auto y = shift(spike(1), -n);
        CHECK(dist_ground(zero, y) == Distance::pow2(n));
        CHECK(dist_ground(zero, shift(spike(1), n)) == Distance::pow2(n));
    }
    CHECK(dist_ground(spike(PINF), spike(10)) == Distance::pow2(10));
    CHECK(Distance::pow2(3).to_string() == "2^-3");
    CHECK(Distance::zero().to_string() == "0");
    CHECK(Distance::pow2(5) < Distance::pow2(2));
    CHECK(Distance::zero() < Distance::pow2(40));
}

TEST_CASE("closed-form distances match radius scans") {
    SampleOptions opts;
    opts.p_periodic = 0.15;
    opts.max_height = 8;
    opts.min_height = -8;
    ConfigSampler rng(21, opts);
    for (int k = 0; k < 600; ++k) {
        const auto x = rng.next();
        // Pairs that share structure are the interesting ones.
        const auto y = rng.chance(0.5) ? rng.next() : shift(x, rng.uniform(-2, 2));
        const auto ground = dist_ground(x, y);
        const auto top = dist_top(x, y);
        CHECK(ground == dist_ground_scan(x, y));
        CHECK(top == dist_top_scan(x, y));
        CHECK(ground.exponent == naive_first_radius(x, y, false));
        CHECK(top.exponent == naive_first_radius(x, y, true));
        CHECK(ground.is_zero() == (x == y));
        CHECK(top.is_zero() == (x == y));
    }
}

TEST_CASE("ultrametric on sampled triples") {
    ConfigSampler rng(99);
    for (int k = 0; k < 1000; ++k) {
        const auto x = rng.next();
        const auto y = rng.chance(0.5) ? shift(x, 1) : rng.next();
        const auto z = rng.chance(0.5) ? raise(y, 1) : rng.next();
        CHECK(dist_ground(x, z) <= std::max(dist_ground(x, y), dist_ground(y, z)));
        CHECK(dist_ground(x, y) == dist_ground(y, x));
        CHECK(dist_top(x, z) <= std::max(dist_top(x, y), dist_top(y, z)));
        CHECK(dist_top(x, y) == dist_top(y, x));
    }
}

TEST_CASE("ground distance versus the Tychonoff distance of the encodings") {
    // Exhaustive over small windows: the two exponents differ by at most one,
    // and only when both piles at the nearest differing site are >= 0.
    const std::vector<Height> values = {MINF, -3, -2, -1, 0, 1, 2, 3, PINF};
    for (const Height a0 : values) {
        for (const Height b0 : values) {
            for (const Height a1 : values) {
                for (const Height b1 : values) {
                    const auto x = Configuration::line(Height{0}, 0, {a0, a1});
                    const auto y = Configuration::line(Height{0}, 0, {b0, b1});
                    const auto g = dist_ground(x, y);
                    const auto t = dist_zeta(x, y);
                    CHECK(g.is_zero() == t.is_zero());
                    if (g.is_zero()) continue;
                    CHECK(*g.exponent <= *t.exponent);
                    CHECK(*t.exponent <= *g.exponent + 1);
                }
            }
        }
    }
    // Concrete case where they differ: x_0 = 0 against x_0 = 1.
    CHECK(dist_ground(spike(0), spike(1)) == Distance::pow2(0));
    CHECK(dist_zeta(Configuration::constant(Height{0}), spike(1)) == Distance::pow2(1));
}

TEST_CASE("zeta windows and decoding") {
    const auto z = zeta_window(spike(2), 0, 0, 0, 4);
    CHECK(z.tops == std::vector<std::uint32_t>{3});
    const auto p = z.to_pattern();
    CHECK(p(1, 1) == 1);
    CHECK(p(1, 3) == 1);
    CHECK(p(1, 4) == 0);
    CHECK(zeta_window(spike(MINF), 0, 0, -3, 3).tops == std::vector<std::uint32_t>{0});
    CHECK(zeta_window(spike(PINF), 0, 0, -3, 3).tops == std::vector<std::uint32_t>{7});

    const std::uint8_t col[] = {1, 1, 0, 0};
    CHECK(zeta_decode_column(col, 1) == Height{2});
    const std::uint8_t full[] = {1, 1, 1};
    CHECK_FALSE(zeta_decode_column(full, 0).has_value());
    CHECK(zeta_decode_column(full, 0, {true, false}) == PINF);
    const std::uint8_t empty[] = {0, 0};
    CHECK(zeta_decode_column(empty, 0, {false, true}) == MINF);
    const std::uint8_t bad[] = {0, 1};
    CHECK_THROWS_AS(zeta_decode_column(bad, 0), ForbiddenPatternError);

    ConfigSampler rng(4);
    for (int k = 0; k < 300; ++k) {
        const auto x = rng.next();
        const auto w = zeta_window(x, -5, 5, -7, 7);
        const auto pat = w.to_pattern();
        CHECK_FALSE(contains_forbidden(pat));
        CHECK(StaircasePattern::from_pattern(pat) == w);
        for (std::int64_t i = -5; i <= 5; ++i) {
            std::vector<std::uint8_t> column;
            for (std::size_t b = 1; b <= pat.height(); ++b) column.push_back(pat(static_cast<std::size_t>(i + 6), b));
            const auto decoded = zeta_decode_column(column, -7);
            const Height v = x.at(i);
            if (decoded) {
                CHECK(*decoded == v);
            } else {
                CHECK((!v.is_finite() || v.raw() < -7 || v.raw() >= 7));
            }
        }
    }
}

TEST_CASE("forbidden pattern") {
    Pattern<std::uint8_t> p(1, 2, 0);
    p(1, 2) = 1;
    CHECK(contains_forbidden(p));
    CHECK_THROWS_AS(StaircasePattern::from_pattern(p), ForbiddenPatternError);
    p(1, 1) = 1;
    CHECK_FALSE(contains_forbidden(p));
}

TEST_CASE("staircase enumeration") {
    CHECK(enumerate_staircase(1, 2).size() == 3);
    CHECK(enumerate_staircase(2, 1).size() == 4);
    CHECK(enumerate_staircase(5, 6).size() == 16807);
    CHECK_THROWS_AS(enumerate_staircase(5, 6, 1000), BudgetError);

    // Every K-free 3x2 binary matrix appears exactly once, in lexicographic order.
    const auto space = enumerate_staircase(3, 2);
    std::vector<std::vector<std::uint32_t>> seen;
    for_each_staircase(space, [&](std::uint64_t idx, const StaircasePattern& s) {
        CHECK(space.index_of(s) == idx);
        CHECK_FALSE(contains_forbidden(s.to_pattern()));
        seen.push_back(s.tops);
    });
    CHECK(std::is_sorted(seen.begin(), seen.end()));
    std::size_t kfree = 0;
    for (unsigned bits = 0; bits < 64; ++bits) {
        Pattern<std::uint8_t> p(3, 2, 0);
        for (unsigned k = 0; k < 6; ++k) p(k / 2 + 1, k % 2 + 1) = (bits >> k) & 1U;
        if (!contains_forbidden(p)) ++kfree;
    }
    CHECK(kfree == seen.size());
}
