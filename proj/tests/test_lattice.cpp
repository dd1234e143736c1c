#include <doctest.h>

#include "sandlab/configuration.hpp"
#include "sandlab/sampling.hpp"
#include "support.hpp"

using namespace sandlab;
using namespace testing_support;

TEST_CASE("height order and arithmetic") {
    CHECK(MINF < Height{-1000});
    CHECK(Height{1000} < PINF);
    CHECK(PINF.plus(-5) == PINF);
    CHECK(MINF.plus(7) == MINF);
    CHECK(Height{3}.plus(-5) == Height{-2});
    CHECK_THROWS_AS(Height{Height::kMaxFinite}.plus(1), OverflowError);
    CHECK_THROWS_AS(PINF.value(), InvalidArgument);
}

TEST_CASE("height parse and print") {
    CHECK(Height::parse("+inf") == PINF);
    CHECK(Height::parse("-inf") == MINF);
    CHECK(Height::parse("-17") == Height{-17});
    CHECK(Height::parse("+4") == Height{4});
    CHECK_FALSE(Height::parse("+-5").has_value());
    CHECK_FALSE(Height::parse("abc").has_value());
    CHECK(PINF.to_string() == "+inf");
    CHECK(Height{-3}.to_string() == "-3");
}

TEST_CASE("height_at") {
    CHECK(Configuration::constant(Height{0}).at(7) == Height{0});
    CHECK(figure_config().at(-3) == Height{5});
    CHECK(figure_config().at(0) == Height{4});
    CHECK(Configuration::periodic(H({0, 3})).at(5) == Height{3});
    CHECK(Configuration::periodic(H({0, 3})).at(-1) == Height{3});
    const std::int64_t bad[2] = {0, 0};
    CHECK_THROWS_AS(figure_config().height_at(std::span<const std::int64_t>(bad, 2)), DimensionError);
}

TEST_CASE("canonical forms") {
    const auto a = Configuration::line(Height{0}, -5, H({0, 0, 2, 0}));
    CHECK(a.origin() == -3);
    CHECK(a.core_width() == 1);
    CHECK(shift(a, -3) == spike(2));

    // Distinct backgrounds: a step keeps one right-background cell.
    const auto step_cfg = Configuration::line(MINF, PINF, 4, H({MINF, PINF, PINF}));
    CHECK(step_cfg.origin() == 5);
    CHECK(step_cfg.core_width() == 1);
    CHECK(step_cfg.at(4) == MINF);
    CHECK(step_cfg.at(5) == PINF);

    CHECK(Configuration::line(Height{1}, 3, H({1, 1})) == Configuration::constant(Height{1}));
    CHECK(Configuration::periodic(H({0, 3, 0, 3})).period() == 2);
    CHECK(Configuration::periodic(H({2, 2, 2})) == Configuration::constant(Height{2}));

    const auto p = Configuration::plane(Height{0}, {-2, -2}, 3, 3, H({0, 0, 0, 0, 7, 0, 0, 0, 0}));
    CHECK(p.origin_point() == Point{-1, -1});
    CHECK(p.core_width() == 1);
    CHECK(p.core_height() == 1);
    CHECK(p.at(Point{-1, -1}) == Height{7});
}

TEST_CASE("shift") {
    CHECK(shift(Configuration::constant(Height{4}), 9) == Configuration::constant(Height{4}));
    const auto s = shift(spike(2), 1);
    CHECK(s.origin() == -1);
    CHECK(s.cells()[0] == Height{2});
    CHECK(shift(Configuration::periodic(H({0, 3})), 1) == Configuration::periodic(H({3, 0})));
    const auto p = shift(Configuration::periodic(H({0, 3})), 1);
    CHECK(p.at(-2) == Height{3});
    CHECK(p.at(0) == Height{3});
    CHECK(p.at(5) == Height{0});
}

TEST_CASE("raise") {
    CHECK(raise(Configuration::constant(Height{0}), 3) == Configuration::constant(Height{3}));
    const auto x = Configuration::line(Height{0}, 0, H({PINF, 1}));
    const auto y = raise(x, 1);
    CHECK(y.bg() == Height{1});
    CHECK(y.at(0) == PINF);
    CHECK(y.at(1) == Height{2});
    ConfigSampler rng(7);
    for (int k = 0; k < 200; ++k) {
        const auto z = rng.next();
        CHECK(raise(raise(z, 2), -2) == z);
    }
}

TEST_CASE("window") {
    const auto w0 = window(Configuration::constant(Height{0}), -1, 1);
    CHECK(w0.width() == 3);
    for (std::size_t k = 1; k <= 3; ++k) CHECK(w0(k) == Height{0});
    const auto wf = window(figure_config(), -3, 3);
    const auto expect = H({5, -2, 1, 4, 2, 2, 5});
    for (std::size_t k = 1; k <= 7; ++k) CHECK(wf(k) == expect[k - 1]);
    const auto wp = window(Configuration::periodic(H({0, 3})), 0, 3);
    const auto expect_p = H({0, 3, 0, 3});
    for (std::size_t k = 1; k <= 4; ++k) CHECK(wp(k) == expect_p[k - 1]);
}

TEST_CASE("properties on sampled configurations") {
    SampleOptions opts;
    opts.p_periodic = 0.2;
    ConfigSampler rng(11, opts);
    for (int k = 0; k < 1000; ++k) {
        const auto x = rng.next();
        // Canonicalization is idempotent: rebuilding from the stored form is a no-op.
        if (!x.is_periodic()) {
            const std::vector<Height> core(x.cells().begin(), x.cells().end());
            CHECK(Configuration::line(x.left_bg(), x.right_bg(), x.origin(), core) == x);
        }
        const std::int64_t s = rng.uniform(-5, 5);
        const std::int64_t n = rng.uniform(-3, 3);
        CHECK(raise(shift(x, s), n) == shift(raise(x, n), s));
        const std::int64_t lo = rng.uniform(-12, 12);
        const std::int64_t hi = lo + rng.uniform(0, 10);
        const auto w = window(x, lo, hi);
        for (std::int64_t i = lo; i <= hi; ++i) CHECK(w(static_cast<std::size_t>(i - lo + 1)) == x.at(i));
        for (std::int64_t i = -6; i <= 6; ++i) CHECK(shift(x, s).at(i) == x.at(i + s));
    }
}

TEST_CASE("two-dimensional shift, raise and window") {
    SampleOptions opts;
    opts.dim = 2;
    opts.max_width = 4;
    ConfigSampler rng(5, opts);
    for (int k = 0; k < 200; ++k) {
        const auto x = rng.next();
        const Point s{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const auto y = shift(x, s);
        for (std::int64_t a = -4; a <= 4; ++a) {
            for (std::int64_t b = -4; b <= 4; ++b) CHECK(y.at(Point{a, b}) == x.at(Point{a + s[0], b + s[1]}));
        }
        CHECK(raise(shift(x, s), 2) == shift(raise(x, 2), s));
    }
}
