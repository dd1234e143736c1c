#include <doctest.h>

#include "sandlab/metric.hpp"
#include "sandlab/sa_engine.hpp"
#include "sandlab/sampling.hpp"
#include "support.hpp"

using namespace sandlab;
using namespace testing_support;

namespace {

const SaRule N = make_collapse(1, 1);

std::vector<Height> entries_of(const Range& R) { return {R.entries().begin(), R.entries().end()}; }

// Compares step^n against the windowed oracle on [-m, m] with margin n*r.
void check_against_oracle(const SaRule& f, const Configuration& x, std::int64_t n) {
    const std::int64_t m = 8;
    const std::int64_t reach = n * f.radius();
    const auto fx = step_n(f, x, n);
    if (x.dim() == 1) {
        const auto out = oracle_step_window(f, window(x, -m - reach, m + reach), n);
        REQUIRE(out.width() == static_cast<std::size_t>(2 * m + 1));
        for (std::int64_t i = -m; i <= m; ++i) CHECK(out(static_cast<std::size_t>(i + m + 1)) == fx.at(i));
        return;
    }
    const std::int64_t mm = 3;
    const std::array<std::int64_t, 2> lo{-mm - reach, -mm - reach}, hi{mm + reach, mm + reach};
    const auto out = oracle_step_window(f, window(x, lo, hi), n);
    for (std::int64_t a = -mm; a <= mm; ++a) {
        for (std::int64_t b = -mm; b <= mm; ++b) {
            CHECK(out(static_cast<std::size_t>(a + mm + 1), static_cast<std::size_t>(b + mm + 1)) == fx.at(Point{a, b}));
        }
    }
}

}  // namespace

TEST_CASE("range_at") {
    CHECK(entries_of(range_at(figure_config(), 0, 3)) == H({1, MINF, -3, -2, -2, 1}));
    CHECK(entries_of(range_at(Configuration::constant(Height{5}), 4, 2)) == H({0, 0, 0, 0}));
    CHECK(entries_of(range_at(Configuration::line(Height{0}, 1, {Height{-1}}), 0, 1)) == H({0, -1}));
    CHECK_THROWS_AS(range_at(spike(PINF), 0, 1), CenterInfiniteError);
}

TEST_CASE("apply_local") {
    CHECK(apply_local(N, Range(1, 1, H({MINF, PINF}))) == -1);
    CHECK(apply_local(N, Range(1, 1, H({0, 0}))) == 0);
    CHECK(apply_local(N, Range(1, 1, H({1, -1}))) == -1);
    CHECK(apply_local(N, Range(1, 1, H({PINF, 1}))) == 0);
    CHECK(apply_local(make_raise(), Range(1, 1, H({MINF, 0}))) == 1);
    CHECK_THROWS_AS(apply_local(N, Range(1, 2)), DimensionError);
    CHECK_THROWS_AS(Range(1, 1, H({2, 0})), InvalidArgument);
}

TEST_CASE("range index round trip") {
    for (std::uint64_t idx = 0; idx < range_count(1, 1); ++idx) CHECK(range_index(range_from_index(1, 1, idx)) == idx);
    CHECK(range_count(1, 1) == 25);
    CHECK(range_count(1, 2) == 2401);
    CHECK(range_index(Range(1, 1, H({MINF, MINF}))) == 0);
    CHECK(range_index(Range(1, 1, H({PINF, MINF}))) == 4);
    CHECK(range_index(Range(1, 1, H({MINF, -1}))) == 5);
}

TEST_CASE("step examples") {
    CHECK(step(N, spike(2)) == spike(1));
    CHECK(step(N, Configuration::constant(Height{-4})) == Configuration::constant(Height{-4}));
    CHECK(step(make_collapse(2, 1), Configuration::constant(PINF)) == Configuration::constant(PINF));
    CHECK(step(make_raise(), Configuration::constant(PINF)) == Configuration::constant(PINF));
    CHECK(step(make_raise(), Configuration::constant(Height{0})) == Configuration::constant(Height{1}));
    // Different backgrounds: the lower side eats into the higher one.
    const auto s = Configuration::line(Height{0}, Height{3}, 0, {Height{3}});
    CHECK(step(N, s) == Configuration::line(Height{0}, Height{3}, 0, {Height{2}}));
}

TEST_CASE("orbit examples") {
    const auto o = orbit(N, spike(2), 3);
    REQUIRE(o.size() == 4);
    CHECK(o[0].config == spike(2));
    CHECK(o[1].config == spike(1));
    CHECK(o[2].config == Configuration::constant(Height{0}));
    CHECK(o[3].config == Configuration::constant(Height{0}));
    for (std::size_t t = 0; t < o.size(); ++t) CHECK(o[t].step == static_cast<std::int64_t>(t));

    const auto id = orbit(make_identity(), figure_config(), 4);
    CHECK(id.size() == 5);
    for (const auto& rec : id) CHECK(rec.config == figure_config());

    const auto up = orbit(make_raise(), Configuration::constant(Height{0}), 2);
    CHECK(up[2].config == Configuration::constant(Height{2}));
    CHECK_THROWS_AS(orbit(make_raise(), figure_config(), 3, 2), BudgetError);
}

TEST_CASE("oracle window") {
    const auto w = window(figure_config(), -3, 3);
    CHECK(oracle_step_window(N, w, 0) == w);
    const auto one = oracle_step_window(N, w, 1);
    CHECK(std::vector<Height>(one.cells().begin(), one.cells().end()) == H({-2, 0, 3, 2, 2}));
    CHECK_THROWS_AS(oracle_step_window(N, w, 4), InvalidArgument);
}

TEST_CASE("step agrees with the oracle") {
    const std::vector<SaRule> rules = {N, make_collapse(2, 1), make_raise(), make_identity(1, 2)};
    SampleOptions opts;
    opts.p_periodic = 0.15;
    ConfigSampler rng(17, opts);
    for (int k = 0; k < 500; ++k) {
        const auto x = rng.next();
        const auto& f = rules[static_cast<std::size_t>(k) % rules.size()];
        check_against_oracle(f, x, rng.uniform(0, 5));
    }
    SampleOptions opts2;
    opts2.dim = 2;
    opts2.max_width = 4;
    ConfigSampler rng2(18, opts2);
    for (int k = 0; k < 60; ++k) check_against_oracle(make_collapse(1, 2), rng2.next(), rng2.uniform(0, 2));
}

TEST_CASE("step preserves the representation family") {
    SampleOptions opts;
    opts.p_periodic = 0.5;
    ConfigSampler rng(8, opts);
    for (int k = 0; k < 300; ++k) {
        const auto x = rng.next();
        const auto y = step(make_collapse(2, 1), x);
        if (x.is_periodic()) {
            CHECK((y.is_periodic() || y.is_constant()));
            CHECK(x.period() % y.period() == 0);
        } else {
            CHECK_FALSE(y.is_periodic());
        }
    }
}

TEST_CASE("iterated rules") {
    const auto raise2 = iterate_local_rule(make_raise(), 2);
    CHECK(raise2.radius() == 3);
    CHECK(raise2.apply(Range(1, 3)) == 2);
    CHECK(raise2.apply(Range(1, 3, H({MINF, 3, -2, PINF, 0, 1}))) == 2);

    const auto n2 = iterate_local_rule(N, 2);
    CHECK(n2.backing() == SaRule::Backing::DenseTable);
    CHECK(n2.apply(range_at(Configuration::line(Height{0}, 1, {Height{-1}}), 0, 3)) == -1);

    const auto id5 = iterate_local_rule(make_identity(), 5);
    CHECK(id5.radius() == 9);
    CHECK(id5.backing() == SaRule::Backing::Computed);
    ConfigSampler rng(2);
    for (int k = 0; k < 20; ++k) {
        const auto x = rng.next_bounded();
        CHECK(id5.apply(range_at(x, 0, 9)) == 0);
    }
}

TEST_CASE("parallel and serial table fills agree") {
    const auto a = iterate_local_rule(N, 2);
    const auto b = iterate_local_rule_serial(N, 2);
    CHECK(std::equal(a.table().begin(), a.table().end(), b.table().begin(), b.table().end()));
}

TEST_CASE("iterated rule equals repeated steps") {
    SampleOptions opts;
    opts.p_periodic = 0.1;
    const std::vector<SaRule> rules = {N, make_collapse(2, 1)};
    for (const auto& f : rules) {
        for (std::int64_t n : {1, 2, 3}) {
            const auto fn = iterate_local_rule(f, n);
            ConfigSampler rng(static_cast<std::uint64_t>(100 + n), opts);
            for (int k = 0; k < 200; ++k) {
                const auto x = rng.next();
                CHECK(step(fn, x) == step_n(f, x, n));
            }
        }
    }
}

TEST_CASE("widened rule has the same global map") {
    const auto wide = widen_rule(N, 3);
    ConfigSampler rng(12);
    for (int k = 0; k < 200; ++k) {
        const auto x = rng.next();
        CHECK(step(wide, x) == step(N, x));
    }
}

TEST_CASE("characterization harness") {
    CHECK(check_characterization(N, 200).passed);
    CHECK(check_characterization(make_raise(), 100).passed);
    CHECK(check_characterization(make_collapse(2, 1), 200).passed);
    CHECK(check_characterization(make_collapse(1, 2), 60).passed);
    const auto report = check_characterization(N, 50, 3);
    CHECK(report.samples_checked == 50);
    CHECK(report.failed_property.empty());
}

TEST_CASE("a continuity modulus of r + w is too small") {
    // Drops a pile whose right neighbor is out of sight.
    const auto f = SaRule::computed(1, 1, [](const Range& R) { return R.at(1) == PINF ? -1 : 0; }, "drop", false);
    const auto x = Configuration::line(Height{0}, 0, H({1, 2}));
    const auto y = Configuration::line(Height{0}, 0, H({1, 5}));
    // Ground cylinders agree at radius r + w = 1 but the images differ at w = 0.
    CHECK(ground_cylinder(x, {0, 0}, 1) == ground_cylinder(y, {0, 0}, 1));
    CHECK(ground_cylinder(step(f, x), {0, 0}, 0) != ground_cylinder(step(f, y), {0, 0}, 0));
    CHECK(check_characterization(f, 300).passed);
}

TEST_CASE("no positive expansivity witnesses") {
    const std::vector<SaRule> rules = {N, make_collapse(2, 1), make_raise(), make_identity()};
    ConfigSampler rng(31);
    for (const auto& f : rules) {
        for (std::int64_t k = 0; k <= 8; ++k) {
            const auto side = static_cast<std::size_t>(2 * k + 1);
            std::vector<Height> core_x(side + 2, PINF), core_y(side + 2, PINF);
            core_x.front() = Height(rng.uniform(-3, 3));
            core_y.front() = Height(rng.uniform(4, 6));
            core_x.back() = Height(rng.uniform(-3, 3));
            auto x = Configuration::line(Height{0}, -k - 1, core_x);
            auto y = Configuration::line(Height{1}, -k - 1, core_y);
            for (int n = 0; n <= 100; ++n) {
                CHECK(dist_ground(x, y) < Distance::pow2(k));
                x = step(f, x);
                y = step(f, y);
            }
        }
    }
}
