#include <doctest.h>

#include <random>

#include "sandlab/bridge.hpp"
#include "sandlab/sa_engine.hpp"
#include "sandlab/sampling.hpp"
#include "support.hpp"

using namespace sandlab;
using namespace testing_support;

namespace {

const SaRule N = make_collapse(1, 1);

Pattern<Cell> tops_window(std::initializer_list<std::uint32_t> tops, std::size_t height) {
    return StaircasePattern{height, std::vector<std::uint32_t>(tops)}.to_pattern();
}

SaRule random_table_rule(std::mt19937_64& rng) {
    std::vector<std::int8_t> table(range_count(1, 1));
    std::uniform_int_distribution<int> d(-1, 1);
    for (auto& v : table) v = static_cast<std::int8_t>(d(rng));
    return SaRule::dense(1, 1, std::move(table), "random");
}

// Bridge with the output test inverted whenever a top is found.
CaRule sign_flipped_bridge(const SaRule& f) {
    const std::int64_t r = f.radius();
    auto fn = [f, r](const Pattern<Cell>& M) -> Cell {
        const Cell center = M.cells()[M.size() / 2];
        const auto top = find_bridge_top(M, r);
        if (!top) return center;
        return *top + f.apply(bridge_range(M, r, *top)) < 0 ? 1 : 0;
    };
    return CaRule::function(2, 2 * r, 2, fn, "flipped");
}

}  // namespace

TEST_CASE("bridge rule examples") {
    const auto g = build_ca_from_sa(N);
    CHECK(g.dim() == 2);
    CHECK(g.radius() == 2);
    CHECK(g.states() == 2);
    // All tops at the central row: flat range, f = 0, the center stays 1.
    CHECK(ca_apply(g, tops_window({3, 3, 3, 3, 3}, 5)) == 1);
    // Left neighbor one lower: f = -1 and j' + f < 0.
    CHECK(ca_apply(g, tops_window({3, 2, 3, 3, 3}, 5)) == 0);
    // Central column empty: no top, the center cell is kept.
    CHECK(ca_apply(g, tops_window({3, 3, 0, 3, 3}, 5)) == 0);
    CHECK(ca_apply(g, tops_window({0, 0, 5, 0, 0}, 5)) == 1);

    CHECK(find_bridge_top(tops_window({3, 3, 3, 3, 3}, 5), 1) == 0);
    CHECK(find_bridge_top(tops_window({3, 3, 2, 3, 3}, 5), 1) == -1);
    CHECK_FALSE(find_bridge_top(tops_window({3, 3, 4, 3, 3}, 5), 1).has_value());
    const auto R = bridge_range(tops_window({0, 5, 3, 1, 0}, 5), 1, 0);
    CHECK(std::vector<Height>(R.entries().begin(), R.entries().end()) == H({PINF, MINF}));
}

TEST_CASE("conjugacy") {
    CHECK(check_conjugacy(N, 200, 3).passed);
    CHECK(check_conjugacy(make_raise(), 100, 3).passed);
    CHECK(check_conjugacy(make_identity(), 50, 2).passed);
    CHECK(check_conjugacy(make_collapse(2, 1), 40, 2).passed);
    std::mt19937_64 rng(5);
    for (int k = 0; k < 5; ++k) CHECK(check_conjugacy(random_table_rule(rng), 40, 3, 7 + k).passed);

    const auto bad = check_conjugacy(N, sign_flipped_bridge(N), 50, 2);
    CHECK_FALSE(bad.passed);
    REQUIRE(bad.witness.has_value());
    CHECK_FALSE(bad.detail.empty());
}

TEST_CASE("invariance check") {
    const auto g = build_ca_from_sa(N);
    const auto res = check_invariance(g);
    CHECK(res.passed);
    CHECK(res.windows_checked == 16807);
    CHECK(check_invariance(make_ca_identity(2, 2)).passed);
    const auto comp = check_invariance(make_ca_complement_center(2, 2));
    CHECK_FALSE(comp.passed);
    REQUIRE(comp.witness.has_value());
    CHECK(replay_witness(make_ca_complement_center(2, 2), *comp.witness));
    CHECK_THROWS_AS(check_invariance(g, 1000), BudgetError);
}

TEST_CASE("column preservation check") {
    const auto g = build_ca_from_sa(N);
    const auto res = check_column_preservation(g);
    CHECK(res.passed);
    CHECK(res.windows_checked == 2 * 6 * 6 * 6 * 6);
    CHECK(check_column_preservation(make_ca_identity(2, 2)).passed);
    const auto one = make_ca_constant(2, 2, 2, 1);
    const auto bad = check_column_preservation(one);
    CHECK_FALSE(bad.passed);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->index == 0);
    CHECK(bad.witness->window.tops[2] == 0);
    CHECK(replay_witness(one, *bad.witness));
}

TEST_CASE("parallel and serial checks agree") {
    std::mt19937_64 rng(9);
    const std::vector<CaRule> rules = {build_ca_from_sa(N), make_ca_complement_center(2, 2),
                                       make_ca_constant(2, 2, 2, 1), sign_flipped_bridge(N),
                                       build_ca_from_sa(random_table_rule(rng))};
    for (const auto& g : rules) {
        const auto a = check_invariance(g), b = check_invariance_serial(g);
        CHECK(a.passed == b.passed);
        if (!a.passed) CHECK(a.witness->index == b.witness->index);
        const auto c = check_column_preservation(g), d = check_column_preservation_serial(g);
        CHECK(c.passed == d.passed);
        if (!c.passed) CHECK(c.witness->index == d.witness->index);
    }
}

TEST_CASE("enumeration windows") {
    CHECK(column_window(1, 0).tops == std::vector<std::uint32_t>{0, 0, 0});
    CHECK(column_window(1, 16).tops == std::vector<std::uint32_t>{0, 3, 0});
    CHECK(column_window(1, 5).tops == std::vector<std::uint32_t>{1, 0, 1});
    CHECK(invariance_window(1, 6).tops == std::vector<std::uint32_t>{0, 1, 1});
    CHECK_THROWS_AS(column_window(1, 32), InvalidArgument);
}

TEST_CASE("decide_sa") {
    const auto rep = decide_sa(build_ca_from_sa(N), true);
    CHECK(rep.verdict == Verdict::IsSa);
    CHECK(rep.invariance_windows == 16807);
    REQUIRE(rep.extracted.has_value());
    CHECK(rep.extracted->radius() == 4);
    SampleOptions opts;
    opts.p_periodic = 0.1;
    ConfigSampler rng(41, opts);
    for (int k = 0; k < 200; ++k) {
        const auto x = rng.next();
        CHECK(step(*rep.extracted, x) == step(N, x));
    }
    CHECK(check_characterization(*rep.extracted, 60).passed);

    const auto id = decide_sa(make_ca_identity(2, 1), true);
    CHECK(id.verdict == Verdict::IsSa);
    REQUIRE(id.extracted.has_value());
    ConfigSampler rng2(42);
    for (int k = 0; k < 50; ++k) {
        const auto x = rng2.next_bounded();
        CHECK(id.extracted->apply(range_at(x, 0, 2)) == 0);
    }

    const auto one = decide_sa(make_ca_constant(2, 2, 2, 1));
    CHECK(one.verdict == Verdict::NotSa);
    REQUIRE(one.witness.has_value());
    CHECK(one.witness->kind == CheckKind::ColumnPreservation);
    CHECK(replay_witness(make_ca_constant(2, 2, 2, 1), *one.witness));
    CHECK_THROWS_AS(decide_sa(make_ca_min(1, 1, 2)), InvalidArgument);
}

TEST_CASE("bridges of random table rules are sand automata") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 6; ++k) {
        const auto f = random_table_rule(rng);
        const auto rep = decide_sa(build_ca_from_sa(f), true);
        CHECK(rep.verdict == Verdict::IsSa);
        ConfigSampler samples(static_cast<std::uint64_t>(k));
        for (int s = 0; s < 40; ++s) {
            const auto x = samples.next();
            CHECK(step(*rep.extracted, x) == step(f, x));
        }
    }
}

TEST_CASE("a corrupted bridge entry is caught") {
    // Flat window with every top two rows below the center: the center cell is 0.
    const auto g = build_ca_from_sa(N);
    const auto flat_low = tops_window({1, 1, 1, 1, 1}, 5);
    CHECK(ca_apply(g, flat_low) == 0);
    const auto bad = g.with_entry(g.index_of(flat_low), 1);
    const auto rep = decide_sa(bad);
    CHECK(rep.verdict == Verdict::NotSa);
    REQUIRE(rep.witness.has_value());
    CHECK(rep.witness->kind == CheckKind::Invariance);
    CHECK(replay_witness(bad, *rep.witness));
    CHECK_FALSE(replay_witness(g, *rep.witness));
}
