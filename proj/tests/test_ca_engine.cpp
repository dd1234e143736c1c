#include <doctest.h>

#include <random>

#include "sandlab/ca_engine.hpp"

using namespace sandlab;

namespace {

Pattern<Cell> random_pattern(std::mt19937_64& rng, int dim, std::size_t w, std::size_t h, int states) {
    Pattern<Cell> p = dim == 1 ? Pattern<Cell>(w, 0) : Pattern<Cell>(w, h, 0);
    std::uniform_int_distribution<int> d(0, states - 1);
    for (Cell& c : p.cells()) c = static_cast<Cell>(d(rng));
    return p;
}

// Crop of a dim-2 pattern to columns [a0, a0+w) and rows [b0, b0+h), 1-based.
Pattern<Cell> crop(const Pattern<Cell>& p, std::size_t a0, std::size_t b0, std::size_t w, std::size_t h) {
    Pattern<Cell> out(w, h, 0);
    for (std::size_t a = 1; a <= w; ++a) {
        for (std::size_t b = 1; b <= h; ++b) out(a, b) = p(a0 + a - 1, b0 + b - 1);
    }
    return out;
}

}  // namespace

TEST_CASE("ca_apply on sample rules") {
    std::mt19937_64 rng(1);
    const auto id = make_ca_identity(2, 1);
    const auto zero = make_ca_constant(2, 1, 2, 0);
    for (int k = 0; k < 50; ++k) {
        const auto U = random_pattern(rng, 2, 3, 3, 2);
        CHECK(ca_apply(id, U) == U(2, 2));
        CHECK(ca_apply(zero, U) == 0);
    }
    CHECK_THROWS_AS(ca_apply(id, Pattern<Cell>(5, 5, 0)), DimensionError);
    const auto shift = make_ca_shift_right(3);
    CHECK(ca_apply(shift, Pattern<Cell>::from_cells(3, {2, 0, 1})) == 2);
}

TEST_CASE("neighborhood index") {
    const auto g = make_ca_min(2, 1, 2);
    CHECK(g.neighborhood_count() == 512);
    Pattern<Cell> U(3, 3, 0);
    U(1, 1) = 1;
    CHECK(g.index_of(U) == 1);
    U(1, 2) = 1;  // second flat position: the vertical axis is the fastest
    CHECK(g.index_of(U) == 3);
    for (std::uint64_t idx = 0; idx < g.neighborhood_count(); ++idx) CHECK(g.index_of(g.neighborhood_at(idx)) == idx);
}

TEST_CASE("ca_extend") {
    std::mt19937_64 rng(2);
    const auto id = make_ca_identity(2, 1);
    const auto mn = make_ca_min(2, 1, 3);
    for (int k = 0; k < 40; ++k) {
        const auto U = random_pattern(rng, 2, 3, 3, 3);
        const auto one = ca_extend(mn, U);
        CHECK(one.width() == 1);
        CHECK(one.height() == 1);
        CHECK(one(1, 1) == ca_apply(mn, U));

        const auto big = random_pattern(rng, 2, 7, 8, 2);
        CHECK(ca_extend(id, big) == crop(big, 2, 2, 5, 6));

        // Extending then cropping equals cropping then extending.
        const auto ext = ca_extend(mn, big);
        CHECK(crop(ext, 2, 3, 2, 2) == ca_extend(mn, crop(big, 2, 3, 4, 4)));
    }
    CHECK_THROWS_AS(ca_extend(id, Pattern<Cell>(2, 5, 0)), InvalidArgument);
    const auto line = Pattern<Cell>::from_cells(5, {1, 1, 0, 1, 1});
    const auto out = ca_extend(make_ca_min(1, 1, 2), line);
    CHECK(std::vector<Cell>(out.cells().begin(), out.cells().end()) == std::vector<Cell>{0, 0, 0});
}

TEST_CASE("spreading and quiescent states") {
    const auto zero = find_spreading_states(make_ca_constant(1, 1, 2, 0));
    CHECK(zero.spreading == std::vector<int>{0});
    const auto mn = find_spreading_states(make_ca_min(1, 1, 2));
    CHECK(mn.spreading == std::vector<int>{0});
    CHECK(mn.quiescent == std::vector<int>{0, 1});
    const auto id = find_spreading_states(make_ca_identity(1, 1, 2));
    CHECK(id.spreading.empty());
    CHECK(id.quiescent == std::vector<int>{0, 1});
    CHECK_THROWS_AS(find_spreading_states(make_ca_min(2, 2, 2), 1000), BudgetError);
}

TEST_CASE("dense and function backings agree") {
    const std::vector<CaRule> rules = {make_ca_min(2, 1, 2), make_ca_identity(1, 2, 3), make_ca_shift_right(4),
                                       make_ca_complement_center(2, 1)};
    for (const auto& g : rules) {
        const auto d = g.materialize();
        const auto s = g.materialize_serial();
        CHECK(d.backing() == CaRule::Backing::DenseTable);
        CHECK(std::equal(d.table().begin(), d.table().end(), s.table().begin(), s.table().end()));
        for (std::uint64_t idx = 0; idx < g.neighborhood_count(); ++idx) {
            const auto U = g.neighborhood_at(idx);
            CHECK(d.apply(U) == g.apply(U));
        }
    }
    CHECK_THROWS_AS(make_ca_min(2, 2, 2).materialize(1000), BudgetError);
}

TEST_CASE("single-entry corruption") {
    const auto g = make_ca_min(1, 1, 2);
    for (const auto& base : {g, g.materialize()}) {
        const auto bad = base.with_entry(7, 0);
        for (std::uint64_t idx = 0; idx < 8; ++idx) {
            const auto U = g.neighborhood_at(idx);
            CHECK(bad.apply(U) == (idx == 7 ? 0 : g.apply(U)));
        }
    }
}

TEST_CASE("cyclic step") {
    const std::vector<Cell> w = {1, 1, 0, 1};
    CHECK(ca_step_cyclic(make_ca_min(1, 1, 2), w) == std::vector<Cell>{1, 0, 0, 0});
    CHECK(ca_step_cyclic(make_ca_shift_right(2), w) == std::vector<Cell>{1, 1, 1, 0});
}
