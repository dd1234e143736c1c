#include "sandlab/ca_engine.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <mutex>

#include "sandlab/memo.hpp"

namespace sandlab {

struct CaRule::Memo {
    MemoCache<Cell> cache;
};

namespace {

void check_shape(int dim, std::int64_t radius, int states) {
    if (dim != 1 && dim != 2) throw DimensionError("CA dimension must be 1 or 2");
    if (radius < 0) throw InvalidArgument("CA radius must be >= 0");
    if (states < 1 || states > 256) throw InvalidArgument("CA alphabet size must be in [1, 256]");
}

}  // namespace

CaRule CaRule::dense(int dim, std::int64_t radius, int states, std::vector<Cell> table, std::string name) {
    check_shape(dim, radius, states);
    CaRule g;
    g.dim_ = dim;
    g.radius_ = radius;
    g.states_ = states;
    g.backing_ = Backing::DenseTable;
    g.name_ = std::move(name);
    if (table.size() != g.neighborhood_count()) {
        throw DimensionError("CA table has " + std::to_string(table.size()) + " entries, expected " +
                             std::to_string(g.neighborhood_count()));
    }
    for (Cell c : table) {
        if (c >= states) throw InvalidArgument("CA table output outside the alphabet");
    }
    g.table_ = std::make_shared<const std::vector<Cell>>(std::move(table));
    return g;
}

CaRule CaRule::function(int dim, std::int64_t radius, int states, Fn fn, std::string name, bool memoize) {
    check_shape(dim, radius, states);
    CaRule g;
    g.dim_ = dim;
    g.radius_ = radius;
    g.states_ = states;
    g.backing_ = Backing::Function;
    g.name_ = std::move(name);
    g.fn_ = std::move(fn);
    if (memoize && g.neighborhood_count() != std::numeric_limits<std::uint64_t>::max()) {
        g.memo_ = std::make_shared<Memo>();
    }
    return g;
}

std::uint64_t CaRule::neighborhood_count() const {
    return saturating_pow(static_cast<std::uint64_t>(states_), cells());
}

std::uint64_t CaRule::index_of(const Pattern<Cell>& U) const {
    if (neighborhood_count() == std::numeric_limits<std::uint64_t>::max()) {
        throw BudgetError("neighborhood index does not fit 64 bits");
    }
    const auto cs = U.cells();
    std::uint64_t index = 0;
    for (std::size_t k = cs.size(); k-- > 0;) index = index * static_cast<std::uint64_t>(states_) + cs[k];
    return index;
}

Pattern<Cell> CaRule::neighborhood_at(std::uint64_t index) const {
    Pattern<Cell> U = dim_ == 1 ? Pattern<Cell>(side(), 0) : Pattern<Cell>(side(), side(), 0);
    for (Cell& c : U.cells()) {
        c = static_cast<Cell>(index % static_cast<std::uint64_t>(states_));
        index /= static_cast<std::uint64_t>(states_);
    }
    return U;
}

Cell CaRule::evaluate(const Pattern<Cell>& U) const {
    if (backing_ == Backing::DenseTable) return (*table_)[index_of(U)];
    if (memo_) return memo_->cache.get_or_compute(index_of(U), [&] { return fn_(U); });
    return fn_(U);
}

Cell CaRule::apply(const Pattern<Cell>& U) const {
    if (U.dim() != dim_ || U.width() != side() || (dim_ == 2 && U.height() != side())) {
        throw DimensionError("neighborhood order does not match rule '" + name_ + "'");
    }
    const Cell out = evaluate(U);
    if (out >= states_) throw InvalidArgument("rule '" + name_ + "' produced a state outside the alphabet");
    return out;
}

std::span<const Cell> CaRule::table() const {
    if (!table_) return {};
    return *table_;
}

CaRule CaRule::materialize_impl(std::uint64_t limit, bool parallel) const {
    if (backing_ == Backing::DenseTable) return *this;
    const std::uint64_t count = neighborhood_count();
    if (count > limit) {
        throw BudgetError("CA table of " + std::to_string(count) + " entries exceeds limit " + std::to_string(limit));
    }
    std::vector<Cell> table(count);
    const auto total = static_cast<std::int64_t>(count);
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel if (parallel)
    {
        Pattern<Cell> U = dim_ == 1 ? Pattern<Cell>(side(), 0) : Pattern<Cell>(side(), side(), 0);
#pragma omp for schedule(static, 4096)
        for (std::int64_t idx = 0; idx < total; ++idx) {
            try {
                auto rest = static_cast<std::uint64_t>(idx);
                for (Cell& c : U.cells()) {
                    c = static_cast<Cell>(rest % static_cast<std::uint64_t>(states_));
                    rest /= static_cast<std::uint64_t>(states_);
                }
                table[static_cast<std::size_t>(idx)] = fn_(U);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return dense(dim_, radius_, states_, std::move(table), name_);
}

CaRule CaRule::materialize(std::uint64_t limit) const { return materialize_impl(limit, true); }

CaRule CaRule::materialize_serial(std::uint64_t limit) const { return materialize_impl(limit, false); }

CaRule CaRule::with_entry(std::uint64_t index, Cell value) const {
    if (index >= neighborhood_count()) throw InvalidArgument("neighborhood index out of range");
    if (value >= states_) throw InvalidArgument("state outside the alphabet");
    if (backing_ == Backing::DenseTable) {
        std::vector<Cell> table = *table_;
        table[index] = value;
        return dense(dim_, radius_, states_, std::move(table), name_ + "*");
    }
    CaRule base = *this;
    auto fn = [base, index, value](const Pattern<Cell>& U) { return base.index_of(U) == index ? value : base.apply(U); };
    return function(dim_, radius_, states_, fn, name_ + "*", false);
}

Pattern<Cell> ca_extend(const CaRule& g, const Pattern<Cell>& U) {
    if (U.dim() != g.dim()) throw DimensionError("pattern and rule dimensions differ");
    const std::size_t s = g.side();
    const auto rho = static_cast<std::size_t>(g.radius());
    if (U.width() < s || (U.dim() == 2 && U.height() < s)) {
        throw InvalidArgument("pattern smaller than the rule neighborhood");
    }
    if (U.dim() == 1) {
        Pattern<Cell> out(U.width() - 2 * rho, 0);
        Pattern<Cell> nb(s, 0);
        for (std::size_t a = 1; a <= out.width(); ++a) {
            for (std::size_t k = 1; k <= s; ++k) nb(k) = U(a + k - 1);
            out(a) = g.apply(nb);
        }
        return out;
    }
    Pattern<Cell> out(U.width() - 2 * rho, U.height() - 2 * rho, 0);
    Pattern<Cell> nb(s, s, 0);
    for (std::size_t a = 1; a <= out.width(); ++a) {
        for (std::size_t b = 1; b <= out.height(); ++b) {
            for (std::size_t p = 1; p <= s; ++p) {
                for (std::size_t q = 1; q <= s; ++q) nb(p, q) = U(a + p - 1, b + q - 1);
            }
            out(a, b) = g.apply(nb);
        }
    }
    return out;
}

std::vector<Cell> ca_step_cyclic(const CaRule& g, std::span<const Cell> word) {
    if (g.dim() != 1) throw DimensionError("cyclic words need a dim-1 rule");
    if (word.empty()) throw InvalidArgument("empty cyclic word");
    const auto n = static_cast<std::int64_t>(word.size());
    const std::int64_t rho = g.radius();
    std::vector<Cell> out(word.size());
    Pattern<Cell> nb(g.side(), 0);
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::int64_t o = -rho; o <= rho; ++o) {
            nb(static_cast<std::size_t>(o + rho + 1)) = word[static_cast<std::size_t>(((i + o) % n + n) % n)];
        }
        out[static_cast<std::size_t>(i)] = g.apply(nb);
    }
    return out;
}

StateReport find_spreading_states(const CaRule& g, std::uint64_t budget) {
    const std::uint64_t count = g.neighborhood_count();
    if (count > budget) throw BudgetError("spreading-state scan of " + std::to_string(count) + " neighborhoods exceeds budget");
    const auto q = static_cast<std::size_t>(g.states());
    std::vector<bool> spreading(q, true);
    std::vector<bool> present(q);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        const Pattern<Cell> U = g.neighborhood_at(idx);
        const Cell out = g.apply(U);
        std::fill(present.begin(), present.end(), false);
        for (Cell c : U.cells()) present[c] = true;
        for (std::size_t s = 0; s < q; ++s) {
            if (present[s] && out != s) spreading[s] = false;
        }
    }
    StateReport report;
    for (std::size_t s = 0; s < q; ++s) {
        if (spreading[s]) report.spreading.push_back(static_cast<int>(s));
        if (is_quiescent(g, static_cast<int>(s))) report.quiescent.push_back(static_cast<int>(s));
    }
    return report;
}

bool is_quiescent(const CaRule& g, int state) {
    const Pattern<Cell> U = g.dim() == 1 ? Pattern<Cell>(g.side(), static_cast<Cell>(state))
                                         : Pattern<Cell>(g.side(), g.side(), static_cast<Cell>(state));
    return g.apply(U) == state;
}

CaRule make_ca_identity(int dim, std::int64_t radius, int states) {
    return CaRule::function(
        dim, radius, states, [](const Pattern<Cell>& U) { return U.cells()[U.size() / 2]; }, "identity", false);
}

CaRule make_ca_constant(int dim, std::int64_t radius, int states, Cell value) {
    if (value >= states) throw InvalidArgument("constant outside the alphabet");
    return CaRule::function(
        dim, radius, states, [value](const Pattern<Cell>&) { return value; }, "constant-" + std::to_string(value),
        false);
}

CaRule make_ca_min(int dim, std::int64_t radius, int states) {
    return CaRule::function(
        dim, radius, states,
        [](const Pattern<Cell>& U) { return *std::min_element(U.cells().begin(), U.cells().end()); }, "min", false);
}

CaRule make_ca_shift_right(int states) {
    return CaRule::function(1, 1, states, [](const Pattern<Cell>& U) { return U(1); }, "shift-right", false);
}

CaRule make_ca_complement_center(int dim, std::int64_t radius) {
    return CaRule::function(
        dim, radius, 2, [](const Pattern<Cell>& U) { return static_cast<Cell>(1 - U.cells()[U.size() / 2]); },
        "complement", false);
}

}  // namespace sandlab
