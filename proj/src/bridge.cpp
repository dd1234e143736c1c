#include "sandlab/bridge.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#include "sandlab/sa_engine.hpp"
#include "sandlab/sampling.hpp"

namespace sandlab {

std::optional<std::int64_t> find_bridge_top(const Pattern<Cell>& M, std::int64_t r) {
    const auto c = static_cast<std::size_t>(2 * r + 1);
    for (auto j = static_cast<std::size_t>(r + 1); j <= static_cast<std::size_t>(3 * r); ++j) {
        if (M(c, j) == 1 && M(c, j + 1) == 0) return static_cast<std::int64_t>(j) - (2 * r + 1);
    }
    return std::nullopt;
}

Range bridge_range(const Pattern<Cell>& M, std::int64_t r, std::int64_t top) {
    const std::int64_t c = 2 * r + 1;
    const std::int64_t j = top + c;
    std::vector<Height> entries;
    entries.reserve(static_cast<std::size_t>(2 * r));
    auto cell = [&](std::int64_t a, std::int64_t b) { return M(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); };
    for (std::int64_t o = -r; o <= r; ++o) {
        if (o == 0) continue;
        const std::int64_t a = c + o;
        if (cell(a, j + r + 1) == 1) {
            entries.push_back(Height::plus_inf());
        } else if (cell(a, j - r) == 0) {
            entries.push_back(Height::minus_inf());
        } else {
            std::int64_t v = -r;
            while (v < r && cell(a, j + v + 1) == 1) ++v;
            entries.push_back(Height(v));
        }
    }
    return Range(1, r, std::move(entries));
}

CaRule build_ca_from_sa(const SaRule& f) {
    if (f.dim() != 1) throw DimensionError("the bridge is built from dim-1 sand automata");
    const std::int64_t r = f.radius();
    auto fn = [f, r](const Pattern<Cell>& M) -> Cell {
        const Cell center = M.cells()[M.size() / 2];
        if (contains_forbidden(M)) return center;
        const auto top = find_bridge_top(M, r);
        if (!top) return center;
        return *top + f.apply(bridge_range(M, r, *top)) >= 0 ? 1 : 0;
    };
    return CaRule::function(2, 2 * r, 2, fn, "bridge(" + f.name() + ")");
}

ConjugacyReport check_conjugacy(const SaRule& f, const CaRule& g, std::size_t samples, std::int64_t n_steps,
                                std::uint64_t seed) {
    if (f.dim() != 1 || g.dim() != 2) throw DimensionError("conjugacy is checked for dim-1 SA and dim-2 CA");
    SampleOptions opts;
    opts.p_periodic = 0.1;
    opts.max_width = 10;
    ConfigSampler rng(seed, opts);
    const std::int64_t rho = g.radius();
    const std::int64_t H = 8, V = 10;
    ConjugacyReport report;
    for (std::size_t s = 0; s < samples; ++s) {
        const Configuration x = rng.next();
        ++report.samples_checked;
        const std::int64_t m = rho * n_steps;
        Pattern<Cell> cur = zeta_window(x, -H - m, H + m, -V - m, V + m).to_pattern();
        Configuration fx = x;
        for (std::int64_t t = 1; t <= n_steps; ++t) {
            cur = ca_extend(g, cur);
            fx = step(f, fx);
            const std::int64_t mt = rho * (n_steps - t);
            const Pattern<Cell> expect = zeta_window(fx, -H - mt, H + mt, -V - mt, V + mt).to_pattern();
            if (cur != expect) {
                report.passed = false;
                report.witness = x;
                report.failed_step = t;
                for (std::size_t a = 1; a <= cur.width(); ++a) {
                    for (std::size_t b = 1; b <= cur.height(); ++b) {
                        if (cur(a, b) != expect(a, b) && report.detail.empty()) {
                            report.detail = "cell (" + std::to_string(static_cast<std::int64_t>(a) - H - mt - 1) + "," +
                                            std::to_string(static_cast<std::int64_t>(b) - V - mt - 1) + ") differs at step " +
                                            std::to_string(t);
                        }
                    }
                }
                return report;
            }
        }
    }
    return report;
}

ConjugacyReport check_conjugacy(const SaRule& f, std::size_t samples, std::int64_t n_steps, std::uint64_t seed) {
    return check_conjugacy(f, build_ca_from_sa(f), samples, n_steps, seed);
}

const char* to_string(CheckKind kind) {
    return kind == CheckKind::Invariance ? "INVARIANCE" : "COLUMN_PRESERVATION";
}

const char* to_string(Verdict v) { return v == Verdict::IsSa ? "IS_SA" : "NOT_SA"; }

namespace {

void require_binary_plane(const CaRule& g) {
    if (g.dim() != 2 || g.states() != 2) throw InvalidArgument("SA decision needs a binary CA of dimension 2");
}

std::uint64_t column_half(std::int64_t rho) {
    return saturating_pow(static_cast<std::uint64_t>(2 * rho + 2), static_cast<std::uint64_t>(2 * rho));
}

std::uint64_t invariance_count(std::int64_t rho) {
    return saturating_pow(static_cast<std::uint64_t>(2 * rho + 3), static_cast<std::uint64_t>(2 * rho + 1));
}

bool invariance_violated(const CaRule& g, const StaircasePattern& w) {
    const Pattern<Cell> out = ca_extend(g, w.to_pattern());
    return out(1, 1) == 0 && out(1, 2) == 1;
}

bool column_violated(const CaRule& g, const StaircasePattern& w) {
    const Cell central = w.tops[w.width() / 2] == 0 ? 0 : 1;
    return g.apply(w.to_pattern()) != central;
}

template <class Window, class Violated>
CheckResult run_check(CheckKind kind, std::uint64_t count, Window&& window_at, Violated&& violated, bool parallel) {
    constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> best{kNone};
    const auto total = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
    for (std::int64_t i = 0; i < total; ++i) {
        const auto idx = static_cast<std::uint64_t>(i);
        if (idx > best.load(std::memory_order_relaxed)) continue;
        if (violated(window_at(idx))) {
            std::uint64_t cur = best.load();
            while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
            }
        }
    }
    CheckResult result;
    result.windows_checked = count;
    if (best.load() != kNone) {
        result.passed = false;
        result.witness = CheckWitness{kind, best.load(), window_at(best.load())};
    }
    return result;
}

CheckResult invariance_impl(const CaRule& g, std::uint64_t budget, bool parallel) {
    require_binary_plane(g);
    const std::int64_t rho = g.radius();
    const std::uint64_t count = invariance_count(rho);
    if (count > budget) {
        throw BudgetError("invariance check needs " + std::to_string(count) + " windows, budget " + std::to_string(budget));
    }
    return run_check(
        CheckKind::Invariance, count, [rho](std::uint64_t idx) { return invariance_window(rho, idx); },
        [&g](const StaircasePattern& w) { return invariance_violated(g, w); }, parallel);
}

CheckResult column_impl(const CaRule& g, std::uint64_t budget, bool parallel) {
    require_binary_plane(g);
    const std::int64_t rho = g.radius();
    const std::uint64_t half = column_half(rho);
    if (half > budget / 2) {
        throw BudgetError("column check needs " + std::to_string(2 * half) + " windows, budget " + std::to_string(budget));
    }
    return run_check(
        CheckKind::ColumnPreservation, 2 * half, [rho](std::uint64_t idx) { return column_window(rho, idx); },
        [&g](const StaircasePattern& w) { return column_violated(g, w); }, parallel);
}

}  // namespace

StaircasePattern invariance_window(std::int64_t rho, std::uint64_t index) {
    return StaircaseSpace(static_cast<std::size_t>(2 * rho + 1), static_cast<std::size_t>(2 * rho + 2)).at(index);
}

StaircasePattern column_window(std::int64_t rho, std::uint64_t index) {
    const auto side = static_cast<std::size_t>(2 * rho + 1);
    const std::uint64_t half = column_half(rho);
    if (index >= 2 * half) throw InvalidArgument("column window index out of range");
    const std::uint64_t central = index / half;
    std::uint64_t rest = index % half;
    StaircasePattern w{side, std::vector<std::uint32_t>(side, 0)};
    const std::uint64_t base = side + 1;
    for (std::size_t k = side; k-- > 0;) {
        if (k == side / 2) {
            w.tops[k] = central ? static_cast<std::uint32_t>(side) : 0;
            continue;
        }
        w.tops[k] = static_cast<std::uint32_t>(rest % base);
        rest /= base;
    }
    return w;
}

CheckResult check_invariance(const CaRule& g, std::uint64_t budget) { return invariance_impl(g, budget, true); }
CheckResult check_invariance_serial(const CaRule& g, std::uint64_t budget) { return invariance_impl(g, budget, false); }
CheckResult check_column_preservation(const CaRule& g, std::uint64_t budget) { return column_impl(g, budget, true); }
CheckResult check_column_preservation_serial(const CaRule& g, std::uint64_t budget) {
    return column_impl(g, budget, false);
}

bool replay_witness(const CaRule& g, const CheckWitness& w) {
    require_binary_plane(g);
    if (w.kind == CheckKind::Invariance) return invariance_violated(g, w.window);
    return column_violated(g, w.window);
}

SaRule extract_sa(const CaRule& g) {
    require_binary_plane(g);
    const std::int64_t rho = g.radius();
    auto fn = [g, rho](const Range& R) {
        const Configuration x = realize_range(R);
        const Pattern<Cell> out = ca_extend(g, zeta_window(x, -rho, rho, -2 * rho, 2 * rho + 1).to_pattern());
        const std::vector<Cell> column(out.cells().begin(), out.cells().end());
        const auto top = zeta_decode_column(column, -rho);
        if (!top || top->raw() < -rho || top->raw() > rho) {
            throw Error("CA '" + g.name() + "' does not act as a sand automaton on this range");
        }
        return static_cast<int>(top->raw());
    };
    return SaRule::computed(1, 2 * rho, fn, "extracted(" + g.name() + ")");
}

DecisionReport decide_sa(const CaRule& g, bool extract, std::uint64_t budget) {
    DecisionReport report;
    const CheckResult inv = check_invariance(g, budget);
    report.invariance_windows = inv.windows_checked;
    if (!inv.passed) {
        report.verdict = Verdict::NotSa;
        report.witness = inv.witness;
        return report;
    }
    const CheckResult col = check_column_preservation(g, budget);
    report.column_windows = col.windows_checked;
    if (!col.passed) {
        report.verdict = Verdict::NotSa;
        report.witness = col.witness;
        return report;
    }
    if (extract) report.extracted = extract_sa(g);
    return report;
}

}  // namespace sandlab
