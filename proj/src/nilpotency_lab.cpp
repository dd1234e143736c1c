#include "sandlab/nilpotency_lab.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "sandlab/metric.hpp"
#include "sandlab/sa_engine.hpp"
#include "sandlab/sampling.hpp"

namespace sandlab {

SpreadingCa::SpreadingCa(CaRule g) : g_(std::move(g)) {
    if (g_.dim() != 1) throw InvalidArgument("spreading CA must be one-dimensional");
    if (g_.radius() < 1) throw InvalidArgument("spreading CA radius must be >= 1");
    const StateReport states = find_spreading_states(g_);
    if (std::find(states.spreading.begin(), states.spreading.end(), 0) == states.spreading.end()) {
        throw InvalidArgument("state 0 is not spreading for rule '" + g_.name() + "'");
    }
}

CaLine CaLine::make(std::int64_t origin, std::vector<Cell> cells) {
    std::size_t first = 0;
    while (first < cells.size() && cells[first] == 0) ++first;
    if (first == cells.size()) return {};
    std::size_t last = cells.size();
    while (cells[last - 1] == 0) --last;
    return {origin + static_cast<std::int64_t>(first),
            std::vector<Cell>(cells.begin() + static_cast<std::ptrdiff_t>(first),
                              cells.begin() + static_cast<std::ptrdiff_t>(last))};
}

Cell CaLine::at(std::int64_t i) const {
    const std::int64_t k = i - origin;
    if (k < 0 || k >= static_cast<std::int64_t>(cells.size())) return 0;
    return cells[static_cast<std::size_t>(k)];
}

CaLine ca_step_line(const CaRule& g, const CaLine& y) {
    if (y.cells.empty()) return y;
    const std::int64_t s = g.radius();
    const std::int64_t lo = y.origin - s;
    const std::int64_t hi = y.origin + static_cast<std::int64_t>(y.cells.size()) - 1 + s;
    std::vector<Cell> out(static_cast<std::size_t>(hi - lo + 1));
    Pattern<Cell> nb(g.side(), 0);
    for (std::int64_t i = lo; i <= hi; ++i) {
        for (std::int64_t o = -s; o <= s; ++o) nb(static_cast<std::size_t>(o + s + 1)) = y.at(i + o);
        out[static_cast<std::size_t>(i - lo)] = g.apply(nb);
    }
    return CaLine::make(lo, std::move(out));
}

Configuration xi_encode(const CaLine& y, std::int64_t c) {
    const Height bg(c);
    if (y.cells.empty()) return Configuration::constant(bg);
    std::vector<Height> core;
    core.reserve(2 * y.cells.size());
    for (std::size_t k = 0; k < y.cells.size(); ++k) {
        if (k) core.push_back(bg);
        core.push_back(bg.plus(y.cells[k]));
    }
    return Configuration::line(bg, 2 * y.origin, std::move(core));
}

Configuration xi_encode_periodic(const std::vector<Cell>& word, std::int64_t c) {
    if (word.empty()) throw InvalidArgument("empty period word");
    std::vector<Height> cells;
    cells.reserve(2 * word.size());
    for (Cell s : word) {
        cells.push_back(Height(c).plus(s));
        cells.push_back(Height(c));
    }
    return Configuration::periodic(std::move(cells));
}

namespace {

std::int64_t reduction_radius(const SpreadingCa& S) { return std::max<std::int64_t>(2 * S.radius(), S.max_state()); }

bool in_alphabet(Height h, int q) { return h.is_finite() && h.raw() >= 0 && h.raw() < q; }

int reduction_variation(const CaRule& g, std::int64_t s, int q, const Range& R) {
    bool markers_or_states = true;
    for (std::int64_t o = -(2 * s - 1); o <= 2 * s - 1; o += 2) {
        if (!in_alphabet(R.at(o), q)) {
            markers_or_states = false;
            break;
        }
    }
    if (markers_or_states) return 0;

    const Height a = R.at(-(2 * s - 1));
    bool simulate = a.is_finite() && a.raw() < 0 && -a.raw() < q;
    for (std::int64_t o = -(2 * s - 1); simulate && o <= 2 * s - 1; o += 2) simulate = R.at(o) == a;
    if (simulate) {
        Pattern<Cell> nb(g.side(), 0);
        for (std::int64_t k = -s; k <= s && simulate; ++k) {
            if (k == 0) {
                nb(static_cast<std::size_t>(s + 1)) = static_cast<Cell>(-a.raw());
                continue;
            }
            const Height e = R.at(2 * k);
            if (!e.is_finite() || e.raw() - a.raw() < 0 || e.raw() - a.raw() >= q) {
                simulate = false;
            } else {
                nb(static_cast<std::size_t>(k + s + 1)) = static_cast<Cell>(e.raw() - a.raw());
            }
        }
        if (simulate) return g.apply(nb) + static_cast<int>(a.raw());
    }

    for (const Height& h : R.entries()) {
        if (h < Height{0}) return -1;
    }
    return 0;
}

}  // namespace

SaRule build_reduction(const SpreadingCa& S) {
    const std::int64_t r = reduction_radius(S);
    const CaRule g = S.rule();
    const std::int64_t s = S.radius();
    const int q = S.states();
    return SaRule::native(
        SaRule::NativeKind::Reduction, 1, r, [g, s, q](const Range& R) { return reduction_variation(g, s, q, R); },
        "reduction(" + g.name() + ")");
}

RuleProgram reduction_program(const SpreadingCa& S, std::size_t max_cases) {
    const std::int64_t r = reduction_radius(S);
    const std::int64_t s = S.radius();
    const int q = S.states();
    const std::uint64_t combos = saturating_pow(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(2 * s));
    if (combos == UINT64_MAX || combos * static_cast<std::uint64_t>(q - 1) > max_cases) {
        throw BudgetError("reduction program would need more than " + std::to_string(max_cases) + " cases");
    }
    RuleProgram prog;
    prog.dim = 1;
    prog.radius = r;
    auto atom = [](std::int64_t o, Cmp cmp, std::int64_t v) { return Condition::make_atom({{o, 0}, cmp, Height(v)}); };

    std::vector<Condition> alphabet;
    for (std::int64_t o = -(2 * s - 1); o <= 2 * s - 1; o += 2) {
        alphabet.push_back(atom(o, Cmp::GreaterEqual, 0));
        alphabet.push_back(atom(o, Cmp::LessEqual, q - 1));
    }
    prog.cases.push_back({Condition::make_and(std::move(alphabet)), 0});

    for (int state = 1; state < q; ++state) {
        const std::int64_t a = -state;
        for (std::uint64_t combo = 0; combo < combos; ++combo) {
            std::vector<Condition> parts;
            for (std::int64_t o = -(2 * s - 1); o <= 2 * s - 1; o += 2) parts.push_back(atom(o, Cmp::Equal, a));
            Pattern<Cell> nb(S.rule().side(), 0);
            nb(static_cast<std::size_t>(s + 1)) = static_cast<Cell>(state);
            std::uint64_t rest = combo;
            for (std::int64_t k = -s; k <= s; ++k) {
                if (k == 0) continue;
                const auto y = static_cast<std::int64_t>(rest % static_cast<std::uint64_t>(q));
                rest /= static_cast<std::uint64_t>(q);
                nb(static_cast<std::size_t>(k + s + 1)) = static_cast<Cell>(y);
                parts.push_back(atom(2 * k, Cmp::Equal, y + a));
            }
            prog.cases.push_back({Condition::make_and(std::move(parts)), S.rule().apply(nb) + static_cast<int>(a)});
        }
    }

    std::vector<Condition> negative;
    for (const Point& o : range_offsets(1, r)) negative.push_back(atom(o[0], Cmp::Less, 0));
    prog.cases.push_back({Condition::make_or(std::move(negative)), -1});
    prog.default_output = 0;
    return prog;
}

const char* to_string(FlattenReport::Outcome o) {
    switch (o) {
        case FlattenReport::Outcome::Converged: return "CONVERGED";
        case FlattenReport::Outcome::NotConverged: return "NOT_CONVERGED";
        case FlattenReport::Outcome::DivergedWindow: return "DIVERGED_WINDOW";
    }
    return "?";
}

FlattenReport detect_flatten(const SaRule& f, const Configuration& x, std::int64_t budget,
                             std::size_t max_core_cells) {
    if (!x.is_bounded()) throw InvalidArgument("flattening is only defined for bounded configurations");
    if (budget < 0) throw InvalidArgument("step budget must be >= 0");
    constexpr std::int64_t kMaxWindow = 64;
    std::vector<std::int64_t> last_change(kMaxWindow + 1, -1);
    FlattenReport report;
    Configuration cur = x;
    for (std::int64_t t = 0; t <= budget; ++t) {
        Configuration next = step(f, cur);
        if (cur.is_constant() && next == cur) {
            report.outcome = FlattenReport::Outcome::Converged;
            report.limit = cur.constant_value();
            report.steps = t;
            return report;
        }
        if (next.cells().size() > max_core_cells) {
            report.outcome = FlattenReport::Outcome::DivergedWindow;
            report.steps = t + 1;
            report.note = "core grew past " + std::to_string(max_core_cells) + " cells";
            return report;
        }
        const Distance d = dist_ground(cur, next);
        if (d.exponent) {
            for (std::int64_t w = std::min(*d.exponent, kMaxWindow + 1); w <= kMaxWindow; ++w) last_change[w] = t + 1;
        }
        cur = std::move(next);
    }
    report.outcome = FlattenReport::Outcome::NotConverged;
    report.steps = budget;
    for (std::int64_t w = 0; w <= kMaxWindow && last_change[w] <= budget / 2; ++w) report.stable_window = w;
    report.note = "largest cylinder stable over the second half: " + std::to_string(report.stable_window);
    return report;
}

const char* to_string(PeriodReport::Outcome o) {
    switch (o) {
        case PeriodReport::Outcome::Periodic: return "PERIODIC";
        case PeriodReport::Outcome::Refuted: return "REFUTED";
        case PeriodReport::Outcome::Unknown: return "UNKNOWN";
    }
    return "?";
}

std::optional<std::int64_t> equal_modulo_raise(const Configuration& y, const Configuration& z) {
    const auto ry = y.finite_range();
    const auto rz = z.finite_range();
    if (!ry || !rz) {
        if (y == z) return 0;
        return std::nullopt;
    }
    const std::int64_t v = rz->first - ry->first;
    if (raise(y, v) == z) return v;
    return std::nullopt;
}

std::vector<std::int8_t> power_table(const SaRule& f, std::int64_t n, std::int64_t radius,
                                     std::uint64_t table_budget) {
    if (f.dim() != 1) throw DimensionError("power tables are built for dim-1 rules");
    const std::uint64_t count = range_count(1, radius);
    if (count > table_budget) throw BudgetError("power table of " + std::to_string(count) + " entries exceeds budget");
    if (n == 0) return std::vector<std::int8_t>(count, 0);
    const SaRule fn = widen_rule(iterate_local_rule(f, n, table_budget), radius).to_dense(table_budget);
    return {fn.table().begin(), fn.table().end()};
}

namespace {

bool orbit_pairwise_distinct(const SaRule& f, const Configuration& x, std::int64_t length) {
    std::vector<Configuration> orbit{x};
    for (std::int64_t t = 1; t <= length; ++t) orbit.push_back(step(f, orbit.back()));
    for (std::size_t a = 0; a < orbit.size(); ++a) {
        for (std::size_t b = a + 1; b < orbit.size(); ++b) {
            if (equal_modulo_raise(orbit[a], orbit[b])) return false;
        }
    }
    return true;
}

}  // namespace

PeriodReport find_ultimate_period(const SaRule& f, std::int64_t max_sum, std::size_t sample_budget, std::uint64_t seed,
                                  std::uint64_t table_budget) {
    if (f.dim() != 1) throw DimensionError("period search is implemented for dim-1 rules");
    if (max_sum < 1) throw InvalidArgument("max_sum must be >= 1");
    PeriodReport report;
    const std::int64_t exhaustive = std::min<std::int64_t>(max_sum, 2);
    const std::int64_t radius = (2 * exhaustive - 1) * f.radius();
    bool exhaustive_done = false;
    if (range_count(1, radius) <= table_budget) {
        std::vector<std::vector<std::int8_t>> tables;
        for (std::int64_t n = 0; n <= exhaustive; ++n) tables.push_back(power_table(f, n, radius, table_budget));
        const std::uint64_t flat = range_index(Range(1, radius));
        for (std::int64_t sum = 1; sum <= exhaustive; ++sum) {
            for (std::int64_t n = 0; n < sum; ++n) {
                const std::int64_t p = sum - n;
                const auto& lo = tables[static_cast<std::size_t>(n)];
                const auto& hi = tables[static_cast<std::size_t>(sum)];
                const int drift = hi[flat] - lo[flat];
                ++report.pairs_compared;
                std::optional<std::uint64_t> diff;
                for (std::uint64_t idx = 0; idx < lo.size(); ++idx) {
                    if (hi[idx] - lo[idx] != drift) {
                        diff = idx;
                        break;
                    }
                }
                if (!diff) {
                    report.outcome = PeriodReport::Outcome::Periodic;
                    report.n = n;
                    report.p = p;
                    report.drift = drift;
                    report.bound = sum;
                    report.detail = "rule tables agree at radius " + std::to_string(radius);
                    return report;
                }
                // A table difference must be a genuine orbit difference.
                const Configuration x = realize_range(range_from_index(1, radius, *diff));
                const Height a = raise(step_n(f, x, n), drift).at(0);
                const Height b = step_n(f, x, sum).at(0);
                if (a == b) throw Error("iterated rule tables disagree with direct simulation");
            }
        }
        exhaustive_done = true;
    }

    SampleOptions opts;
    opts.p_two_backgrounds = 0.6;
    opts.p_infinite = 0.05;
    ConfigSampler rng(seed, opts);
    std::vector<Configuration> candidates;
    for (std::int64_t k = 1; k <= (max_sum + 2) * std::max<std::int64_t>(f.radius(), 1) + 1; ++k) {
        candidates.push_back(Configuration::line(Height{0}, Height{k}, 0, {}));
        candidates.push_back(Configuration::line(Height{k}, Height{0}, 0, {}));
    }
    for (std::size_t k = 0; k < sample_budget; ++k) {
        if (k < candidates.size()) {
            if (orbit_pairwise_distinct(f, candidates[k], max_sum)) {
                report.witness = candidates[k];
                break;
            }
            continue;
        }
        Configuration x = rng.next();
        if (orbit_pairwise_distinct(f, x, max_sum)) {
            report.witness = std::move(x);
            break;
        }
    }
    if (report.witness) {
        report.outcome = PeriodReport::Outcome::Refuted;
        report.a = 0;
        report.b = max_sum;
        report.bound = max_sum;
        report.detail = "orbit positions 0.." + std::to_string(max_sum) + " pairwise distinct modulo raising";
        return report;
    }
    report.outcome = PeriodReport::Outcome::Unknown;
    report.bound = exhaustive_done ? exhaustive : 0;
    report.detail = exhaustive_done ? "no periodic pair up to " + std::to_string(exhaustive) + ", no sampled refutation"
                                    : "rule tables over budget, no sampled refutation";
    return report;
}

bool replay_refutation(const SaRule& f, const PeriodReport& report) {
    if (report.outcome != PeriodReport::Outcome::Refuted || !report.witness) return false;
    return orbit_pairwise_distinct(f, *report.witness, report.b);
}

const char* to_string(CaProbeReport::Verdict v) {
    return v == CaProbeReport::Verdict::No ? "NO" : "CONSISTENT_WITH_NILPOTENT";
}

CaProbeReport probe_ca_nilpotency(const SpreadingCa& S, std::size_t max_support, std::int64_t max_steps,
                                  std::uint64_t budget) {
    const auto q = static_cast<std::uint64_t>(S.states());
    std::uint64_t total = 0;
    for (std::size_t len = 1; len <= max_support; ++len) total += saturating_pow(q, len);
    total += saturating_pow(q, max_support);
    if (total > budget) throw BudgetError("nilpotency probe needs " + std::to_string(total) + " configurations");
    const CaRule& g = S.rule();
    CaProbeReport report;

    auto word_at = [&](std::uint64_t idx, std::size_t len) {
        std::vector<Cell> w(len);
        for (std::size_t k = len; k-- > 0;) {
            w[k] = static_cast<Cell>(idx % q);
            idx /= q;
        }
        return w;
    };

    // Finite support: a cycle that avoids 0 at the origin refutes nilpotency.
    const std::uint64_t finite_count = saturating_pow(q, max_support);
    for (std::uint64_t idx = 0; idx < finite_count; ++idx) {
        const std::vector<Cell> w = word_at(idx, max_support);
        CaLine y = CaLine::make(0, w);
        std::map<std::pair<std::int64_t, std::vector<Cell>>, std::int64_t> seen;
        std::vector<bool> zero_at_center;
        ++report.configs_tested;
        for (std::int64_t t = 0; t <= max_steps; ++t) {
            const auto key = std::make_pair(y.origin, y.cells);
            if (auto it = seen.find(key); it != seen.end()) {
                const bool hits = std::any_of(zero_at_center.begin() + it->second, zero_at_center.end(),
                                              [](bool b) { return b; });
                if (!hits) {
                    report.verdict = CaProbeReport::Verdict::No;
                    report.witness = w;
                    return report;
                }
                break;
            }
            seen.emplace(key, t);
            zero_at_center.push_back(y.at(0) == 0);
            y = ca_step_line(g, y);
        }
    }

    for (std::size_t len = 1; len <= max_support; ++len) {
        const std::uint64_t count = saturating_pow(q, len);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            const std::vector<Cell> w = word_at(idx, len);
            std::vector<Cell> y = w;
            std::map<std::vector<Cell>, std::int64_t> seen;
            std::vector<bool> zero_at_center;
            ++report.configs_tested;
            for (std::int64_t t = 0; t <= max_steps; ++t) {
                if (auto it = seen.find(y); it != seen.end()) {
                    const bool hits = std::any_of(zero_at_center.begin() + it->second, zero_at_center.end(),
                                                  [](bool b) { return b; });
                    if (!hits) {
                        report.verdict = CaProbeReport::Verdict::No;
                        report.witness = w;
                        report.witness_periodic = true;
                        return report;
                    }
                    break;
                }
                seen.emplace(y, t);
                zero_at_center.push_back(y[0] == 0);
                y = ca_step_cyclic(g, y);
            }
        }
    }
    return report;
}

RepairScenario invalid_repair_scenario(const SpreadingCa& S, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
    const int q = S.states();
    RepairScenario sc;
    sc.c = uniform(-3, 3);
    std::vector<Cell> states(static_cast<std::size_t>(uniform(1, 5)));
    for (Cell& s : states) s = static_cast<Cell>(uniform(0, q - 1));

    std::vector<Height> core;
    const auto left = static_cast<std::size_t>(uniform(1, 4));
    const auto right = static_cast<std::size_t>(uniform(1, 4));
    for (std::size_t k = 0; k < left; ++k) core.push_back(Height(sc.c + uniform(0, q + 2)));
    const auto anchor = static_cast<std::int64_t>(core.size());
    core.push_back(Height(sc.c));
    for (Cell s : states) {
        core.push_back(Height(sc.c + s));
        core.push_back(Height(sc.c));
    }
    for (std::size_t k = 0; k < right; ++k) core.push_back(Height(sc.c + uniform(0, q + 2)));
    sc.anchor = anchor;
    sc.x = Configuration::line(Height(sc.c), 0, std::move(core));
    return sc;
}

std::pair<std::int64_t, std::int64_t> maximal_valid_sequence(const Configuration& x, std::int64_t anchor, int states,
                                                             std::int64_t limit) {
    const Height m = x.at(anchor);
    auto valid_state = [&](std::int64_t i) {
        const Height h = x.at(i);
        return h.is_finite() && m.is_finite() && h.raw() - m.raw() >= 0 && h.raw() - m.raw() < states;
    };
    std::int64_t j = anchor;
    while (j + 2 <= anchor + limit && x.at(j + 2) == m && valid_state(j + 1)) j += 2;
    std::int64_t i = anchor;
    while (i - 2 >= anchor - limit && x.at(i - 2) == m && valid_state(i - 1)) i -= 2;
    return {i, j};
}

bool is_valid_encoding(const Configuration& x, std::int64_t anchor, int states) {
    const Height m = x.at(anchor);
    if (!m.is_finite()) return false;
    std::int64_t lo = anchor, hi = anchor;
    if (x.is_periodic()) {
        if (x.period() % 2 != 0 && !x.is_constant()) return false;
        hi = anchor + 2 * static_cast<std::int64_t>(x.period());
    } else {
        if (x.left_bg() != m || x.right_bg() != m) return false;
        if (!x.is_constant()) {
            lo = std::min(lo, x.origin());
            hi = std::max(hi, x.origin() + static_cast<std::int64_t>(x.core_width()));
        }
    }
    for (std::int64_t i = lo; i <= hi; ++i) {
        const Height h = x.at(i);
        if ((i - anchor) % 2 == 0) {
            if (h != m) return false;
        } else if (!h.is_finite() || h.raw() - m.raw() < 0 || h.raw() - m.raw() >= states) {
            return false;
        }
    }
    return true;
}

RepairTrace trace_repair(const SaRule& f, const RepairScenario& sc, int states, std::int64_t steps) {
    RepairTrace trace;
    Configuration x = sc.x;
    const std::int64_t limit = static_cast<std::int64_t>(x.core_width()) + 2 * steps * f.radius() + 16;
    for (std::int64_t t = 0; t <= steps; ++t) {
        const auto seq = maximal_valid_sequence(x, sc.anchor, states, limit);
        if (!trace.valid.empty()) {
            const auto& prev = trace.valid.back();
            if (seq.first > prev.first || seq.second < prev.second) trace.never_shrinks = false;
        }
        trace.valid.push_back(seq);
        if (trace.valid_at < 0 && is_valid_encoding(x, sc.anchor, states)) trace.valid_at = t;
        if (t < steps) x = step(f, x);
    }
    return trace;
}

}  // namespace sandlab
