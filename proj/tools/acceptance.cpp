// Acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sandlab/bridge.hpp"
#include "sandlab/metric.hpp"
#include "sandlab/nilpotency_lab.hpp"
#include "sandlab/sa_engine.hpp"
#include "sandlab/sampling.hpp"
#include "sandlab/toolkit_io.hpp"

using namespace sandlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double limit_ms;
    std::function<Outcome()> run;
};

// Records the first failure.
struct Checker {
    Outcome out;
    void expect(bool cond, const std::string& what) {
        if (!cond && out.ok) {
            out.ok = false;
            out.detail = what;
        }
    }
};

const SaRule N = make_collapse(1, 1);

SaRule random_table_rule(std::mt19937_64& rng, std::int64_t r = 1) {
    std::vector<std::int8_t> table(range_count(1, r));
    std::uniform_int_distribution<int> d(static_cast<int>(-r), static_cast<int>(r));
    for (auto& v : table) v = static_cast<std::int8_t>(d(rng));
    return SaRule::dense(1, r, std::move(table), "random");
}

std::vector<Height> cells_of(const Pattern<Height>& p) { return {p.cells().begin(), p.cells().end()}; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome figure_reproduction() {
    Checker c;
    const auto x = Configuration::line(Height{0}, -3, {5, -2, 1, 4, 2, 2, 5});
    const std::vector<Height> top{1, Height::minus_inf(), -3, 4, -2, -2, 1};
    const std::vector<Height> ground{Height::plus_inf(), -2, 1, Height::plus_inf(), 2, 2, Height::plus_inf()};
    c.expect(cells_of(top_cylinder(x, {0, 0}, 3).entries) == top, "top cylinder differs");
    c.expect(cells_of(ground_cylinder(x, {0, 0}, 3).entries) == ground, "ground cylinder differs");
    if (c.out.ok) c.out.detail = "top and ground cylinders exact";
    return c.out;
}

Outcome perfectness() {
    Checker c;
    const auto zero = Configuration::constant(Height{0});
    int checked = 0;
    for (std::int64_t n = 0; n <= 12; ++n) {
        for (std::int64_t l : {n, -n}) {
            const auto y = Configuration::line(Height{0}, l, {Height{1}});
            c.expect(dist_ground(zero, y) == Distance::pow2(n), "flip at " + std::to_string(l));
            ++checked;
        }
    }
    if (c.out.ok) c.out.detail = std::to_string(checked) + " flips at distance 2^-|l|";
    return c.out;
}

Outcome conjugacy() {
    Checker c;
    std::vector<SaRule> rules = {N, make_collapse(2, 1), make_raise(), make_identity()};
    std::mt19937_64 rng(101);
    for (int k = 0; k < 20; ++k) rules.push_back(random_table_rule(rng));
    std::size_t samples = 0;
    for (std::size_t k = 0; k < rules.size(); ++k) {
        const auto rep = check_conjugacy(rules[k], 200, 3, 1000 + k);
        samples += rep.samples_checked;
        c.expect(rep.passed, "rule #" + std::to_string(k) + ": " + rep.detail);
    }
    if (c.out.ok) c.out.detail = std::to_string(rules.size()) + " rules, " + std::to_string(samples) + " orbits, 3 steps";
    return c.out;
}

Outcome decider() {
    Checker c;
    const CaRule bridge = build_ca_from_sa(N);
    const auto rep = decide_sa(bridge);
    c.expect(rep.verdict == Verdict::IsSa, "bridge(N) not IS_SA");
    c.expect(rep.invariance_windows == 16807, "invariance windows " + std::to_string(rep.invariance_windows));
    c.expect(rep.column_windows == 2 * 6 * 6 * 6 * 6, "column windows " + std::to_string(rep.column_windows));

    const CaRule one = make_ca_constant(2, 2, 2, 1);
    const auto bad = decide_sa(one);
    c.expect(bad.verdict == Verdict::NotSa && bad.witness && replay_witness(one, *bad.witness),
             "constant-1 CA: no replaying witness");

    // Dense table of the bridge with one entry flipped.
    const CaRule table = bridge.materialize();
    const auto flat_low = StaircasePattern{5, {1, 1, 1, 1, 1}}.to_pattern();
    const std::uint64_t idx = table.index_of(flat_low);
    const CaRule corrupted = table.with_entry(idx, static_cast<Cell>(1 - table.apply(flat_low)));
    const auto cr = decide_sa(corrupted);
    c.expect(cr.verdict == Verdict::NotSa && cr.witness && replay_witness(corrupted, *cr.witness) &&
                 !replay_witness(table, *cr.witness),
             "corrupted table: no replaying witness");
    if (c.out.ok) {
        c.out.detail = "IS_SA over 16807 + 2592 windows; constant-1 " + std::string(to_string(bad.witness->kind)) +
                       " witness; corrupted entry " + std::to_string(idx) + " of " +
                       std::to_string(table.neighborhood_count()) + " caught by " + to_string(cr.witness->kind);
    }
    return c.out;
}

Outcome collapse_nilpotency() {
    Checker c;
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> width(1, 16), height(-8, 8);
    std::int64_t worst = 0;
    for (int k = 0; k < 100; ++k) {
        std::vector<Height> core(static_cast<std::size_t>(width(rng)));
        std::int64_t mn = 8, mx = -8;
        for (auto& h : core) {
            const int v = height(rng);
            h = Height(v);
            mn = std::min<std::int64_t>(mn, v);
            mx = std::max<std::int64_t>(mx, v);
        }
        const auto w = static_cast<std::int64_t>(core.size());
        const auto x = Configuration::line(Height(mn), 0, core);
        const std::int64_t bound = 10 * w * (mx - mn + 1);
        const auto rep = detect_flatten(N, x, bound);
        c.expect(rep.outcome == FlattenReport::Outcome::Converged && rep.limit == Height(mn) && rep.steps <= bound,
                 "config #" + std::to_string(k) + " " + to_string(x) + ": " + to_string(rep.outcome));
        worst = std::max(worst, rep.steps);
    }
    if (c.out.ok) c.out.detail = "100 configurations converged to their minimum, slowest after " + std::to_string(worst) + " steps";
    return c.out;
}

CaRule random_spreading(std::mt19937_64& rng, int states) {
    std::vector<Cell> table(static_cast<std::size_t>(states * states * states));
    std::uniform_int_distribution<int> d(0, states - 1);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        std::size_t rest = idx;
        bool zero = false;
        for (int k = 0; k < 3; ++k) {
            zero = zero || rest % static_cast<std::size_t>(states) == 0;
            rest /= static_cast<std::size_t>(states);
        }
        table[idx] = zero ? 0 : static_cast<Cell>(d(rng));
    }
    return CaRule::dense(1, 1, states, std::move(table), "spreading");
}

CaLine random_line(std::mt19937_64& rng, int states) {
    std::vector<Cell> cells(rng() % 11);
    for (auto& v : cells) v = static_cast<Cell>(rng() % static_cast<std::uint64_t>(states));
    return CaLine::make(static_cast<std::int64_t>(rng() % 9) - 4, std::move(cells));
}

Outcome reduction_fidelity() {
    Checker c;
    std::mt19937_64 rng(77);
    const SpreadingCa zero(make_ca_constant(1, 1, 2, 0));
    const SaRule F = build_reduction(zero);
    c.expect(F.radius() == 2, "radius of the constant-0 reduction");
    int encoded = 0, invalid = 0;
    while (encoded < 50) {
        const std::int64_t c0 = static_cast<std::int64_t>(rng() % 7) - 3;
        const auto x = xi_encode(random_line(rng, 2), c0);
        const auto rep = detect_flatten(F, x, 10000);
        c.expect(rep.outcome == FlattenReport::Outcome::Converged && rep.limit == Height(c0), "encoded " + to_string(x));
        ++encoded;
    }
    while (invalid < 50) {
        const std::int64_t c0 = static_cast<std::int64_t>(rng() % 7) - 3;
        std::vector<Height> core(2 + rng() % 11);
        for (auto& h : core) h = Height(c0 + static_cast<std::int64_t>(rng() % 4));
        const auto x = Configuration::line(Height(c0), 0, core);
        if (x.is_constant() || is_valid_encoding(x, -1, 2) || is_valid_encoding(x, -2, 2)) continue;
        const auto rep = detect_flatten(F, x, 10000);
        c.expect(rep.outcome == FlattenReport::Outcome::Converged && rep.limit == Height(c0), "invalid " + to_string(x));
        ++invalid;
    }

    const SpreadingCa mn(make_ca_min(1, 1, 2));
    const SaRule Fm = build_reduction(mn);
    const auto ones = xi_encode_periodic({1});
    Configuration y = ones;
    bool fixed = true;
    for (int t = 0; t < 1000 && fixed; ++t) {
        y = step(Fm, y);
        fixed = y == ones;
    }
    c.expect(fixed, "encoding of all-1 moved under the min-rule reduction");

    for (int k = 0; k < 100; ++k) {
        const SpreadingCa S(random_spreading(rng, 3));
        const SaRule R = build_reduction(S);
        CaLine line = random_line(rng, 3);
        Configuration x = xi_encode(line);
        for (int t = 0; t < 5; ++t) {
            line = ca_step_line(S.rule(), line);
            x = step(R, x);
            c.expect(x == xi_encode(line), "commutation fails for sample " + std::to_string(k));
        }
    }
    if (c.out.ok) c.out.detail = "50 encoded + 50 invalid flattened; all-1 fixed for 1000 steps; 100 x 5 commutations";
    return c.out;
}

Outcome oracle_equivalence() {
    Checker c;
    std::mt19937_64 rules_rng(5);
    std::vector<SaRule> rules = {N, make_collapse(2, 1), make_raise(), make_identity(1, 2)};
    for (int k = 0; k < 4; ++k) rules.push_back(random_table_rule(rules_rng));
    SampleOptions opts;
    opts.p_periodic = 0.15;
    ConfigSampler rng(19, opts);
    const std::int64_t m = 8;
    for (int k = 0; k < 500; ++k) {
        const auto x = rng.next();
        const auto& f = rules[static_cast<std::size_t>(k) % rules.size()];
        const std::int64_t n = rng.uniform(0, 3);
        const std::int64_t reach = n * f.radius();
        const auto fx = step_n(f, x, n);
        const auto out = oracle_step_window(f, window(x, -m - reach, m + reach), n);
        for (std::int64_t i = -m; i <= m; ++i) {
            c.expect(out(static_cast<std::size_t>(i + m + 1)) == fx.at(i), "triple #" + std::to_string(k));
        }
    }
    std::vector<SaRule> twice;
    for (const auto& f : rules) twice.push_back(iterate_local_rule(f, 2));
    int compared = 0;
    ConfigSampler rng2(20);
    while (compared < 200) {
        const auto& f = rules[static_cast<std::size_t>(compared) % rules.size()];
        const SaRule& f2 = twice[static_cast<std::size_t>(compared) % rules.size()];
        const auto x = rng2.next();
        const std::int64_t i = rng2.uniform(-4, 4);
        if (!x.at(i).is_finite()) continue;
        c.expect(step_n(f, x, 2).at(i) == x.at(i).plus(f2.apply(range_at(x, i, f2.radius()))),
                 "iterated rule #" + std::to_string(compared));
        ++compared;
    }
    if (c.out.ok) c.out.detail = "500 windowed orbits and 200 two-step rules agree";
    return c.out;
}

Outcome period_search() {
    Checker c;
    const auto id = find_ultimate_period(make_identity(), 3, 100);
    c.expect(id.outcome == PeriodReport::Outcome::Periodic && id.n == 0 && id.p == 1 && id.drift == 0, "identity");
    const auto up = find_ultimate_period(make_raise(), 3, 100);
    c.expect(up.outcome == PeriodReport::Outcome::Periodic && up.n == 0 && up.p == 1 && up.drift == 1, "raise");
    const auto n = find_ultimate_period(N, 3, 1000);
    c.expect(n.outcome == PeriodReport::Outcome::Refuted && replay_refutation(N, n), "collapse not refuted");
    if (c.out.ok) c.out.detail = "identity PERIODIC(0,1,0), raise PERIODIC(0,1,1), collapse REFUTED by " + to_string(*n.witness);
    return c.out;
}

Outcome non_expansivity() {
    Checker c;
    std::mt19937_64 rules_rng(9);
    std::vector<SaRule> rules = {N, make_collapse(2, 1), make_raise(), make_identity()};
    for (int k = 0; k < 3; ++k) rules.push_back(random_table_rule(rules_rng));
    ConfigSampler rng(31);
    int pairs = 0;
    for (const auto& f : rules) {
        for (std::int64_t k = 0; k <= 8; ++k) {
            const auto side = static_cast<std::size_t>(2 * k + 1);
            std::vector<Height> core_x(side + 2, Height::plus_inf()), core_y(side + 2, Height::plus_inf());
            core_x.front() = Height(rng.uniform(-3, 3));
            core_y.front() = Height(rng.uniform(4, 6));
            core_x.back() = Height(rng.uniform(-3, 3));
            auto x = Configuration::line(Height{0}, -k - 1, core_x);
            auto y = Configuration::line(Height{1}, -k - 1, core_y);
            for (int n = 0; n <= 100; ++n) {
                c.expect(dist_ground(x, y) < Distance::pow2(k), "k=" + std::to_string(k) + " n=" + std::to_string(n));
                x = step(f, x);
                y = step(f, y);
            }
            ++pairs;
        }
    }
    if (c.out.ok) c.out.detail = std::to_string(pairs) + " pairs stay within 2^-k for 100 steps";
    return c.out;
}

Outcome parser_and_formats() {
    Checker c;
    const fs::path data(SANDLAB_TEST_DATA);
    int rules = 0, configs = 0;
    for (const auto& e : fs::directory_iterator(data / "rules")) {
        const std::string t = slurp(e.path());
        c.expect(print_rule(parse_rule(t)) == t, "rule " + e.path().filename().string());
        ++rules;
    }
    for (const auto& e : fs::directory_iterator(data / "configs")) {
        const std::string t = slurp(e.path());
        c.expect(serialize_config(parse_config(t)) == t, "config " + e.path().filename().string());
        ++configs;
    }
    c.expect(rules >= 10 && configs >= 10, "golden corpus too small");

    std::mt19937_64 rng(4242);
    const std::string alphabet = "sarulev1dimkndcaseflt=>R[]-+0123456789,()!&|<>#inf \n\t";
    std::size_t accepted = 0;
    for (int k = 0; k < 100000; ++k) {
        std::string s(rng() % 80, ' ');
        for (char& ch : s) ch = k % 2 ? alphabet[rng() % alphabet.size()] : static_cast<char>(rng() & 0xff);
        try {
            if (k % 3 == 0) parse_rule(s);
            else if (k % 3 == 1) parse_config(s);
            else parse_carule(s);
            ++accepted;
        } catch (const ParseError&) {
        }
    }

    const std::string head = "sarule v1\ndim 1\nradius 1\n";
    const std::vector<std::pair<std::string, std::string>> positions = {
        {head + "case R[2] < 0 => -1\ndefault => 0\n", "4:8"},
        {head + "case R[1] < 0 => 2\ndefault => 0\n", "4:18"},
        {head + "case R[1] =< 0 => -1\n", "4:11"},
        {"sandcfg v1\ndim 1\nkind eventually-constant\nbg 0\norigin 0\nheights 1 x\n", "6:11"},
    };
    for (int round = 0; round < 2; ++round) {
        for (const auto& [text, where] : positions) {
            std::string got = "none";
            try {
                if (text.rfind("sarule", 0) == 0) parse_rule(text);
                else parse_config(text);
            } catch (const ParseError& e) {
                got = std::to_string(e.line()) + ":" + std::to_string(e.column());
            }
            c.expect(got == where, "error position " + got + ", expected " + where);
        }
    }
    if (c.out.ok) {
        c.out.detail = std::to_string(rules) + " rules and " + std::to_string(configs) +
                       " configs round-trip; 100000 fuzz inputs (" + std::to_string(accepted) + " accepted), no crash";
    }
    return c.out;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "figure reproduction", 1, figure_reproduction},
        {2, "perfectness distances", 10, perfectness},
        {3, "conjugacy", 10000, conjugacy},
        {4, "decider", 30000, decider},
        {5, "collapse nilpotency", 5000, collapse_nilpotency},
        {6, "reduction fidelity", 60000, reduction_fidelity},
        {7, "oracle equivalence", 30000, oracle_equivalence},
        {8, "period search", 60000, period_search},
        {9, "non-expansivity", 10000, non_expansivity},
        {10, "parser and formats", 30000, parser_and_formats},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        if (o.ok && ms > cr.limit_ms) {
            o.ok = false;
            o.detail += "; over the time limit";
        }
        if (!o.ok) ++failed;
        std::printf("%s %2d %-22s %10.3f ms (limit %.0f ms)  %s\n", o.ok ? "PASS" : "FAIL", cr.id, cr.name.c_str(), ms,
                    cr.limit_ms, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
