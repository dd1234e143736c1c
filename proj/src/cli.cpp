#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sandlab/bridge.hpp"
#include "sandlab/metric.hpp"
#include "sandlab/nilpotency_lab.hpp"
#include "sandlab/sa_engine.hpp"
#include "sandlab/toolkit_io.hpp"

namespace sandlab {

namespace {

// Bad paths and flag combinations: exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

// Parse error tagged with the file it came from.
class FileParseError : public Error {
public:
    FileParseError(const std::string& path, const ParseError& e) : Error(path + ":" + e.what()) {}
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class Parse>
auto load(const std::string& path, Parse&& parse) {
    const std::string text = read_file(path);
    try {
        return parse(text);
    } catch (const ParseError& e) {
        throw FileParseError(path, e);
    }
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
}

SaRule load_rule(const std::string& path) {
    return SaRule::from_program(load(path, [](const std::string& t) { return parse_rule(t); }), path);
}

Configuration load_config(const std::string& path) {
    return load(path, [](const std::string& t) { return parse_config(t); });
}

CaFile load_ca(const std::string& path) {
    return load(path, [](const std::string& t) { return parse_carule(t); });
}

std::string tops_text(const StaircasePattern& w) {
    std::string s;
    for (std::size_t k = 0; k < w.tops.size(); ++k) s += (k ? "," : "") + std::to_string(w.tops[k]);
    return s;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"sand automata laboratory", "sandlab"};
    app.require_subcommand(1);

    std::string rule_path, config_path, out_path, ca_path, extract_path, traj_path, metric = "ground",
                                                                               format = "ascii";
    std::string a_path, b_path;
    std::int64_t steps = 10, budget = 10000, max_sum = 3, hlo = -8, hhi = 8, vlo = -4, vhi = 8;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    std::optional<std::int64_t> render_vlo, render_vhi;
    bool table = false;

    auto* simulate = app.add_subcommand("simulate", "run an orbit and write it as JSON lines");
    simulate->add_option("--rule", rule_path)->required();
    simulate->add_option("--config", config_path)->required();
    simulate->add_option("--steps", steps)->check(CLI::NonNegativeNumber);
    simulate->add_option("--out", out_path);

    auto* distance = app.add_subcommand("distance", "distance between two configurations");
    distance->add_option("--metric", metric)->check(CLI::IsMember({"ground", "top", "zeta"}));
    distance->add_option("a", a_path)->required();
    distance->add_option("b", b_path)->required();

    auto* encode = app.add_subcommand("encode", "print a window of the binary encoding, top level first");
    encode->add_option("--config", config_path)->required();
    encode->add_option("--hlo", hlo);
    encode->add_option("--hhi", hhi);
    encode->add_option("--vlo", vlo);
    encode->add_option("--vhi", vhi);

    auto* sa2ca = app.add_subcommand("sa2ca", "write the bridge CA of a rule");
    sa2ca->add_option("--rule", rule_path)->required();
    sa2ca->add_option("--out", out_path);
    sa2ca->add_flag("--table", table, "write the dense table instead of the bridge form");

    auto* check = app.add_subcommand("check-sa", "decide whether a binary planar CA acts as a sand automaton");
    check->add_option("--ca", ca_path)->required();
    check->add_option("--extract", extract_path, "write the extracted rule here");

    auto* reduce = app.add_subcommand("reduce-ca", "build the sand automaton of a spreading CA");
    reduce->add_option("--ca", ca_path)->required();
    reduce->add_option("--out", out_path);

    auto* flatten = app.add_subcommand("flatten", "run a bounded orbit until it is a constant fixed point");
    flatten->add_option("--rule", rule_path)->required();
    flatten->add_option("--config", config_path)->required();
    flatten->add_option("--budget", budget)->check(CLI::NonNegativeNumber);

    auto* period = app.add_subcommand("period-search", "look for F^(n+p) = F^n up to raising");
    period->add_option("--rule", rule_path)->required();
    period->add_option("--max-sum", max_sum)->check(CLI::PositiveNumber);
    period->add_option("--samples", samples);
    period->add_option("--seed", seed);

    auto* render = app.add_subcommand("render", "draw a trajectory");
    render->add_option("--traj", traj_path)->required();
    render->add_option("--format", format)->check(CLI::IsMember({"ascii", "svg"}));
    render->add_option("--out", out_path);
    render->add_option("--vlo", render_vlo);
    render->add_option("--vhi", render_vhi);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*simulate) {
            const SaRule f = load_rule(rule_path);
            const Configuration x = load_config(config_path);
            emit(out_path, write_trajectory(orbit(f, x, steps)), out);
            return 0;
        }
        if (*distance) {
            const Configuration a = load_config(a_path), b = load_config(b_path);
            const Distance d = metric == "ground" ? dist_ground(a, b) : metric == "top" ? dist_top(a, b) : dist_zeta(a, b);
            out << d.to_string() << '\n';
            return 0;
        }
        if (*encode) {
            const Configuration x = load_config(config_path);
            const Pattern<std::uint8_t> p = zeta_window(x, hlo, hhi, vlo, vhi).to_pattern();
            for (std::size_t b = p.height(); b >= 1; --b) {
                for (std::size_t a = 1; a <= p.width(); ++a) out << static_cast<char>('0' + p(a, b));
                out << '\n';
            }
            return 0;
        }
        if (*sa2ca) {
            const RuleProgram p = load(rule_path, [](const std::string& t) { return parse_rule(t); });
            if (p.dim != 1) throw UsageError("sa2ca needs a dim-1 rule");
            emit(out_path,
                 table ? serialize_carule_table(build_ca_from_sa(SaRule::from_program(p))) : serialize_carule_bridge(p),
                 out);
            return 0;
        }
        if (*check) {
            const CaFile ca = load_ca(ca_path);
            const DecisionReport rep = decide_sa(ca.rule);
            out << "invariance windows: " << rep.invariance_windows << '\n';
            out << "column windows: " << rep.column_windows << '\n';
            out << to_string(rep.verdict) << '\n';
            if (rep.verdict == Verdict::NotSa) {
                const CheckWitness& w = *rep.witness;
                out << "witness: " << to_string(w.kind) << " index " << w.index << " tops " << tops_text(w.window)
                    << " height " << w.window.height << '\n';
                return 1;
            }
            if (!extract_path.empty()) emit(extract_path, print_rule(extracted_program(ca.rule)), out);
            return 0;
        }
        if (*reduce) {
            const CaFile ca = load_ca(ca_path);
            const SpreadingCa S(ca.rule);
            emit(out_path, print_rule(reduction_program(S, enumeration_budget())), out);
            return 0;
        }
        if (*flatten) {
            const SaRule f = load_rule(rule_path);
            const FlattenReport rep = detect_flatten(f, load_config(config_path), budget);
            out << to_string(rep.outcome);
            if (rep.outcome == FlattenReport::Outcome::Converged) {
                out << " limit " << *rep.limit << " steps " << rep.steps << '\n';
                return 0;
            }
            out << " steps " << rep.steps;
            if (rep.outcome == FlattenReport::Outcome::NotConverged) out << " stable_window " << rep.stable_window;
            out << '\n';
            if (!rep.note.empty()) out << rep.note << '\n';
            return 1;
        }
        if (*period) {
            const SaRule f = load_rule(rule_path);
            const PeriodReport rep = find_ultimate_period(f, max_sum, samples, seed);
            out << to_string(rep.outcome);
            switch (rep.outcome) {
                case PeriodReport::Outcome::Periodic:
                    out << " n " << rep.n << " p " << rep.p << " drift " << rep.drift << '\n';
                    return 0;
                case PeriodReport::Outcome::Refuted:
                    out << " a " << rep.a << " b " << rep.b << '\n' << "witness " << to_string(*rep.witness) << '\n';
                    return 1;
                case PeriodReport::Outcome::Unknown:
                    out << " bound " << rep.bound << '\n' << rep.detail << '\n';
                    return 1;
            }
            return 1;
        }
        if (*render) {
            const auto records = load(traj_path, [](const std::string& t) { return read_trajectory(t); });
            RenderOptions opts;
            opts.vlo = render_vlo;
            opts.vhi = render_vhi;
            emit(out_path, format == "svg" ? render_svg(records, opts) : render_ascii(records, opts), out);
            return 0;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const FileParseError& e) {
        err << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"sandlab"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sandlab
