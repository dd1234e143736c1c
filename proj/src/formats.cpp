#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

#include "sandlab/bridge.hpp"
#include "sandlab/error.hpp"
#include "sandlab/toolkit_io.hpp"

namespace sandlab {

namespace {

constexpr std::int64_t kMaxRadius = 1000;

struct Line {
    std::size_t number = 0;
    std::string_view text;
};

std::vector<Line> split_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t start = 0, number = 1;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back({number++, line});
        start = end + 1;
    }
    return lines;
}

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return is_alpha(c) || is_digit(c) || c == '_'; }

std::string quote(char c) {
    const auto u = static_cast<unsigned char>(c);
    if (u >= 0x20 && u < 0x7f) return std::string("'") + c + "'";
    static const char* hex = "0123456789abcdef";
    return std::string("byte 0x") + hex[u >> 4] + hex[u & 15];
}

std::optional<std::int64_t> to_int(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// ---- rule DSL ----

struct Token {
    enum class Kind { Word, Number, Sym, End };
    Kind kind = Kind::End;
    std::string text;
    std::size_t col = 0;
};

std::vector<Token> lex_rule_line(const Line& line) {
    std::vector<Token> out;
    const std::string_view s = line.text;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        const std::size_t col = i + 1;
        if (c == ' ' || c == '\t') {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (is_alpha(c)) {
            std::size_t j = i;
            while (j < s.size() && is_alnum(s[j])) ++j;
            out.push_back({Token::Kind::Word, std::string(s.substr(i, j - i)), col});
            i = j;
            continue;
        }
        if (is_digit(c) || ((c == '+' || c == '-') && i + 1 < s.size() && is_digit(s[i + 1]))) {
            std::size_t j = i + 1;
            while (j < s.size() && is_digit(s[j])) ++j;
            if (j < s.size() && is_alpha(s[j])) throw ParseError(line.number, j + 1, "malformed number");
            out.push_back({Token::Kind::Number, std::string(s.substr(i, j - i)), col});
            i = j;
            continue;
        }
        if ((c == '+' || c == '-') && s.substr(i + 1, 3) == "inf" && (i + 4 >= s.size() || !is_alnum(s[i + 4]))) {
            out.push_back({Token::Kind::Number, std::string(s.substr(i, 4)), col});
            i += 4;
            continue;
        }
        static const char* two[] = {"=>", "==", "!=", "<=", ">=", "&&", "||"};
        bool matched = false;
        for (const char* t : two) {
            if (s.substr(i, 2) == t) {
                out.push_back({Token::Kind::Sym, t, col});
                i += 2;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string_view("[](),!<>").find(c) != std::string_view::npos) {
            out.push_back({Token::Kind::Sym, std::string(1, c), col});
            ++i;
            continue;
        }
        throw ParseError(line.number, col, "unexpected character " + quote(c));
    }
    out.push_back({Token::Kind::End, "", s.size() + 1});
    return out;
}

class RuleLineParser {
public:
    RuleLineParser(const Line& line, std::vector<Token> toks, int dim, std::int64_t radius)
        : line_(line), toks_(std::move(toks)), dim_(dim), radius_(radius) {}

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const Token& t, const std::string& msg) const { throw ParseError(line_.number, t.col, msg); }

    std::string describe(const Token& t) const { return t.kind == Token::Kind::End ? "end of line" : "'" + t.text + "'"; }

    void expect_sym(const std::string& sym) {
        const Token& t = next();
        if (t.kind != Token::Kind::Sym || t.text != sym) fail(t, "expected '" + sym + "', found " + describe(t));
    }

    void expect_end() {
        const Token& t = peek();
        if (t.kind != Token::Kind::End) fail(t, "unexpected " + describe(t));
    }

    std::int64_t integer() {
        const Token& t = next();
        if (t.kind != Token::Kind::Number) fail(t, "expected an integer, found " + describe(t));
        const auto v = to_int(t.text);
        if (!v) fail(t, "integer expected, found '" + t.text + "'");
        return *v;
    }

    // output integer checked against [-r, r]
    int output() {
        const Token& t = peek();
        const std::int64_t v = integer();
        if (v < -radius_ || v > radius_) {
            fail(t, "output " + std::to_string(v) + " out of range [-" + std::to_string(radius_) + ", " +
                        std::to_string(radius_) + "]");
        }
        return static_cast<int>(v);
    }

    Condition disjunction() {
        std::vector<Condition> parts{conjunction()};
        while (peek().kind == Token::Kind::Sym && peek().text == "||") {
            next();
            parts.push_back(conjunction());
        }
        return Condition::make_or(std::move(parts));
    }

    Condition conjunction() {
        std::vector<Condition> parts{unary()};
        while (peek().kind == Token::Kind::Sym && peek().text == "&&") {
            next();
            parts.push_back(unary());
        }
        return Condition::make_and(std::move(parts));
    }

    Condition unary() {
        const Token& t = peek();
        if (t.kind == Token::Kind::Sym && (t.text == "!" || t.text == "(")) {
            if (++depth_ > kMaxDepth) fail(t, "expression nested too deeply");
            next();
            Condition c = t.text == "!" ? Condition::make_not(unary()) : disjunction();
            if (t.text == "(") expect_sym(")");
            --depth_;
            return c;
        }
        return atom();
    }

    Condition atom() {
        const Token& r = next();
        if (r.kind != Token::Kind::Word || r.text != "R") fail(r, "expected R[...], found " + describe(r));
        expect_sym("[");
        Atom a;
        std::vector<std::int64_t> offs;
        std::vector<std::size_t> cols;
        while (true) {
            cols.push_back(peek().col);
            offs.push_back(integer());
            const Token& t = next();
            if (t.kind == Token::Kind::Sym && t.text == "]") break;
            if (t.kind != Token::Kind::Sym || t.text != ",") fail(t, "expected ',' or ']', found " + describe(t));
        }
        if (static_cast<int>(offs.size()) != dim_) {
            throw ParseError(line_.number, cols.front(),
                             "offset has " + std::to_string(offs.size()) + " components, dim is " + std::to_string(dim_));
        }
        bool center = true;
        for (std::size_t k = 0; k < offs.size(); ++k) {
            if (offs[k] < -radius_ || offs[k] > radius_) {
                throw ParseError(line_.number, cols[k],
                                 "offset " + std::to_string(offs[k]) + " out of range [-" + std::to_string(radius_) +
                                     ", " + std::to_string(radius_) + "]");
            }
            center = center && offs[k] == 0;
            a.offset[k] = offs[k];
        }
        if (center) throw ParseError(line_.number, cols.front(), "the center cell is not part of a range");

        const Token& op = next();
        static const std::map<std::string, Cmp> cmps = {{"<", Cmp::Less},          {"<=", Cmp::LessEqual},
                                                        {"==", Cmp::Equal},        {"!=", Cmp::NotEqual},
                                                        {">=", Cmp::GreaterEqual}, {">", Cmp::Greater}};
        const auto it = op.kind == Token::Kind::Sym ? cmps.find(op.text) : cmps.end();
        if (it == cmps.end()) fail(op, "expected a comparison, found " + describe(op));
        a.cmp = it->second;

        const Token& v = next();
        std::optional<Height> value;
        if (v.kind == Token::Kind::Number || (v.kind == Token::Kind::Word && v.text == "inf")) value = Height::parse(v.text);
        if (!value) fail(v, "expected an integer or +inf/-inf, found " + describe(v));
        a.value = *value;
        return Condition::make_atom(a);
    }

private:
    const Line& line_;
    std::vector<Token> toks_;
    static constexpr int kMaxDepth = 200;
    std::size_t pos_ = 0;
    int depth_ = 0;
    int dim_;
    std::int64_t radius_;
};

}  // namespace

RuleProgram parse_rule(std::string_view text) {
    const auto lines = split_lines(text);
    RuleProgram prog;
    bool header = false, have_dim = false, have_radius = false, have_default = false;
    for (const Line& line : lines) {
        auto toks = lex_rule_line(line);
        if (toks.front().kind == Token::Kind::End) continue;
        RuleLineParser p(line, toks, prog.dim, prog.radius);
        const Token& head = p.next();
        if (!header) {
            if (head.kind != Token::Kind::Word || head.text != "sarule") p.fail(head, "expected header 'sarule v1'");
            const Token& v = p.next();
            if (v.kind != Token::Kind::Word || v.text != "v1") p.fail(v, "unsupported version, expected 'v1'");
            p.expect_end();
            header = true;
            continue;
        }
        if (head.kind != Token::Kind::Word) p.fail(head, "expected a directive, found " + p.describe(head));
        if (have_default) p.fail(head, "nothing may follow the default case");
        if (head.text == "dim" || head.text == "radius") {
            const bool is_dim = head.text == "dim";
            if (is_dim ? have_dim : have_radius) p.fail(head, "duplicate '" + head.text + "'");
            if (!prog.cases.empty()) p.fail(head, "'" + head.text + "' must precede the cases");
            const Token& t = p.peek();
            const std::int64_t v = p.integer();
            p.expect_end();
            if (is_dim) {
                if (v != 1 && v != 2) p.fail(t, "dim must be 1 or 2");
                prog.dim = static_cast<int>(v);
                have_dim = true;
            } else {
                if (v < 1 || v > kMaxRadius) p.fail(t, "radius must be in [1, " + std::to_string(kMaxRadius) + "]");
                prog.radius = v;
                have_radius = true;
            }
            continue;
        }
        if (head.text == "case" || head.text == "default") {
            if (!have_dim) p.fail(head, "missing 'dim' before the cases");
            if (!have_radius) p.fail(head, "missing 'radius' before the cases");
            if (head.text == "case") {
                Condition c = p.disjunction();
                p.expect_sym("=>");
                const int out = p.output();
                p.expect_end();
                prog.cases.push_back({std::move(c), out});
            } else {
                p.expect_sym("=>");
                prog.default_output = p.output();
                p.expect_end();
                have_default = true;
            }
            continue;
        }
        p.fail(head, "unknown directive '" + head.text + "'");
    }
    const std::size_t end_line = lines.size();
    const std::size_t end_col = lines.back().text.size() + 1;
    if (!header) throw ParseError(end_line, end_col, "missing header 'sarule v1'");
    if (!have_default) throw ParseError(end_line, end_col, "missing 'default => INT'");
    return prog;
}

std::string print_rule(const RuleProgram& p) {
    std::string s = "sarule v1\ndim " + std::to_string(p.dim) + "\nradius " + std::to_string(p.radius) + "\n";
    for (const auto& c : p.cases) s += "case " + to_string(c.condition, p.dim) + " => " + std::to_string(c.output) + "\n";
    s += "default => " + std::to_string(p.default_output) + "\n";
    return s;
}

// ---- whitespace-separated formats ----

namespace {

struct Word {
    std::string_view text;
    std::size_t col;
};

std::vector<Word> words(const Line& line) {
    std::vector<Word> out;
    const std::string_view s = line.text;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] == ' ' || s[i] == '\t') {
            ++i;
            continue;
        }
        if (s[i] == '#') break;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        out.push_back({s.substr(i, j - i), i + 1});
        i = j;
    }
    return out;
}

std::string show(std::string_view s) {
    std::string out;
    for (char c : s.substr(0, 32)) {
        const auto u = static_cast<unsigned char>(c);
        out += (u >= 0x20 && u < 0x7f) ? std::string(1, c) : "?";
    }
    return out;
}

struct KeyLine {
    std::size_t line = 0;
    std::vector<Word> args;
    std::size_t key_col = 0;
};

struct Directives {
    std::map<std::string, KeyLine, std::less<>> keys;
    std::size_t end_line = 1, end_col = 1;

    const KeyLine* find(std::string_view k) const {
        auto it = keys.find(k);
        return it == keys.end() ? nullptr : &it->second;
    }
    const KeyLine& need(std::string_view k) const {
        const KeyLine* kl = find(k);
        if (!kl) throw ParseError(end_line, end_col, "missing '" + std::string(k) + "'");
        return *kl;
    }
};

std::int64_t int_arg(const KeyLine& kl, std::size_t k) {
    const Word& w = kl.args[k];
    const auto v = to_int(w.text);
    if (!v) throw ParseError(kl.line, w.col, "expected an integer, found '" + show(w.text) + "'");
    return *v;
}

Height height_arg(std::size_t line, const Word& w) {
    const auto h = Height::parse(w.text);
    if (!h) throw ParseError(line, w.col, "expected a height (integer, +inf or -inf), found '" + show(w.text) + "'");
    return *h;
}

void arity(const KeyLine& kl, std::size_t n, std::string_view key) {
    if (kl.args.size() == n) return;
    const std::size_t col = kl.args.size() > n ? kl.args[n].col : kl.key_col;
    throw ParseError(kl.line, col, "'" + std::string(key) + "' takes " + std::to_string(n) + " value" + (n == 1 ? "" : "s"));
}

// Reads `magic v1` then key lines until `stop_key` (exclusive); returns the
// index of the first line after the stop key, or lines.size().
std::size_t read_directives(const std::vector<Line>& lines, std::string_view magic,
                            std::initializer_list<std::string_view> allowed, Directives& d,
                            std::initializer_list<std::string_view> stop_keys = {}) {
    bool header = false;
    d.end_line = lines.size();
    d.end_col = lines.back().text.size() + 1;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const Line& line = lines[li];
        const auto ws = words(line);
        if (ws.empty()) continue;
        if (!header) {
            if (ws[0].text != magic) {
                throw ParseError(line.number, ws[0].col, "expected header '" + std::string(magic) + " v1'");
            }
            if (ws.size() < 2 || ws[1].text != "v1") {
                throw ParseError(line.number, ws.size() < 2 ? line.text.size() + 1 : ws[1].col,
                                 "unsupported version, expected 'v1'");
            }
            if (ws.size() > 2) throw ParseError(line.number, ws[2].col, "unexpected text after header");
            header = true;
            continue;
        }
        const std::string_view key = ws[0].text;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParseError(line.number, ws[0].col, "unknown key '" + show(key) + "'");
        }
        if (d.keys.count(key)) throw ParseError(line.number, ws[0].col, "duplicate key '" + std::string(key) + "'");
        d.keys[std::string(key)] = KeyLine{line.number, std::vector<Word>(ws.begin() + 1, ws.end()), ws[0].col};
        if (std::find(stop_keys.begin(), stop_keys.end(), key) != stop_keys.end()) return li + 1;
    }
    if (!header) throw ParseError(d.end_line, d.end_col, "missing header '" + std::string(magic) + " v1'");
    return lines.size();
}

}  // namespace

Configuration parse_config(std::string_view text) {
    const auto lines = split_lines(text);
    Directives d;
    read_directives(lines, "sandcfg",
                    {"dim", "kind", "left", "right", "bg", "origin", "period", "size", "heights"}, d);
    const KeyLine& dim_kl = d.need("dim");
    arity(dim_kl, 1, "dim");
    const std::int64_t dim = int_arg(dim_kl, 0);
    if (dim != 1 && dim != 2) throw ParseError(dim_kl.line, dim_kl.args[0].col, "dim must be 1 or 2");

    const KeyLine& kind_kl = d.need("kind");
    arity(kind_kl, 1, "kind");
    const std::string_view kind = kind_kl.args[0].text;
    if (kind != "eventually-constant" && kind != "periodic") {
        throw ParseError(kind_kl.line, kind_kl.args[0].col, "kind must be eventually-constant or periodic");
    }
    auto reject = [&](std::string_view key, const std::string& why) {
        if (const KeyLine* kl = d.find(key)) throw ParseError(kl->line, kl->key_col, "'" + std::string(key) + "' " + why);
    };

    const KeyLine& hk = d.need("heights");
    std::vector<Height> heights;
    heights.reserve(hk.args.size());
    for (const Word& w : hk.args) heights.push_back(height_arg(hk.line, w));

    if (kind == "periodic") {
        if (dim != 1) throw ParseError(kind_kl.line, kind_kl.args[0].col, "periodic configurations are dim 1");
        for (auto key : {"left", "right", "bg", "origin", "size"}) reject(key, "is not used by periodic configurations");
        const KeyLine& pk = d.need("period");
        arity(pk, 1, "period");
        const std::int64_t p = int_arg(pk, 0);
        if (p < 1) throw ParseError(pk.line, pk.args[0].col, "period must be >= 1");
        if (static_cast<std::int64_t>(heights.size()) != p) {
            throw ParseError(hk.line, hk.key_col,
                             "expected " + std::to_string(p) + " heights, found " + std::to_string(heights.size()));
        }
        return Configuration::periodic(std::move(heights));
    }
    reject("period", "is only used by periodic configurations");

    if (dim == 2) {
        reject("left", "is not used in dim 2");
        reject("right", "is not used in dim 2");
        const KeyLine& bk = d.need("bg");
        arity(bk, 1, "bg");
        const KeyLine& ok = d.need("origin");
        arity(ok, 2, "origin");
        const KeyLine& sk = d.need("size");
        arity(sk, 2, "size");
        const std::int64_t w = int_arg(sk, 0), h = int_arg(sk, 1);
        if (w < 0 || h < 0 || (w == 0) != (h == 0)) throw ParseError(sk.line, sk.args[0].col, "invalid core size");
        if (w > 0 && h > 0 && static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(h) != heights.size()) {
            throw ParseError(hk.line, hk.key_col,
                             "expected " + std::to_string(w * h) + " heights, found " + std::to_string(heights.size()));
        }
        if (w == 0 && !heights.empty()) throw ParseError(hk.line, hk.key_col, "expected 0 heights for an empty core");
        return Configuration::plane(height_arg(bk.line, bk.args[0]), Point{int_arg(ok, 0), int_arg(ok, 1)},
                                    static_cast<std::size_t>(w), static_cast<std::size_t>(h), std::move(heights));
    }

    reject("size", "is only used in dim 2");
    Height left{0}, right{0};
    if (const KeyLine* bk = d.find("bg")) {
        reject("left", "conflicts with 'bg'");
        reject("right", "conflicts with 'bg'");
        arity(*bk, 1, "bg");
        left = right = height_arg(bk->line, bk->args[0]);
    } else {
        const KeyLine& lk = d.need("left");
        arity(lk, 1, "left");
        const KeyLine& rk = d.need("right");
        arity(rk, 1, "right");
        left = height_arg(lk.line, lk.args[0]);
        right = height_arg(rk.line, rk.args[0]);
    }
    const KeyLine& ok = d.need("origin");
    arity(ok, 1, "origin");
    return Configuration::line(left, right, int_arg(ok, 0), std::move(heights));
}

std::string serialize_config(const Configuration& x) {
    std::ostringstream os;
    os << "sandcfg v1\ndim " << x.dim() << "\n";
    auto heights = [&] {
        os << "heights";
        for (const Height& h : x.cells()) os << ' ' << h;
        os << "\n";
    };
    if (x.is_periodic()) {
        os << "kind periodic\nperiod " << x.period() << "\n";
        heights();
        return os.str();
    }
    os << "kind eventually-constant\n";
    if (x.dim() == 2) {
        os << "bg " << x.bg() << "\norigin " << x.origin_point()[0] << ' ' << x.origin_point()[1] << "\nsize "
           << (x.cells().empty() ? 0 : x.core_width()) << ' ' << (x.cells().empty() ? 0 : x.core_height()) << "\n";
    } else {
        os << "left " << x.left_bg() << "\nright " << x.right_bg() << "\norigin " << x.origin() << "\n";
    }
    heights();
    return os.str();
}

// ---- CA rules ----

namespace {

constexpr std::string_view kDigits = "0123456789abcdefghijklmnopqrstuvwxyz";

}  // namespace

CaFile parse_carule(std::string_view text) {
    const auto lines = split_lines(text);
    Directives d;
    const std::size_t body =
        read_directives(lines, "carule", {"dim", "radius", "states", "table", "bridge"}, d, {"table", "bridge"});
    const KeyLine& dk = d.need("dim");
    arity(dk, 1, "dim");
    const KeyLine& rk = d.need("radius");
    arity(rk, 1, "radius");
    const KeyLine& sk = d.need("states");
    arity(sk, 1, "states");
    const std::int64_t dim = int_arg(dk, 0), radius = int_arg(rk, 0), states = int_arg(sk, 0);
    if (dim != 1 && dim != 2) throw ParseError(dk.line, dk.args[0].col, "dim must be 1 or 2");
    if (radius < 0 || radius > kMaxRadius) throw ParseError(rk.line, rk.args[0].col, "radius out of range");
    if (states < 2 || states > static_cast<std::int64_t>(kDigits.size())) {
        throw ParseError(sk.line, sk.args[0].col, "states must be in [2, 36]");
    }

    if (const KeyLine* tk = d.find("table")) {
        arity(*tk, 0, "table");
        const std::uint64_t count = saturating_pow(static_cast<std::uint64_t>(states),
                                                   saturating_pow(static_cast<std::uint64_t>(2 * radius + 1),
                                                                  static_cast<std::uint64_t>(dim)));
        if (count > kCaTableLimit) throw ParseError(tk->line, tk->key_col, "table too large");
        std::vector<Cell> table;
        table.reserve(count);
        for (std::size_t li = body; li < lines.size(); ++li) {
            const Line& line = lines[li];
            for (std::size_t k = 0; k < line.text.size(); ++k) {
                const char c = line.text[k];
                if (c == ' ' || c == '\t') continue;
                if (c == '#') break;
                const std::size_t v = kDigits.find(c);
                if (v == std::string_view::npos || v >= static_cast<std::size_t>(states)) {
                    throw ParseError(line.number, k + 1, "invalid table digit " + quote(c));
                }
                if (table.size() == count) throw ParseError(line.number, k + 1, "table has more than " + std::to_string(count) + " entries");
                table.push_back(static_cast<Cell>(v));
            }
        }
        if (table.size() != count) {
            throw ParseError(d.end_line, d.end_col,
                             "table has " + std::to_string(table.size()) + " entries, expected " + std::to_string(count));
        }
        return {CaRule::dense(static_cast<int>(dim), radius, static_cast<int>(states), std::move(table), "table"),
                std::nullopt};
    }

    const KeyLine& bk = d.need("bridge");
    arity(bk, 0, "bridge");
    std::string rest;
    for (std::size_t li = body; li < lines.size(); ++li) {
        rest += lines[li].text;
        if (li + 1 < lines.size()) rest += '\n';
    }
    RuleProgram prog;
    try {
        prog = parse_rule(rest);
    } catch (const ParseError& e) {
        throw ParseError(e.line() + body, e.column(), e.message());
    }
    if (prog.dim != 1) throw ParseError(bk.line, bk.key_col, "bridges are built from dim-1 rules");
    if (dim != 2 || states != 2 || radius != 2 * prog.radius) {
        throw ParseError(bk.line, bk.key_col,
                         "bridge of a radius-" + std::to_string(prog.radius) + " rule is dim 2, radius " +
                             std::to_string(2 * prog.radius) + ", states 2");
    }
    return {build_ca_from_sa(SaRule::from_program(prog)), prog};
}

std::string serialize_carule_table(const CaRule& g, std::uint64_t limit) {
    const CaRule dense = g.materialize(limit);
    std::string s = "carule v1\ndim " + std::to_string(g.dim()) + "\nradius " + std::to_string(g.radius()) +
                    "\nstates " + std::to_string(g.states()) + "\ntable\n";
    const auto table = dense.table();
    s.reserve(s.size() + table.size() + table.size() / 64 + 1);
    for (std::size_t k = 0; k < table.size(); ++k) {
        s += kDigits[table[k]];
        if (k % 64 == 63 || k + 1 == table.size()) s += '\n';
    }
    return s;
}

std::string serialize_carule_bridge(const RuleProgram& p) {
    if (p.dim != 1) throw DimensionError("bridges are built from dim-1 rules");
    return "carule v1\ndim 2\nradius " + std::to_string(2 * p.radius) + "\nstates 2\nbridge\n" + print_rule(p);
}

RuleProgram extracted_program(const CaRule& g, std::uint64_t budget) {
    const SaRule f = extract_sa(g);
    const std::int64_t rho = g.radius();
    const std::int64_t R = f.radius();
    const auto choices = static_cast<std::uint64_t>(2 * R + 3);
    const std::uint64_t count = saturating_pow(choices, static_cast<std::uint64_t>(2 * rho));
    if (count > budget) throw BudgetError("extracted program needs " + std::to_string(count) + " ranges");

    std::vector<std::int64_t> visible;
    for (std::int64_t o = -rho; o <= rho; ++o) {
        if (o) visible.push_back(o);
    }
    const auto offsets = range_offsets(1, R);
    auto slot = [&](std::int64_t o) {
        return static_cast<std::size_t>(std::find_if(offsets.begin(), offsets.end(), [o](const Point& p) { return p[0] == o; }) -
                                        offsets.begin());
    };
    auto value_of = [R](std::uint64_t digit) {
        if (digit == 0) return Height::minus_inf();
        if (digit == static_cast<std::uint64_t>(2 * R + 2)) return Height::plus_inf();
        return Height(static_cast<std::int64_t>(digit) - R - 1);
    };

    std::vector<int> outputs(count);
    std::vector<std::vector<Height>> keys(count);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        Range range(1, R);
        std::uint64_t rest = idx;
        std::vector<Height> key(visible.size());
        for (std::size_t k = visible.size(); k-- > 0;) {
            key[k] = value_of(rest % choices);
            rest /= choices;
            range.entries()[slot(visible[k])] = key[k];
        }
        outputs[idx] = f.apply(range);
        keys[idx] = std::move(key);
    }
    std::map<int, std::uint64_t> freq;
    for (int v : outputs) ++freq[v];
    const int common = std::max_element(freq.begin(), freq.end(), [](const auto& a, const auto& b) {
                           return a.second < b.second;
                       })->first;

    RuleProgram prog;
    prog.dim = 1;
    prog.radius = R;
    prog.default_output = common;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        if (outputs[idx] == common) continue;
        std::vector<Condition> parts;
        for (std::size_t k = 0; k < visible.size(); ++k) {
            parts.push_back(Condition::make_atom({{visible[k], 0}, Cmp::Equal, keys[idx][k]}));
        }
        prog.cases.push_back({Condition::make_and(std::move(parts)), outputs[idx]});
    }
    return prog;
}

}  // namespace sandlab
