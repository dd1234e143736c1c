#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sandlab/configuration.hpp"
#include "sandlab/height.hpp"

namespace sandlab {

class Range;

enum class Cmp { Less, LessEqual, Equal, NotEqual, GreaterEqual, Greater };

const char* to_string(Cmp cmp);

/// `R[offset] CMP value`, compared in the order -inf < integers < +inf.
struct Atom {
    Point offset{0, 0};
    Cmp cmp = Cmp::Equal;
    Height value{0};

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// Guard expression. And/Or nodes are n-ary and never directly nest the same
/// operator, so each expression has a single printed form.
struct Condition {
    enum class Op { Atom, Not, And, Or };

    Op op = Op::Atom;
    Atom atom;
    std::vector<Condition> children;

    static Condition make_atom(Atom a) { return Condition{Op::Atom, a, {}}; }
    static Condition make_not(Condition c);
    static Condition make_and(std::vector<Condition> parts);
    static Condition make_or(std::vector<Condition> parts);

    bool evaluate(const Range& range) const;

    friend bool operator==(const Condition&, const Condition&) = default;
};

struct RuleCase {
    Condition condition;
    int output = 0;

    friend bool operator==(const RuleCase&, const RuleCase&) = default;
};

/// Guarded-case SA local rule; the first matching case wins.
struct RuleProgram {
    int dim = 1;
    std::int64_t radius = 1;
    std::vector<RuleCase> cases;
    int default_output = 0;

    int evaluate(const Range& range) const;

    friend bool operator==(const RuleProgram&, const RuleProgram&) = default;
};

/// Canonical text of a condition (minimal parentheses).
std::string to_string(const Condition& c, int dim);

}  // namespace sandlab
