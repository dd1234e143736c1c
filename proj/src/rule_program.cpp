#include "sandlab/rule_program.hpp"

#include "sandlab/sa_rule.hpp"

namespace sandlab {

const char* to_string(Cmp cmp) {
    switch (cmp) {
        case Cmp::Less: return "<";
        case Cmp::LessEqual: return "<=";
        case Cmp::Equal: return "==";
        case Cmp::NotEqual: return "!=";
        case Cmp::GreaterEqual: return ">=";
        case Cmp::Greater: return ">";
    }
    return "?";
}

namespace {

Condition merge(Condition::Op op, std::vector<Condition> parts) {
    if (parts.size() == 1) return std::move(parts.front());
    Condition out{op, {}, {}};
    for (auto& p : parts) {
        if (p.op == op) {
            for (auto& c : p.children) out.children.push_back(std::move(c));
        } else {
            out.children.push_back(std::move(p));
        }
    }
    return out;
}

bool compare(Height lhs, Cmp cmp, Height rhs) {
    switch (cmp) {
        case Cmp::Less: return lhs < rhs;
        case Cmp::LessEqual: return lhs <= rhs;
        case Cmp::Equal: return lhs == rhs;
        case Cmp::NotEqual: return lhs != rhs;
        case Cmp::GreaterEqual: return lhs >= rhs;
        case Cmp::Greater: return lhs > rhs;
    }
    return false;
}

std::string atom_text(const Atom& a, int dim) {
    std::string s = "R[" + std::to_string(a.offset[0]);
    if (dim == 2) s += "," + std::to_string(a.offset[1]);
    s += "] ";
    s += to_string(a.cmp);
    s += " ";
    s += a.value.to_string();
    return s;
}

}  // namespace

Condition Condition::make_not(Condition c) { return Condition{Op::Not, {}, {std::move(c)}}; }
Condition Condition::make_and(std::vector<Condition> parts) { return merge(Op::And, std::move(parts)); }
Condition Condition::make_or(std::vector<Condition> parts) { return merge(Op::Or, std::move(parts)); }

bool Condition::evaluate(const Range& range) const {
    switch (op) {
        case Op::Atom:
            return compare(range.at(atom.offset), atom.cmp, atom.value);
        case Op::Not:
            return !children.front().evaluate(range);
        case Op::And:
            for (const auto& c : children) {
                if (!c.evaluate(range)) return false;
            }
            return true;
        case Op::Or:
            for (const auto& c : children) {
                if (c.evaluate(range)) return true;
            }
            return false;
    }
    return false;
}

int RuleProgram::evaluate(const Range& range) const {
    for (const auto& c : cases) {
        if (c.condition.evaluate(range)) return c.output;
    }
    return default_output;
}

std::string to_string(const Condition& c, int dim) {
    switch (c.op) {
        case Condition::Op::Atom:
            return atom_text(c.atom, dim);
        case Condition::Op::Not: {
            const Condition& inner = c.children.front();
            const bool bare = inner.op == Condition::Op::Atom || inner.op == Condition::Op::Not;
            return "!" + (bare ? to_string(inner, dim) : "(" + to_string(inner, dim) + ")");
        }
        case Condition::Op::And: {
            std::string s;
            for (std::size_t k = 0; k < c.children.size(); ++k) {
                const Condition& part = c.children[k];
                if (k) s += " && ";
                s += part.op == Condition::Op::Or ? "(" + to_string(part, dim) + ")" : to_string(part, dim);
            }
            return s;
        }
        case Condition::Op::Or: {
            std::string s;
            for (std::size_t k = 0; k < c.children.size(); ++k) {
                if (k) s += " || ";
                s += to_string(c.children[k], dim);
            }
            return s;
        }
    }
    return {};
}

}  // namespace sandlab
