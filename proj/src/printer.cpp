#include "asmw/printer.hpp"

#include <map>
#include <sstream>

namespace asmw {

namespace {

// Precedence levels for minimal parenthesisation: atoms bind tightest,
// prefix operators ('!', quantifiers, modalities) next, '&' loosest among
// what the canonical core prints.
enum Level { LvlAnd = 1, LvlPrefix = 2, LvlAtom = 3 };

int level_of(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::And: return LvlAnd;
        case Formula::Kind::Not:
        case Formula::Kind::Forall:
        case Formula::Kind::Modal: return LvlPrefix;
        default: return LvlAtom;
    }
}

void print_term(std::ostream& os, const Term& t) {
    switch (t.kind) {
        case Term::Kind::Var:
            os << sigil(t.var_sort) << t.name;
            return;
        case Term::Kind::Atom:
            os << t.name;
            return;
        case Term::Kind::App:
            os << t.name;
            if (!t.args.empty()) {
                os << "(";
                for (size_t i = 0; i < t.args.size(); ++i) {
                    if (i) os << ", ";
                    print_term(os, t.args[i]);
                }
                os << ")";
            }
            return;
    }
}

void print_rule(std::ostream& os, const Rule& r, int indent);

void print_formula(std::ostream& os, const Formula& f, int min_level) {
    bool parens = level_of(f) < min_level;
    if (parens) os << "(";
    switch (f.kind) {
        case Formula::Kind::Eq:
            print_term(os, f.lhs);
            os << " = ";
            print_term(os, f.rhs);
            break;
        case Formula::Kind::Not:
            os << "!";
            print_formula(os, f.kids[0], LvlPrefix);
            break;
        case Formula::Kind::And:
            print_formula(os, f.kids[0], LvlPrefix);
            os << " & ";
            // '&' chains fold left, so the right operand needs parens when
            // it is itself a conjunction.
            print_formula(os, f.kids[1], LvlPrefix);
            break;
        case Formula::Kind::Forall:
            os << "forall " << sigil(f.var_sort) << f.var << " (";
            print_formula(os, f.kids[0], LvlAnd);
            os << ")";
            break;
        case Formula::Kind::Mem1:
        case Formula::Kind::Mem2:
            os << sigil(f.var_sort) << f.var << "(" << f.fn;
            for (const Term& t : f.terms) {
                os << ", ";
                print_term(os, t);
            }
            os << ")";
            break;
        case Formula::Kind::Upd:
            os << "upd(";
            print_rule(os, *f.rule, -1);
            os << ", %" << f.var << ")";
            break;
        case Formula::Kind::Modal:
            os << "[%" << f.var << "] ";
            print_formula(os, f.kids[0], LvlPrefix);
            break;
    }
    if (parens) os << ")";
}

void newline_or_space(std::ostream& os, int indent) {
    if (indent < 0) {
        os << " ";
    } else {
        os << "\n";
        for (int i = 0; i < indent; ++i) os << "  ";
    }
}

// indent < 0 prints single-line (used for rules embedded in formulas).
void print_rule(std::ostream& os, const Rule& r, int indent) {
    int next_indent = indent < 0 ? -1 : indent + 1;
    switch (r.kind) {
        case Rule::Kind::UpdatePrimary:
        case Rule::Kind::UpdateSecondary:
        case Rule::Kind::UpdateBridge:
            os << r.fn << "(";
            print_term(os, r.arg);
            os << ") := ";
            print_term(os, r.rhs);
            return;
        case Rule::Kind::If:
            os << "if ";
            print_formula(os, r.guard, LvlAnd);
            os << " then";
            newline_or_space(os, next_indent);
            print_rule(os, r.kids[0], next_indent);
            newline_or_space(os, indent);
            os << "endif";
            return;
        case Rule::Kind::Forall:
        case Rule::Kind::Choose:
        case Rule::Kind::ChooseU:
            os << (r.kind == Rule::Kind::Forall ? "forall " : "choose ");
            os << (r.kind == Rule::Kind::ChooseU ? "$" : "") << r.var;
            os << " with ";
            print_formula(os, r.guard, LvlAnd);
            os << " do";
            newline_or_space(os, next_indent);
            print_rule(os, r.kids[0], next_indent);
            newline_or_space(os, indent);
            os << "enddo";
            return;
        case Rule::Kind::Par:
        case Rule::Kind::Seq:
            os << (r.kind == Rule::Kind::Par ? "par" : "seq");
            newline_or_space(os, next_indent);
            print_rule(os, r.kids[0], next_indent);
            newline_or_space(os, next_indent);
            print_rule(os, r.kids[1], next_indent);
            newline_or_space(os, indent);
            os << (r.kind == Rule::Kind::Par ? "endpar" : "endseq");
            return;
    }
}

}  // namespace

std::string print(const Term& t) {
    std::ostringstream os;
    print_term(os, t);
    return os.str();
}

std::string print(const Formula& f) {
    std::ostringstream os;
    print_formula(os, f, LvlAnd);
    return os.str();
}

std::string print(const Rule& r, int indent) {
    std::ostringstream os;
    print_rule(os, r, indent);
    return os.str();
}

std::string print_signature(const SigContext& ctx) {
    std::ostringstream os;
    os << "signature:\n";
    for (const FunctionDecl& d : ctx.sig.decls())
        os << "  " << d.name << ": " << to_string(d.kind) << (d.dynamic ? " dynamic" : " static")
           << " arity " << d.arity << "\n";
    std::vector<std::string> prim, sec;
    for (const auto& [name, sort] : std::map<std::string, TermSort>(ctx.atoms.begin(), ctx.atoms.end()))
        (sort == TermSort::Point ? prim : sec).push_back(name);
    if (!prim.empty()) {
        os << "  atoms primary:";
        for (const auto& a : prim) os << " " << a;
        os << "\n";
    }
    if (!sec.empty()) {
        os << "  atoms secondary:";
        for (const auto& a : sec) os << " " << a;
        os << "\n";
    }
    return os.str();
}

std::string print_machine(const Machine& m) {
    std::ostringstream os;
    os << print_signature(m.ctx);
    os << "init:\n  " << print(m.init) << "\n";
    os << "final:\n  " << (m.final ? print(*m.final) : "none") << "\n";
    os << "rule:\n  " << print(m.rule, 1) << "\n";
    return os.str();
}

std::string print_formula_file(const SigContext& ctx, const Formula& f) {
    std::ostringstream os;
    os << print_signature(ctx);
    os << "formula:\n  " << print(f) << "\n";
    return os.str();
}

std::string print_state(const State& s) {
    std::ostringstream os;
    const Carriers& c = s.carriers();
    os << "primary-carrier:";
    for (size_t i = 0; i < c.primary_count(); ++i) os << " " << c.name(static_cast<Value>(i));
    os << "\nsecondary-carrier:";
    for (size_t i = c.primary_count(); i < c.total(); ++i) os << " " << c.name(static_cast<Value>(i));
    os << "\nfunctions:\n";
    for (size_t fi = 0; fi < s.sig().size(); ++fi) {
        const FunctionDecl& d = s.sig().decl(static_cast<int>(fi));
        const auto& data = s.table(static_cast<int>(fi)).data;
        // Most frequent value becomes the printed default; rows cover the rest.
        std::map<Value, size_t> freq;
        for (Value v : data) ++freq[v];
        Value def = data.empty() ? c.true_value() : data[0];
        size_t best = 0;
        for (auto [v, n] : freq)
            if (n > best) {
                best = n;
                def = v;
            }
        os << "  " << d.name << ": " << to_string(d.kind) << (d.dynamic ? " dynamic" : " static")
           << " arity " << d.arity << " default " << c.name(def) << "\n";
        // enumerate argument tuples in table order
        std::vector<Value> dom = c.values_of(Signature::arg_sort(d.kind));
        size_t rows = data.size();
        for (size_t row = 0; row < rows; ++row) {
            if (data[row] != def) {
                // decode row into argument values
                std::vector<Value> args(static_cast<size_t>(d.arity));
                size_t rem = row;
                for (int k = d.arity - 1; k >= 0; --k) {
                    args[static_cast<size_t>(k)] = dom[rem % dom.size()];
                    rem /= dom.size();
                }
                os << "    " << d.name;
                if (d.arity > 0) {
                    os << "(";
                    for (int k = 0; k < d.arity; ++k) {
                        if (k) os << ", ";
                        os << c.name(args[static_cast<size_t>(k)]);
                    }
                    os << ")";
                }
                os << " = " << c.name(data[row]) << "\n";
            }
        }
    }
    return os.str();
}

std::string print(const State& s, const Update& u) {
    std::ostringstream os;
    os << "(" << s.sig().decl(u.fn).name << ", " << s.carriers().name(u.arg) << ", "
       << s.carriers().name(u.value) << ")";
    return os.str();
}

std::string print(const State& s, const UpdateSet& us) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const Update& u : us) {
        if (!first) os << ", ";
        first = false;
        os << print(s, u);
    }
    os << "}";
    return os.str();
}

std::string print(const State& s, const TaggedUpdateSet& us) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const TaggedUpdate& u : us) {
        if (!first) os << ", ";
        first = false;
        os << "(" << s.sig().decl(u.fn).name << ", " << s.carriers().name(u.arg) << ", "
           << s.carriers().name(u.value) << ", " << s.carriers().name(u.tag) << ")";
    }
    os << "}";
    return os.str();
}

}  // namespace asmw
