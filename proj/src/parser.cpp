#include "asmw/parser.hpp"

#include <algorithm>
#include <memory>

#include "asmw/analysis.hpp"
#include "asmw/logic.hpp"
#include "asmw/schemas.hpp"
#include "lexer.hpp"

namespace asmw {

namespace {

using detail::Lexer;
using detail::Tok;
using detail::Token;

class Parser {
public:
    Parser(const std::string& src) : lexer_(src), toks_(lexer_.tokens()) {}

    // --- token plumbing ---

    const Token& peek(int ahead = 0) const {
        size_t i = pos_ + static_cast<size_t>(ahead);
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(Tok t, int ahead = 0) const { return peek(ahead).kind == t; }
    Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
    Token expect(Tok t, const std::string& what) {
        if (!at(t))
            fail("expected " + what + ", found " + detail::token_name(peek().kind));
        return next();
    }
    bool accept(Tok t) {
        if (at(t)) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw SyntaxError(msg, peek().line, peek().col);
    }
    [[noreturn]] void sort_fail(const std::string& msg) const {
        throw SortError(msg, peek().line, peek().col);
    }
    void expect_eof() {
        if (!at(Tok::Eof)) fail("trailing input");
    }

    // --- sections ---

    bool at_section(const char* name) const {
        return at(Tok::Ident) && peek().text == name && at(Tok::Colon, 1);
    }
    void eat_section(const char* name) {
        expect(Tok::Ident, name);
        expect(Tok::Colon, "':'");
    }

    // --- signature block ---

    void parse_signature_block(SigContext& ctx) {
        eat_section("signature");
        while (true) {
            if (at(Tok::Ident) && peek().text == "atoms") {
                next();
                Token which = expect(Tok::Ident, "'primary' or 'secondary'");
                TermSort s;
                if (which.text == "primary") s = TermSort::Point;
                else if (which.text == "secondary") s = TermSort::Algorithmic;
                else fail("expected 'primary' or 'secondary' after 'atoms'");
                expect(Tok::Colon, "':'");
                while (at(Tok::Ident) || at(Tok::Number)) {
                    // a following ':' means the name opens the next declaration/section;
                    // a bare 'atoms' opens another atom list
                    if (at(Tok::Colon, 1)) break;
                    if (at(Tok::Ident) && peek().text == "atoms") break;
                    ctx.declare_atom(next().text, s);
                }
                continue;
            }
            if (at(Tok::Ident) && at(Tok::Colon, 1) && !is_known_section(peek().text)) {
                FunctionDecl d;
                d.name = next().text;
                next();  // ':'
                d.kind = parse_kind();
                d.dynamic = parse_dynamic();
                expect_word("arity");
                d.arity = std::stoi(expect(Tok::Number, "arity").text);
                ctx.sig.add(d);
                continue;
            }
            break;
        }
    }

    static bool is_known_section(const std::string& w) {
        return w == "signature" || w == "rule" || w == "init" || w == "final" ||
               w == "formula" || w == "hypotheses" || w == "derivation" || w == "functions";
    }

    FuncKind parse_kind() {
        Token t = expect(Tok::Ident, "function kind");
        if (t.text == "primary") return FuncKind::Primary;
        if (t.text == "secondary") return FuncKind::Secondary;
        if (t.text == "bridge") return FuncKind::Bridge;
        fail("expected 'primary', 'secondary' or 'bridge'");
    }
    bool parse_dynamic() {
        Token t = expect(Tok::Ident, "'static' or 'dynamic'");
        if (t.text == "static") return false;
        if (t.text == "dynamic") return true;
        fail("expected 'static' or 'dynamic'");
    }
    void expect_word(const char* w) {
        if (!(at(Tok::Ident) && peek().text == w)) fail(std::string("expected '") + w + "'");
        next();
    }

    // --- terms ---

    struct Scope {
        std::vector<VarRef> binders;
        bool shadows(const std::string& name, VarSort s) const {
            for (auto it = binders.rbegin(); it != binders.rend(); ++it)
                if (it->name == name && it->sort == s) return true;
            return false;
        }
    };

    Term parse_term(const SigContext& ctx, Scope& scope) {
        if (at(Tok::Var2)) return Term::var(next().text, VarSort::Ind2);
        if (at(Tok::Number)) {
            Token t = next();
            auto s = ctx.atom_sort(t.text);
            if (!s) throw SyntaxError("undeclared atom '" + t.text + "'", t.line, t.col);
            return Term::atom(t.text, *s);
        }
        if (!at(Tok::Ident)) fail("expected a term");
        Token id = next();
        if (scope.shadows(id.text, VarSort::Ind1)) return Term::var(id.text, VarSort::Ind1);
        if (const FunctionDecl* d = ctx.sig.find(id.text)) {
            std::vector<Term> args;
            if (accept(Tok::LParen)) {
                if (!at(Tok::RParen)) {
                    args.push_back(parse_term(ctx, scope));
                    while (accept(Tok::Comma)) args.push_back(parse_term(ctx, scope));
                }
                expect(Tok::RParen, "')'");
            }
            if (static_cast<int>(args.size()) != d->arity)
                throw SortError("function '" + id.text + "' expects " +
                                    std::to_string(d->arity) + " argument(s)",
                                id.line, id.col);
            return Term::app(id.text, std::move(args));
        }
        if (auto s = ctx.atom_sort(id.text)) return Term::atom(id.text, *s);
        return Term::var(id.text, VarSort::Ind1);  // free sort-1 variable
    }

    // --- formulas ---

    Formula parse_formula(const SigContext& ctx, Scope& scope) {
        Formula f = parse_imp(ctx, scope);
        while (accept(Tok::Iff)) {
            Formula rhs = parse_imp(ctx, scope);
            f = f_iff(std::move(f), std::move(rhs));
        }
        return f;
    }

    Formula parse_imp(const SigContext& ctx, Scope& scope) {
        Formula f = parse_or(ctx, scope);
        if (accept(Tok::Arrow)) {
            Formula rhs = parse_imp(ctx, scope);
            return f_implies(std::move(f), std::move(rhs));
        }
        return f;
    }

    Formula parse_or(const SigContext& ctx, Scope& scope) {
        Formula f = parse_and(ctx, scope);
        while (accept(Tok::Pipe)) {
            Formula rhs = parse_and(ctx, scope);
            f = f_or(std::move(f), std::move(rhs));
        }
        return f;
    }

    Formula parse_and(const SigContext& ctx, Scope& scope) {
        Formula f = parse_unary(ctx, scope);
        while (accept(Tok::Amp)) {
            Formula rhs = parse_unary(ctx, scope);
            f = f_and(std::move(f), std::move(rhs));
        }
        return f;
    }

    std::vector<VarRef> parse_formula_binders() {
        std::vector<VarRef> vars;
        while (true) {
            if (at(Tok::Ident)) vars.push_back({next().text, VarSort::Ind1});
            else if (at(Tok::Var2)) vars.push_back({next().text, VarSort::Ind2});
            else if (at(Tok::PVar1)) vars.push_back({next().text, VarSort::Pred1});
            else if (at(Tok::PVar2)) vars.push_back({next().text, VarSort::Pred2});
            else fail("expected a binder variable");
            if (!accept(Tok::Comma)) break;
        }
        for (size_t i = 0; i < vars.size(); ++i)
            for (size_t j = i + 1; j < vars.size(); ++j)
                if (vars[i] == vars[j]) sort_fail("duplicate binder '" + vars[i].name + "'");
        return vars;
    }

    void check_binder_name(const SigContext& ctx, const VarRef& v) {
        if ((v.sort == VarSort::Ind1 || v.sort == VarSort::Ind2) &&
            (ctx.sig.find(v.name) || ctx.atom_sort(v.name)))
            sort_fail("binder '" + v.name + "' collides with a function or atom name");
    }

    Formula parse_unary(const SigContext& ctx, Scope& scope) {
        if (accept(Tok::Bang)) return f_not(parse_unary(ctx, scope));
        if (at(Tok::KwForall) || at(Tok::KwExists)) {
            bool existential = next().kind == Tok::KwExists;
            std::vector<VarRef> vars = parse_formula_binders();
            expect(Tok::LParen, "'('");
            for (const VarRef& v : vars) {
                check_binder_name(ctx, v);
                scope.binders.push_back(v);
            }
            Formula body = parse_formula(ctx, scope);
            for (size_t i = 0; i < vars.size(); ++i) scope.binders.pop_back();
            expect(Tok::RParen, "')'");
            for (auto it = vars.rbegin(); it != vars.rend(); ++it)
                body = existential ? f_exists(it->name, it->sort, std::move(body))
                                   : f_forall(it->name, it->sort, std::move(body));
            return body;
        }
        if (at(Tok::LBracket)) {
            next();
            if (at(Tok::PVar1)) {
                std::string x = next().text;
                expect(Tok::RBracket, "']'");
                return f_modal(std::move(x), parse_unary(ctx, scope));
            }
            Rule r = parse_rule_ast(ctx, scope);
            expect(Tok::RBracket, "']'");
            Formula body = parse_unary(ctx, scope);
            return box_formula(r, std::move(body), ctx);
        }
        if (at(Tok::Lt)) {
            next();
            Rule r = parse_rule_ast(ctx, scope);
            expect(Tok::Gt, "'>'");
            Formula body = parse_unary(ctx, scope);
            return diamond_formula(r, std::move(body), ctx);
        }
        return parse_primary(ctx, scope);
    }

    Formula parse_primary(const SigContext& ctx, Scope& scope) {
        if (accept(Tok::LParen)) {
            Formula f = parse_formula(ctx, scope);
            expect(Tok::RParen, "')'");
            return f;
        }
        if (at(Tok::KwUpd)) {
            next();
            expect(Tok::LParen, "'('");
            Rule r = parse_rule_ast(ctx, scope);
            expect(Tok::Comma, "','");
            std::string x = expect(Tok::PVar1, "a %-variable").text;
            expect(Tok::RParen, "')'");
            return f_upd(std::move(r), std::move(x));
        }
        if (at(Tok::KwConUSet)) {
            next();
            expect(Tok::LParen, "'('");
            std::string x = expect(Tok::PVar1, "a %-variable").text;
            expect(Tok::RParen, "')'");
            FreshGen fresh = scope_fresh(scope);
            return con_uset_formula(x, ctx, fresh);
        }
        if (at(Tok::KwCon)) {
            next();
            expect(Tok::LParen, "'('");
            Rule r = parse_rule_ast(ctx, scope);
            expect(Tok::Comma, "','");
            std::string x = expect(Tok::PVar1, "a %-variable").text;
            expect(Tok::RParen, "')'");
            return con_formula(r, x, ctx);
        }
        if (at(Tok::KwWcon) || at(Tok::KwScon)) {
            bool weak = next().kind == Tok::KwWcon;
            expect(Tok::LParen, "'('");
            Rule r = parse_rule_ast(ctx, scope);
            expect(Tok::RParen, "')'");
            return weak ? wcon_formula(r, ctx) : scon_formula(r, ctx);
        }
        if (at(Tok::KwJoinable)) {
            next();
            expect(Tok::LParen, "'('");
            Rule r1 = parse_rule_ast(ctx, scope);
            expect(Tok::Comma, "','");
            Rule r2 = parse_rule_ast(ctx, scope);
            expect(Tok::RParen, "')'");
            return joinable_formula(r1, r2, ctx);
        }
        if (at(Tok::PVar1)) {
            Token v = next();
            expect(Tok::LParen, "'('");
            std::string fn = expect(Tok::Ident, "a function name").text;
            require_dynamic(ctx, fn, v);
            expect(Tok::Comma, "','");
            Term t0 = parse_term(ctx, scope);
            expect(Tok::Comma, "','");
            Term s0 = parse_term(ctx, scope);
            expect(Tok::RParen, "')'");
            return f_mem1(v.text, fn, std::move(t0), std::move(s0));
        }
        if (at(Tok::PVar2)) {
            Token v = next();
            expect(Tok::LParen, "'('");
            std::string fn = expect(Tok::Ident, "a function name").text;
            require_dynamic(ctx, fn, v);
            expect(Tok::Comma, "','");
            Term t0 = parse_term(ctx, scope);
            expect(Tok::Comma, "','");
            Term s0 = parse_term(ctx, scope);
            expect(Tok::Comma, "','");
            Term s = parse_term(ctx, scope);
            expect(Tok::RParen, "')'");
            Formula f = f_mem2(v.text, fn, std::move(t0), std::move(s0), std::move(s));
            check_formula(f, ctx);
            return f;
        }
        // equality / inequality
        Token start = peek();
        Term lhs = parse_term(ctx, scope);
        bool neg = false;
        if (accept(Tok::Neq)) neg = true;
        else expect(Tok::Eq, "'=' or '!='");
        Term rhs = parse_term(ctx, scope);
        Formula f = f_eq(std::move(lhs), std::move(rhs));
        TermSort a, b;
        try {
            a = sort_of(f.lhs, ctx);
            b = sort_of(f.rhs, ctx);
        } catch (const SortError& e) {
            throw SortError(e.what(), start.line, start.col);
        }
        if (a != b)
            throw SortError("equality between terms of different sorts", start.line, start.col);
        return neg ? f_not(std::move(f)) : f;
    }

    void require_dynamic(const SigContext& ctx, const std::string& fn, const Token& where) {
        const FunctionDecl* d = ctx.sig.find(fn);
        if (!d) throw SortError("unknown function '" + fn + "'", where.line, where.col);
        if (!d->dynamic)
            throw SortError("membership atom over static function '" + fn + "'", where.line,
                            where.col);
    }

    FreshGen scope_fresh(const Scope& scope) {
        FreshGen fresh;
        for (const VarRef& v : scope.binders) fresh.reserve_name(v.name);
        return fresh;
    }

    // --- rules ---

    Rule parse_rule_ast(const SigContext& ctx, Scope& scope) {
        Rule r = parse_single_rule(ctx, scope);
        return r;
    }

    bool starts_rule() const {
        switch (peek().kind) {
            case Tok::KwIf:
            case Tok::KwForall:
            case Tok::KwChoose:
            case Tok::KwPar:
            case Tok::KwSeq:
            case Tok::Ident:
                return true;
            default:
                return false;
        }
    }

    Rule parse_block(const SigContext& ctx, Scope& scope) {
        // Juxtaposed rules in a block execute in parallel.
        Rule r = parse_single_rule(ctx, scope);
        while (starts_rule()) {
            Rule rhs = parse_single_rule(ctx, scope);
            r = r_par(std::move(r), std::move(rhs));
        }
        return r;
    }

    std::vector<VarRef> parse_rule_binders(bool sort1_only) {
        std::vector<VarRef> vars;
        while (true) {
            if (at(Tok::Ident)) vars.push_back({next().text, VarSort::Ind1});
            else if (at(Tok::Var2)) {
                Token t = peek();
                if (sort1_only)
                    throw SortError("forall binders range over the primary sort only", t.line,
                                    t.col);
                vars.push_back({next().text, VarSort::Ind2});
            } else
                fail("expected a binder variable");
            if (!accept(Tok::Comma)) break;
        }
        for (size_t i = 0; i < vars.size(); ++i)
            for (size_t j = i + 1; j < vars.size(); ++j)
                if (vars[i] == vars[j]) sort_fail("duplicate binder '" + vars[i].name + "'");
        return vars;
    }

    // Multi-variable binder desugaring:
    //   choose x,y with phi do r  =>  choose x with exists y (phi) do
    //                                   choose y with phi do r enddo enddo
    // and likewise for forall.
    Rule desugar_binder(bool is_forall, const std::vector<VarRef>& vars, size_t i,
                        const Formula& guard, const SigContext& ctx, Scope& scope) {
        const VarRef& v = vars[i];
        Rule::Kind kind = is_forall ? Rule::Kind::Forall
                          : v.sort == VarSort::Ind2 ? Rule::Kind::ChooseU
                                                    : Rule::Kind::Choose;
        Formula g = guard;
        for (size_t j = vars.size(); j-- > i + 1;) g = f_exists(vars[j].name, vars[j].sort, std::move(g));
        Rule body = i + 1 < vars.size()
                        ? desugar_binder(is_forall, vars, i + 1, guard, ctx, scope)
                        : parse_body_block(ctx, scope);
        return r_binder(kind, v.name, std::move(g), std::move(body));
    }

    Rule parse_body_block(const SigContext& ctx, Scope& scope) {
        expect(Tok::KwDo, "'do'");
        Rule body = parse_block(ctx, scope);
        expect(Tok::KwEnddo, "'enddo'");
        return body;
    }

    Rule parse_single_rule(const SigContext& ctx, Scope& scope) {
        if (accept(Tok::KwIf)) {
            Formula guard = parse_formula(ctx, scope);
            require_guard(guard);
            expect(Tok::KwThen, "'then'");
            Rule body = parse_block(ctx, scope);
            expect(Tok::KwEndif, "'endif'");
            return r_if(std::move(guard), std::move(body));
        }
        if (at(Tok::KwForall) || at(Tok::KwChoose)) {
            bool is_forall = next().kind == Tok::KwForall;
            std::vector<VarRef> vars = parse_rule_binders(is_forall);
            expect(Tok::KwWith, "'with'");
            for (const VarRef& v : vars) {
                check_binder_name(ctx, v);
                scope.binders.push_back(v);
            }
            Formula guard = parse_formula(ctx, scope);
            require_guard(guard);
            Rule r = desugar_binder(is_forall, vars, 0, guard, ctx, scope);
            for (size_t i = 0; i < vars.size(); ++i) scope.binders.pop_back();
            return r;
        }
        if (accept(Tok::KwPar)) {
            Rule r = parse_single_rule(ctx, scope);
            do {
                Rule rhs = parse_single_rule(ctx, scope);
                r = r_par(std::move(r), std::move(rhs));
            } while (starts_rule());
            expect(Tok::KwEndpar, "'endpar'");
            return r;
        }
        if (accept(Tok::KwSeq)) {
            Rule r = parse_single_rule(ctx, scope);
            do {
                Rule rhs = parse_single_rule(ctx, scope);
                r = r_seq(std::move(r), std::move(rhs));
            } while (starts_rule());
            expect(Tok::KwEndseq, "'endseq'");
            return r;
        }
        // update rule: f(t) := s
        Token start = peek();
        Term lhs = parse_term(ctx, scope);
        if (lhs.kind != Term::Kind::App)
            throw SortError("left-hand side of ':=' must be a dynamic function application",
                            start.line, start.col);
        expect(Tok::Assign, "':='");
        Term rhs = parse_term(ctx, scope);
        const FunctionDecl& d = ctx.sig.at(lhs.name);
        if (!d.dynamic)
            throw SortError("update target '" + lhs.name + "' is static", start.line, start.col);
        Rule::Kind k = d.kind == FuncKind::Primary   ? Rule::Kind::UpdatePrimary
                       : d.kind == FuncKind::Secondary ? Rule::Kind::UpdateSecondary
                                                       : Rule::Kind::UpdateBridge;
        Rule r = r_update(k, lhs.name, lhs.args[0], std::move(rhs));
        try {
            check_rule(r, ctx);
        } catch (const SortError& e) {
            throw SortError(e.what(), start.line, start.col);
        }
        return r;
    }

    void require_guard(const Formula& f) {
        if (!is_first_order(f)) sort_fail("rule guard must be first-order");
    }

    // --- state files ---

    State parse_state_file() {
        std::vector<std::string> primary, secondary;
        expect(Tok::KwPrimaryCarrier, "'primary-carrier'");
        expect(Tok::Colon, "':'");
        while ((at(Tok::Ident) || at(Tok::Number)) && !at_carrier_or_functions())
            primary.push_back(next().text);
        expect(Tok::KwSecondaryCarrier, "'secondary-carrier'");
        expect(Tok::Colon, "':'");
        while ((at(Tok::Ident) || at(Tok::Number)) && !at_carrier_or_functions())
            secondary.push_back(next().text);
        eat_section("functions");

        auto carriers = std::make_shared<const Carriers>(primary, secondary);
        auto sig = std::make_shared<Signature>();

        struct PendingFn {
            FunctionDecl decl;
            std::string def;
            std::vector<std::pair<std::vector<std::string>, std::string>> rows;
            int line, col;
        };
        std::vector<PendingFn> fns;
        while (at(Tok::Ident) || at(Tok::Number)) {
            if (at(Tok::Ident) && at(Tok::Colon, 1)) {
                PendingFn f;
                f.line = peek().line;
                f.col = peek().col;
                f.decl.name = next().text;
                next();  // ':'
                f.decl.kind = parse_kind();
                f.decl.dynamic = parse_dynamic();
                expect_word("arity");
                f.decl.arity = std::stoi(expect(Tok::Number, "arity").text);
                expect_word("default");
                if (!at(Tok::Ident) && !at(Tok::Number)) fail("expected default value");
                f.def = next().text;
                fns.push_back(std::move(f));
                continue;
            }
            // graph row: name(args) = value  |  name = value
            if (fns.empty()) fail("graph row before any function declaration");
            Token id = next();
            std::vector<std::string> args;
            if (accept(Tok::LParen)) {
                if (!at(Tok::RParen)) {
                    do {
                        if (!at(Tok::Ident) && !at(Tok::Number)) fail("expected an atom");
                        args.push_back(next().text);
                    } while (accept(Tok::Comma));
                }
                expect(Tok::RParen, "')'");
            }
            expect(Tok::Eq, "'='");
            if (!at(Tok::Ident) && !at(Tok::Number)) fail("expected an atom");
            std::string value = next().text;
            PendingFn* owner = nullptr;
            for (auto& f : fns)
                if (f.decl.name == id.text) owner = &f;
            if (!owner)
                throw InputError("graph row for undeclared function '" + id.text + "'");
            owner->rows.push_back({std::move(args), std::move(value)});
        }
        expect_eof();

        for (const auto& f : fns) sig->add(f.decl);
        State s(std::shared_ptr<const Signature>(sig), carriers);
        for (const auto& f : fns) {
            int fi = sig->index_of(f.decl.name);
            TermSort argsort = Signature::arg_sort(f.decl.kind);
            TermSort valsort = Signature::value_sort(f.decl.kind);
            auto resolve = [&](const std::string& name, TermSort want) {
                Value v = carriers->id(name);
                if (v == kNoValue) throw InputError("unknown atom '" + name + "'");
                if (!carriers->in_sort(v, want))
                    throw InputError("atom '" + name + "' is in the wrong carrier for '" +
                                     f.decl.name + "'");
                return v;
            };
            for (const auto& [args, value] : f.rows) {
                if (static_cast<int>(args.size()) != f.decl.arity)
                    throw InputError("row arity mismatch for '" + f.decl.name + "'");
                std::vector<Value> argv;
                for (const auto& a : args) argv.push_back(resolve(a, argsort));
                s.set(fi, argv, resolve(value, valsort));
            }
            s.fill_default(fi, resolve(f.def, valsort));
        }
        s.validate_total();
        return s;
    }

    bool at_carrier_or_functions() const {
        if (at(Tok::KwPrimaryCarrier) || at(Tok::KwSecondaryCarrier)) return true;
        return at(Tok::Ident) && peek().text == "functions" && at(Tok::Colon, 1);
    }

    // --- derivations ---

    Derivation parse_derivation_file() {
        Derivation d;
        parse_signature_block(d.ctx);
        Scope scope;
        if (at_section("hypotheses")) {
            eat_section("hypotheses");
            while (!at_section("derivation")) {
                Formula f = parse_formula(d.ctx, scope);
                check_formula(f, d.ctx);
                d.hypotheses.push_back(std::move(f));
            }
        }
        eat_section("derivation");
        while (at(Tok::Number)) {
            DerivationLine line;
            line.number = std::stoi(next().text);
            expect(Tok::Dot, "'.'");
            line.formula = parse_formula(d.ctx, scope);
            check_formula(line.formula, d.ctx);
            expect(Tok::Semi, "';'");
            line.just = parse_justification(d.ctx, scope);
            d.lines.push_back(std::move(line));
        }
        expect_eof();
        return d;
    }

    Justification parse_justification(const SigContext& ctx, Scope& scope) {
        Justification j;
        Token kw = expect(Tok::Ident, "'hyp', 'axiom' or 'rule'");
        if (kw.text == "hyp") {
            j.kind = Justification::Kind::Hypothesis;
            return j;
        }
        if (kw.text == "axiom") {
            j.kind = Justification::Kind::Axiom;
        } else if (kw.text == "rule") {
            j.kind = Justification::Kind::Rule;
        } else {
            fail("expected 'hyp', 'axiom' or 'rule'");
        }
        j.id = expect(Tok::Ident, "a schema or rule id").text;
        if (j.kind == Justification::Kind::Rule) {
            expect_word("from");
            j.premises.push_back(std::stoi(expect(Tok::Number, "a line number").text));
            while (accept(Tok::Comma))
                j.premises.push_back(std::stoi(expect(Tok::Number, "a line number").text));
        }
        // bindings
        while (at(Tok::Ident) && at(Tok::Assign, 1) && peek().text != "cert") {
            std::string name = next().text;
            next();  // :=
            parse_binding_value(ctx, scope, j, name);
            accept(Tok::Comma);
        }
        if (at(Tok::Ident) && peek().text == "cert") {
            next();
            Token what = expect(Tok::Ident, "'axiomatic' or 'states'");
            if (what.text == "axiomatic") {
                j.cert.kind = Certificate::Kind::Axiomatic;
            } else if (what.text == "states") {
                j.cert.kind = Certificate::Kind::States;
                j.cert.state_files.push_back(expect(Tok::String, "a state file name").text);
                while (accept(Tok::Comma))
                    j.cert.state_files.push_back(expect(Tok::String, "a state file name").text);
            } else {
                fail("expected 'axiomatic' or 'states'");
            }
        }
        return j;
    }

    void parse_binding_value(const SigContext& ctx, Scope& scope, Justification& j,
                             const std::string& name) {
        MetaVar::Kind kind = binding_kind(j.id, name);
        switch (kind) {
            case MetaVar::Kind::FormulaK: {
                Formula f = parse_formula(ctx, scope);
                check_formula(f, ctx);
                j.inst.formulas.emplace(name, std::move(f));
                return;
            }
            case MetaVar::Kind::TermK:
                j.inst.terms.emplace(name, parse_term(ctx, scope));
                return;
            case MetaVar::Kind::RuleK: {
                Rule r = parse_rule_ast(ctx, scope);
                j.inst.rules.emplace(name, std::move(r));
                return;
            }
            case MetaVar::Kind::VarK: {
                VarRef v;
                if (at(Tok::Ident)) v = {next().text, VarSort::Ind1};
                else if (at(Tok::Var2)) v = {next().text, VarSort::Ind2};
                else if (at(Tok::PVar1)) v = {next().text, VarSort::Pred1};
                else if (at(Tok::PVar2)) v = {next().text, VarSort::Pred2};
                else fail("expected a variable");
                j.inst.vars.emplace(name, v);
                return;
            }
            case MetaVar::Kind::FnK:
                j.inst.funcs.emplace(name, expect(Tok::Ident, "a function name").text);
                return;
        }
    }

    MetaVar::Kind binding_kind(const std::string& id, const std::string& name) {
        if (is_axiom_schema(id)) {
            for (const MetaVar& m : schema_metavars(id))
                if (m.name == name) return m.kind;
        }
        // Inference-rule bindings share a small fixed vocabulary.
        if (name == "phi" || name == "psi") return MetaVar::Kind::FormulaK;
        if (name == "t") return MetaVar::Kind::TermK;
        if (name == "var" || name == "y") return MetaVar::Kind::VarK;
        fail("unknown metavariable '" + name + "' for schema '" + id + "'");
    }

    // --- machines ---

    Machine parse_machine_file(bool require_machine_parts) {
        Machine m;
        parse_signature_block(m.ctx);
        bool have_rule = false, have_init = false;
        Scope scope;
        while (!at(Tok::Eof)) {
            if (at_section("rule")) {
                eat_section("rule");
                m.rule = parse_block(m.ctx, scope);
                have_rule = true;
                continue;
            }
            if (at_section("init")) {
                eat_section("init");
                m.init = parse_formula(m.ctx, scope);
                check_formula(m.init, m.ctx);
                have_init = true;
                continue;
            }
            if (at_section("final")) {
                eat_section("final");
                if (accept(Tok::KwNone)) {
                    m.final = std::nullopt;
                } else {
                    Formula f = parse_formula(m.ctx, scope);
                    check_formula(f, m.ctx);
                    m.final = std::move(f);
                }
                continue;
            }
            break;
        }
        expect_eof();
        if (!have_rule) fail("missing 'rule:' section");
        if (require_machine_parts) {
            if (!have_init) fail("missing 'init:' section");
            if (!is_closed(m.rule)) sort_fail("machine rule must be closed");
            if (!free_variables(m.init).empty())
                sort_fail("init predicate must be closed");
            if (m.final && !free_variables(*m.final).empty())
                sort_fail("final predicate must be closed");
        }
        return m;
    }

    Formula parse_formula_file(SigContext& ctx) {
        parse_signature_block(ctx);
        eat_section("formula");
        Scope scope;
        Formula f = parse_formula(ctx, scope);
        check_formula(f, ctx);
        expect_eof();
        return f;
    }

private:
    Lexer lexer_;
    const std::vector<Token>& toks_;
    size_t pos_ = 0;

public:
    friend State asmw::parse_state(const std::string&);
};

}  // namespace

State parse_state(const std::string& text) {
    Parser p(text);
    return p.parse_state_file();
}

ParsedRule parse_rule(const std::string& text) {
    Parser p(text);
    Machine m = p.parse_machine_file(false);
    return ParsedRule{std::move(m.ctx), std::move(m.rule)};
}

Machine parse_machine(const std::string& text) {
    Parser p(text);
    return p.parse_machine_file(true);
}

ParsedFormula parse_lformula(const std::string& text) {
    Parser p(text);
    ParsedFormula out;
    out.formula = p.parse_formula_file(out.ctx);
    return out;
}

Derivation parse_derivation(const std::string& text) {
    Parser p(text);
    return p.parse_derivation_file();
}

Formula parse_formula_text(const std::string& text, const SigContext& ctx) {
    Parser p(text);
    Parser::Scope scope;
    Formula f = p.parse_formula(ctx, scope);
    p.expect_eof();
    check_formula(f, ctx);
    return f;
}

Rule parse_rule_text(const std::string& text, const SigContext& ctx) {
    Parser p(text);
    Parser::Scope scope;
    Rule r = p.parse_block(ctx, scope);
    p.expect_eof();
    check_rule(r, ctx);
    return r;
}

Term parse_term_text(const std::string& text, const SigContext& ctx) {
    Parser p(text);
    Parser::Scope scope;
    Term t = p.parse_term(ctx, scope);
    p.expect_eof();
    return t;
}

namespace {

std::vector<std::vector<std::string>> parse_tuple_literals(const std::string& text, size_t arity) {
    Parser p(text);
    std::vector<std::vector<std::string>> out;
    p.expect(Tok::LBrace, "'{'");
    if (!p.at(Tok::RBrace)) {
        do {
            p.expect(Tok::LParen, "'('");
            std::vector<std::string> tup;
            do {
                if (!p.at(Tok::Ident) && !p.at(Tok::Number))
                    p.fail("expected a function or atom name");
                tup.push_back(p.next().text);
            } while (p.accept(Tok::Comma));
            p.expect(Tok::RParen, "')'");
            if (tup.size() != arity + 1)
                p.fail("expected a (function, argument, value" +
                       std::string(arity == 3 ? ", tag" : "") + ") tuple");
            out.push_back(std::move(tup));
        } while (p.accept(Tok::Comma));
    }
    p.expect(Tok::RBrace, "'}'");
    p.expect_eof();
    return out;
}

Value resolve_atom(const State& s, const std::string& name) {
    Value v = s.carriers().id(name);
    if (v == kNoValue) throw InputError("unknown atom '" + name + "'");
    return v;
}

}  // namespace

UpdateSet parse_update_set_literal(const std::string& text, const State& s) {
    std::vector<Update> ups;
    for (const auto& t : parse_tuple_literals(text, 2))
        ups.push_back(Update{s.sig().index_of(t[0]), resolve_atom(s, t[1]), resolve_atom(s, t[2])});
    return UpdateSet(std::move(ups));
}

TaggedUpdateSet parse_tagged_set_literal(const std::string& text, const State& s) {
    std::vector<TaggedUpdate> ups;
    for (const auto& t : parse_tuple_literals(text, 3))
        ups.push_back(TaggedUpdate{s.sig().index_of(t[0]), resolve_atom(s, t[1]),
                                   resolve_atom(s, t[2]), resolve_atom(s, t[3])});
    return TaggedUpdateSet(std::move(ups));
}

}  // namespace asmw
