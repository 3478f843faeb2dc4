#include "asmw/analysis.hpp"

#include <functional>

namespace asmw {

TermSort sort_of(const Term& t, const SigContext& ctx) {
    switch (t.kind) {
        case Term::Kind::Var:
            return t.var_sort == VarSort::Ind1 ? TermSort::Point : TermSort::Algorithmic;
        case Term::Kind::Atom:
            return t.atom_sort;
        case Term::Kind::App: {
            const FunctionDecl& d = ctx.sig.at(t.name);
            if (static_cast<int>(t.args.size()) != d.arity)
                throw SortError("function '" + t.name + "' expects " + std::to_string(d.arity) +
                                " argument(s), got " + std::to_string(t.args.size()));
            TermSort want = Signature::arg_sort(d.kind);
            for (const Term& a : t.args) {
                if (sort_of(a, ctx) != want)
                    throw SortError("argument of '" + t.name + "' has the wrong sort");
            }
            return Signature::value_sort(d.kind);
        }
    }
    throw SortError("bad term");
}

bool is_first_order(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Eq: return true;
        case Formula::Kind::Not:
        case Formula::Kind::And: {
            for (const Formula& k : f.kids)
                if (!is_first_order(k)) return false;
            return true;
        }
        case Formula::Kind::Forall:
            if (f.var_sort == VarSort::Pred1 || f.var_sort == VarSort::Pred2) return false;
            return is_first_order(f.kids[0]);
        default:
            return false;
    }
}

void check_formula(const Formula& f, const SigContext& ctx) {
    switch (f.kind) {
        case Formula::Kind::Eq: {
            TermSort a = sort_of(f.lhs, ctx);
            TermSort b = sort_of(f.rhs, ctx);
            if (a != b) throw SortError("equality between terms of different sorts");
            return;
        }
        case Formula::Kind::Not:
        case Formula::Kind::And:
        case Formula::Kind::Forall:
            for (const Formula& k : f.kids) check_formula(k, ctx);
            return;
        case Formula::Kind::Mem1:
        case Formula::Kind::Mem2: {
            const FunctionDecl& d = ctx.sig.at(f.fn);
            if (!d.dynamic)
                throw SortError("membership atom over static function '" + f.fn + "'");
            for (const Term& t : f.terms) (void)sort_of(t, ctx);
            if (f.kind == Formula::Kind::Mem2 &&
                sort_of(f.terms[2], ctx) != TermSort::Point)
                throw SortError("last argument of a tagged membership atom must be sort-1");
            return;
        }
        case Formula::Kind::Upd:
            check_rule(*f.rule, ctx);
            return;
        case Formula::Kind::Modal:
            check_formula(f.kids[0], ctx);
            return;
    }
}

void check_rule(const Rule& r, const SigContext& ctx) {
    switch (r.kind) {
        case Rule::Kind::UpdatePrimary:
        case Rule::Kind::UpdateSecondary:
        case Rule::Kind::UpdateBridge: {
            const FunctionDecl& d = ctx.sig.at(r.fn);
            if (!d.dynamic) throw SortError("update target '" + r.fn + "' is static");
            FuncKind want = r.kind == Rule::Kind::UpdatePrimary  ? FuncKind::Primary
                           : r.kind == Rule::Kind::UpdateSecondary ? FuncKind::Secondary
                                                                   : FuncKind::Bridge;
            if (d.kind != want) throw SortError("update rule kind does not match '" + r.fn + "'");
            if (sort_of(r.arg, ctx) != Signature::arg_sort(d.kind))
                throw SortError("argument of update to '" + r.fn + "' has the wrong sort");
            if (sort_of(r.rhs, ctx) != Signature::value_sort(d.kind))
                throw SortError("value of update to '" + r.fn + "' has the wrong sort");
            return;
        }
        case Rule::Kind::If:
            if (!is_first_order(r.guard)) throw SortError("rule guard must be first-order");
            check_formula(r.guard, ctx);
            check_rule(r.kids[0], ctx);
            return;
        case Rule::Kind::Forall:
        case Rule::Kind::Choose:
        case Rule::Kind::ChooseU:
            if (!is_first_order(r.guard)) throw SortError("rule guard must be first-order");
            check_formula(r.guard, ctx);
            check_rule(r.kids[0], ctx);
            return;
        case Rule::Kind::Par:
        case Rule::Kind::Seq:
            check_rule(r.kids[0], ctx);
            check_rule(r.kids[1], ctx);
            return;
    }
}

// --- free variables ---------------------------------------------------------

namespace {

void fv_term(const Term& t, std::set<VarRef>& out) {
    if (t.kind == Term::Kind::Var) out.insert({t.name, t.var_sort});
    for (const Term& a : t.args) fv_term(a, out);
}

void fv_formula(const Formula& f, std::set<VarRef>& out);

void fv_rule(const Rule& r, std::set<VarRef>& out) {
    switch (r.kind) {
        case Rule::Kind::UpdatePrimary:
        case Rule::Kind::UpdateSecondary:
        case Rule::Kind::UpdateBridge:
            fv_term(r.arg, out);
            fv_term(r.rhs, out);
            return;
        case Rule::Kind::If: {
            fv_formula(r.guard, out);
            fv_rule(r.kids[0], out);
            return;
        }
        case Rule::Kind::Forall:
        case Rule::Kind::Choose:
        case Rule::Kind::ChooseU: {
            std::set<VarRef> inner;
            fv_formula(r.guard, inner);
            fv_rule(r.kids[0], inner);
            inner.erase({r.var, r.binder_sort()});
            out.insert(inner.begin(), inner.end());
            return;
        }
        case Rule::Kind::Par:
        case Rule::Kind::Seq:
            fv_rule(r.kids[0], out);
            fv_rule(r.kids[1], out);
            return;
    }
}

void fv_formula(const Formula& f, std::set<VarRef>& out) {
    switch (f.kind) {
        case Formula::Kind::Eq:
            fv_term(f.lhs, out);
            fv_term(f.rhs, out);
            return;
        case Formula::Kind::Not:
        case Formula::Kind::And:
            for (const Formula& k : f.kids) fv_formula(k, out);
            return;
        case Formula::Kind::Forall: {
            std::set<VarRef> inner;
            fv_formula(f.kids[0], inner);
            inner.erase({f.var, f.var_sort});
            out.insert(inner.begin(), inner.end());
            return;
        }
        case Formula::Kind::Mem1:
        case Formula::Kind::Mem2:
            out.insert({f.var, f.var_sort});
            for (const Term& t : f.terms) fv_term(t, out);
            return;
        case Formula::Kind::Upd:
            fv_rule(*f.rule, out);
            out.insert({f.var, VarSort::Pred1});
            return;
        case Formula::Kind::Modal:
            out.insert({f.var, VarSort::Pred1});
            fv_formula(f.kids[0], out);
            return;
    }
}

}  // namespace

std::set<VarRef> free_variables(const Term& t) {
    std::set<VarRef> out;
    fv_term(t, out);
    return out;
}
std::set<VarRef> free_variables(const Formula& f) {
    std::set<VarRef> out;
    fv_formula(f, out);
    return out;
}
std::set<VarRef> free_variables(const Rule& r) {
    std::set<VarRef> out;
    fv_rule(r, out);
    return out;
}
bool is_closed(const Rule& r) { return free_variables(r).empty(); }

// --- static / pure -----------------------------------------------------------

bool is_static_term(const Term& t, const SigContext& ctx) {
    if (t.kind == Term::Kind::App) {
        if (ctx.sig.at(t.name).dynamic) return false;
        for (const Term& a : t.args)
            if (!is_static_term(a, ctx)) return false;
    }
    return true;
}

namespace {

bool rule_static(const Rule& r, const SigContext& ctx);

bool formula_static(const Formula& f, const SigContext& ctx) {
    switch (f.kind) {
        case Formula::Kind::Eq:
            return is_static_term(f.lhs, ctx) && is_static_term(f.rhs, ctx);
        case Formula::Kind::Not:
        case Formula::Kind::And:
        case Formula::Kind::Forall:
        case Formula::Kind::Modal:
            for (const Formula& k : f.kids)
                if (!formula_static(k, ctx)) return false;
            return true;
        case Formula::Kind::Mem1:
        case Formula::Kind::Mem2: {
            if (ctx.sig.at(f.fn).dynamic) return false;
            for (const Term& t : f.terms)
                if (!is_static_term(t, ctx)) return false;
            return true;
        }
        case Formula::Kind::Upd:
            return rule_static(*f.rule, ctx);
    }
    return false;
}

bool rule_static(const Rule& r, const SigContext& ctx) {
    if (r.is_update()) return false;  // update targets are dynamic
    if (r.kind == Rule::Kind::Par || r.kind == Rule::Kind::Seq)
        return rule_static(r.kids[0], ctx) && rule_static(r.kids[1], ctx);
    return formula_static(r.guard, ctx) && rule_static(r.kids[0], ctx);
}

}  // namespace

bool is_static(const Formula& f, const SigContext& ctx) { return formula_static(f, ctx); }

bool is_pure(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Eq: return true;
        case Formula::Kind::Not:
        case Formula::Kind::And:
            for (const Formula& k : f.kids)
                if (!is_pure(k)) return false;
            return true;
        case Formula::Kind::Forall:
            if (f.var_sort != VarSort::Ind1 && f.var_sort != VarSort::Ind2) return false;
            return is_pure(f.kids[0]);
        default:
            return false;
    }
}

// --- substitution ------------------------------------------------------------

Term substitute(const Term& in, const VarRef& x, const Term& t) {
    if (in.kind == Term::Kind::Var && in.name == x.name && in.var_sort == x.sort) return t;
    Term out = in;
    for (Term& a : out.args) a = substitute(a, x, t);
    return out;
}

namespace {

bool binder_collides(const std::string& var, VarSort sort, const VarRef& x,
                     const std::set<VarRef>& tfv) {
    // Binder shadows x: substitution stops. Binder captures a free var of t:
    // the substitution is undefined.
    if (tfv.count({var, sort}))
        throw IllFormedInstantiation("substitution would capture variable '" +
                                     std::string(sigil(sort)) + var + "'");
    (void)x;
    return false;
}

Rule subst_rule(const Rule& in, const VarRef& x, const Term& t, const std::set<VarRef>& tfv);

Formula subst_formula(const Formula& in, const VarRef& x, const Term& t,
                      const std::set<VarRef>& tfv) {
    Formula out = in;
    switch (in.kind) {
        case Formula::Kind::Eq:
            out.lhs = substitute(in.lhs, x, t);
            out.rhs = substitute(in.rhs, x, t);
            return out;
        case Formula::Kind::Not:
        case Formula::Kind::And:
            for (size_t i = 0; i < in.kids.size(); ++i)
                out.kids[i] = subst_formula(in.kids[i], x, t, tfv);
            return out;
        case Formula::Kind::Forall:
            if (in.var == x.name && in.var_sort == x.sort) return out;  // shadowed
            binder_collides(in.var, in.var_sort, x, tfv);
            out.kids[0] = subst_formula(in.kids[0], x, t, tfv);
            return out;
        case Formula::Kind::Mem1:
        case Formula::Kind::Mem2:
            for (size_t i = 0; i < in.terms.size(); ++i)
                out.terms[i] = substitute(in.terms[i], x, t);
            return out;
        case Formula::Kind::Upd:
            out.rule = std::make_shared<const Rule>(subst_rule(*in.rule, x, t, tfv));
            return out;
        case Formula::Kind::Modal:
            out.kids[0] = subst_formula(in.kids[0], x, t, tfv);
            return out;
    }
    return out;
}

Rule subst_rule(const Rule& in, const VarRef& x, const Term& t, const std::set<VarRef>& tfv) {
    Rule out = in;
    switch (in.kind) {
        case Rule::Kind::UpdatePrimary:
        case Rule::Kind::UpdateSecondary:
        case Rule::Kind::UpdateBridge:
            out.arg = substitute(in.arg, x, t);
            out.rhs = substitute(in.rhs, x, t);
            return out;
        case Rule::Kind::If:
            out.guard = subst_formula(in.guard, x, t, tfv);
            out.kids[0] = subst_rule(in.kids[0], x, t, tfv);
            return out;
        case Rule::Kind::Forall:
        case Rule::Kind::Choose:
        case Rule::Kind::ChooseU:
            if (in.var == x.name && in.binder_sort() == x.sort) return out;  // shadowed
            binder_collides(in.var, in.binder_sort(), x, tfv);
            out.guard = subst_formula(in.guard, x, t, tfv);
            out.kids[0] = subst_rule(in.kids[0], x, t, tfv);
            return out;
        case Rule::Kind::Par:
        case Rule::Kind::Seq:
            out.kids[0] = subst_rule(in.kids[0], x, t, tfv);
            out.kids[1] = subst_rule(in.kids[1], x, t, tfv);
            return out;
    }
    return out;
}

}  // namespace

Formula substitute(const Formula& in, const VarRef& x, const Term& t) {
    return subst_formula(in, x, t, free_variables(t));
}
Rule substitute(const Rule& in, const VarRef& x, const Term& t) {
    return subst_rule(in, x, t, free_variables(t));
}

Formula substitute_pred(const Formula& in, const VarRef& x, const std::string& y) {
    Formula out = in;
    switch (in.kind) {
        case Formula::Kind::Eq:
            return out;
        case Formula::Kind::Not:
        case Formula::Kind::And:
        case Formula::Kind::Modal:
            for (size_t i = 0; i < in.kids.size(); ++i)
                out.kids[i] = substitute_pred(in.kids[i], x, y);
            if (in.kind == Formula::Kind::Modal && in.var == x.name && x.sort == VarSort::Pred1)
                out.var = y;
            return out;
        case Formula::Kind::Forall:
            if (in.var == x.name && in.var_sort == x.sort) return out;
            if (in.var == y && in.var_sort == x.sort)
                throw IllFormedInstantiation("substitution would capture variable '" + y + "'");
            out.kids[0] = substitute_pred(in.kids[0], x, y);
            return out;
        case Formula::Kind::Mem1:
        case Formula::Kind::Mem2:
            if (in.var == x.name && in.var_sort == x.sort) out.var = y;
            return out;
        case Formula::Kind::Upd:
            if (in.var == x.name && x.sort == VarSort::Pred1) out.var = y;
            return out;
    }
    return out;
}

// --- alpha equivalence --------------------------------------------------------

namespace {

struct AlphaEnv {
    std::vector<std::pair<VarRef, VarRef>> pairs;

    bool match(const VarRef& a, const VarRef& b) const {
        for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
            if (it->first == a) return it->second == b;
            if (it->second == b) return false;
        }
        return a == b;  // both free
    }
};

bool alpha_term(const Term& a, const Term& b, const AlphaEnv& env) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Term::Kind::Var:
            return a.var_sort == b.var_sort && env.match({a.name, a.var_sort}, {b.name, b.var_sort});
        case Term::Kind::Atom:
            return a.name == b.name && a.atom_sort == b.atom_sort;
        case Term::Kind::App: {
            if (a.name != b.name || a.args.size() != b.args.size()) return false;
            for (size_t i = 0; i < a.args.size(); ++i)
                if (!alpha_term(a.args[i], b.args[i], env)) return false;
            return true;
        }
    }
    return false;
}

bool alpha_rule(const Rule& a, const Rule& b, AlphaEnv& env);

bool alpha_formula(const Formula& a, const Formula& b, AlphaEnv& env) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Formula::Kind::Eq:
            return alpha_term(a.lhs, b.lhs, env) && alpha_term(a.rhs, b.rhs, env);
        case Formula::Kind::Not:
        case Formula::Kind::And: {
            if (a.kids.size() != b.kids.size()) return false;
            for (size_t i = 0; i < a.kids.size(); ++i)
                if (!alpha_formula(a.kids[i], b.kids[i], env)) return false;
            return true;
        }
        case Formula::Kind::Forall: {
            if (a.var_sort != b.var_sort) return false;
            env.pairs.push_back({{a.var, a.var_sort}, {b.var, b.var_sort}});
            bool ok = alpha_formula(a.kids[0], b.kids[0], env);
            env.pairs.pop_back();
            return ok;
        }
        case Formula::Kind::Mem1:
        case Formula::Kind::Mem2: {
            if (a.fn != b.fn || a.terms.size() != b.terms.size()) return false;
            if (!env.match({a.var, a.var_sort}, {b.var, b.var_sort})) return false;
            for (size_t i = 0; i < a.terms.size(); ++i)
                if (!alpha_term(a.terms[i], b.terms[i], env)) return false;
            return true;
        }
        case Formula::Kind::Upd:
            if (!env.match({a.var, VarSort::Pred1}, {b.var, VarSort::Pred1})) return false;
            return alpha_rule(*a.rule, *b.rule, env);
        case Formula::Kind::Modal:
            if (!env.match({a.var, VarSort::Pred1}, {b.var, VarSort::Pred1})) return false;
            return alpha_formula(a.kids[0], b.kids[0], env);
    }
    return false;
}

bool alpha_rule(const Rule& a, const Rule& b, AlphaEnv& env) {
    if (a.kind != b.kind) return false;
    if (a.is_update())
        return a.fn == b.fn && alpha_term(a.arg, b.arg, env) && alpha_term(a.rhs, b.rhs, env);
    if (a.kind == Rule::Kind::Par || a.kind == Rule::Kind::Seq)
        return alpha_rule(a.kids[0], b.kids[0], env) && alpha_rule(a.kids[1], b.kids[1], env);
    if (a.kind == Rule::Kind::If)
        return alpha_formula(a.guard, b.guard, env) && alpha_rule(a.kids[0], b.kids[0], env);
    if (a.binder_sort() != b.binder_sort()) return false;
    env.pairs.push_back({{a.var, a.binder_sort()}, {b.var, b.binder_sort()}});
    bool ok = alpha_formula(a.guard, b.guard, env) && alpha_rule(a.kids[0], b.kids[0], env);
    env.pairs.pop_back();
    return ok;
}

}  // namespace

bool alpha_equal(const Formula& a, const Formula& b) {
    AlphaEnv env;
    return alpha_formula(a, b, env);
}

// --- misc ---------------------------------------------------------------------

size_t node_count(const Term& t) {
    size_t n = 1;
    for (const Term& a : t.args) n += node_count(a);
    return n;
}
size_t node_count(const Rule& r);
size_t node_count(const Formula& f) {
    size_t n = 1;
    if (f.kind == Formula::Kind::Eq) n += node_count(f.lhs) + node_count(f.rhs);
    for (const Formula& k : f.kids) n += node_count(k);
    for (const Term& t : f.terms) n += node_count(t);
    if (f.rule) n += node_count(*f.rule);
    return n;
}
size_t node_count(const Rule& r) {
    size_t n = 1;
    if (r.is_update()) n += node_count(r.arg) + node_count(r.rhs);
    if (r.kind == Rule::Kind::If || r.has_binder()) n += node_count(r.guard);
    for (const Rule& k : r.kids) n += node_count(k);
    return n;
}

void FreshGen::reserve(const Term& t) {
    if (t.kind == Term::Kind::Var) used_.insert(t.name);
    if (t.kind == Term::Kind::App || t.kind == Term::Kind::Atom) used_.insert(t.name);
    for (const Term& a : t.args) reserve(a);
}
void FreshGen::reserve(const Formula& f) {
    reserve(f.lhs);
    reserve(f.rhs);
    if (!f.var.empty()) used_.insert(f.var);
    if (!f.fn.empty()) used_.insert(f.fn);
    for (const Formula& k : f.kids) reserve(k);
    for (const Term& t : f.terms) reserve(t);
    if (f.rule) reserve(*f.rule);
}
void FreshGen::reserve(const Rule& r) {
    used_.insert(r.fn);
    reserve(r.arg);
    reserve(r.rhs);
    if (!r.var.empty()) used_.insert(r.var);
    if (r.kind == Rule::Kind::If || r.has_binder()) reserve(r.guard);
    for (const Rule& k : r.kids) reserve(k);
}
std::string FreshGen::fresh(const std::string& stem) {
    for (;;) {
        std::string candidate = stem + std::to_string(counter_++);
        if (used_.insert(candidate).second) return candidate;
    }
}

}  // namespace asmw
