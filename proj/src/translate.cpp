#include "asmw/translate.hpp"

#include "asmw/analysis.hpp"
#include "asmw/schemas.hpp"

namespace asmw {

namespace {

VarSort var_sort_of(TermSort s) { return s == TermSort::Point ? VarSort::Ind1 : VarSort::Ind2; }

// A term is simple when it denotes directly: a variable or an atom constant.
bool is_simple(const Term& t) { return t.kind != Term::Kind::App; }

// Canonical equality: lhs is a variable/constant, or an application whose
// arguments are all simple; rhs is simple.
bool eq_is_canonical(const Term& l, const Term& r) {
    if (!is_simple(r)) return false;
    if (is_simple(l)) return true;
    for (const Term& a : l.args)
        if (!is_simple(a)) return false;
    return true;
}

class Flattener {
public:
    Flattener(const SigContext& ctx, FreshGen& fresh) : ctx_(ctx), fresh_(fresh) {}

    Formula run(const Formula& f) {
        switch (f.kind) {
            case Formula::Kind::Eq: {
                Term l = f.lhs, r = f.rhs;
                if (is_simple(l) && !is_simple(r)) std::swap(l, r);
                if (eq_is_canonical(l, r)) return f_eq(l, r);
                return flatten_eq(l, r);
            }
            case Formula::Kind::Not: {
                Formula out = f;
                out.kids[0] = run(f.kids[0]);
                return out;
            }
            case Formula::Kind::And: {
                Formula out = f;
                out.kids[0] = run(f.kids[0]);
                out.kids[1] = run(f.kids[1]);
                return out;
            }
            case Formula::Kind::Forall: {
                Formula out = f;
                out.kids[0] = run(f.kids[0]);
                return out;
            }
            case Formula::Kind::Mem1:
            case Formula::Kind::Mem2:
                return flatten_mem(f);
            case Formula::Kind::Upd:
                return f;  // rules are rewritten by upd-elimination, not here
            case Formula::Kind::Modal: {
                Formula out = f;
                out.kids[0] = run(f.kids[0]);
                return out;
            }
        }
        throw SortError("bad formula");
    }

private:
    // s = t with at least one compound side; produce exists-bound simple forms.
    Formula flatten_eq(const Term& l, const Term& r) {
        // l is the complex side (an App), r may still be an App too.
        std::vector<std::pair<std::string, VarSort>> binders;
        std::vector<Formula> conj;
        Term ls = name_subterm(l, binders, conj, /*keep_head=*/true);
        Term rs = name_subterm(r, binders, conj, /*keep_head=*/false);
        conj.push_back(f_eq(ls, rs));
        Formula body = conj[0];
        for (size_t i = 1; i < conj.size(); ++i) body = f_and(std::move(body), std::move(conj[i]));
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
            body = f_exists(it->first, it->second, std::move(body));
        return body;
    }

    // Returns a simple term equal to `t`, emitting bindings fresh_var = sub
    // into conj. keep_head leaves the outermost application in place (its
    // arguments still get named).
    Term name_subterm(const Term& t, std::vector<std::pair<std::string, VarSort>>& binders,
                      std::vector<Formula>& conj, bool keep_head) {
        if (is_simple(t)) return t;
        Term app = t;
        for (Term& a : app.args) a = name_subterm(a, binders, conj, false);
        if (keep_head) return app;
        VarSort vs = var_sort_of(sort_of(t, ctx_));
        std::string v = fresh_.fresh(vs == VarSort::Ind1 ? "fx" : "fa");
        binders.push_back({v, vs});
        conj.push_back(f_eq(app, Term::var(v, vs)));
        return Term::var(v, vs);
    }

    Formula flatten_mem(const Formula& f) {
        bool all_simple = true;
        for (const Term& t : f.terms)
            if (!is_simple(t)) all_simple = false;
        if (all_simple) return f;
        std::vector<std::pair<std::string, VarSort>> binders;
        std::vector<Formula> conj;
        Formula atom = f;
        for (Term& t : atom.terms) t = name_subterm(t, binders, conj, false);
        conj.push_back(std::move(atom));
        Formula body = conj[0];
        for (size_t i = 1; i < conj.size(); ++i) body = f_and(std::move(body), std::move(conj[i]));
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
            body = f_exists(it->first, it->second, std::move(body));
        return body;
    }

    const SigContext& ctx_;
    FreshGen& fresh_;
};

class UpdEliminator {
public:
    UpdEliminator(const SigContext& ctx, FreshGen& fresh) : ctx_(ctx), fresh_(fresh) {}

    Formula run(const Formula& f) {
        switch (f.kind) {
            case Formula::Kind::Eq:
            case Formula::Kind::Mem1:
            case Formula::Kind::Mem2:
                return f;
            case Formula::Kind::Upd: {
                Formula rhs = upd_rhs(*f.rule, f.var, ctx_, fresh_);
                return run(rhs);  // sub-rules are strictly smaller
            }
            default: {
                Formula out = f;
                for (Formula& k : out.kids) k = run(k);
                return out;
            }
        }
    }

private:
    const SigContext& ctx_;
    FreshGen& fresh_;
};

class ModalEliminator {
public:
    ModalEliminator(const SigContext& ctx, FreshGen& fresh) : ctx_(ctx), fresh_(fresh) {}

    Formula run(const Formula& f) {
        switch (f.kind) {
            case Formula::Kind::Eq:
            case Formula::Kind::Mem1:
            case Formula::Kind::Mem2:
                return f;
            case Formula::Kind::Upd:
                throw SortError("modal elimination requires an upd-free formula");
            case Formula::Kind::Modal: {
                Formula body = run(f.kids[0]);  // innermost first
                return eliminate(f.var, body);
            }
            default: {
                Formula out = f;
                for (Formula& k : out.kids) k = run(k);
                return out;
            }
        }
    }

private:
    Formula guarded(const std::string& x, Formula f) {
        return f_implies(con_uset_formula(x, ctx_, fresh_), std::move(f));
    }

    // [x]psi for modality-free psi with flattened atoms.
    Formula eliminate(const std::string& x, const Formula& psi) {
        switch (psi.kind) {
            case Formula::Kind::Eq: {
                // dynamic-head equation f(v) = w gets the lookup clause;
                // everything else is invariant under the update.
                if (psi.lhs.kind == Term::Kind::App) {
                    const FunctionDecl& d = ctx_.sig.at(psi.lhs.name);
                    if (d.dynamic) {
                        const Term& v = psi.lhs.args[0];
                        const Term& w = psi.rhs;
                        VarSort vals = var_sort_of(Signature::value_sort(d.kind));
                        std::string zv = fresh_.fresh("z");
                        Formula updated = f_mem1(x, psi.lhs.name, v, w);
                        Formula untouched =
                            f_and(f_forall(zv, vals,
                                           f_not(f_mem1(x, psi.lhs.name, v, Term::var(zv, vals)))),
                                  psi);
                        return guarded(x, f_or(std::move(updated), std::move(untouched)));
                    }
                }
                return guarded(x, psi);
            }
            case Formula::Kind::Mem1:
            case Formula::Kind::Mem2:
                return guarded(x, psi);
            case Formula::Kind::Not:
                return guarded(x, f_not(eliminate(x, psi.kids[0])));
            case Formula::Kind::And:
                return f_and(eliminate(x, psi.kids[0]), eliminate(x, psi.kids[1]));
            case Formula::Kind::Forall: {
                if (psi.var == x && psi.var_sort == VarSort::Pred1) {
                    // [X]∀X(..): rename the bound variable before commuting.
                    std::string fresh_name = fresh_.fresh("X");
                    Formula renamed = substitute_pred(psi.kids[0], {psi.var, psi.var_sort}, fresh_name);
                    return f_forall(fresh_name, psi.var_sort, eliminate(x, renamed));
                }
                return f_forall(psi.var, psi.var_sort, eliminate(x, psi.kids[0]));
            }
            default:
                throw SortError("modal elimination saw an unexpected subformula");
        }
    }

    const SigContext& ctx_;
    FreshGen& fresh_;
};

bool has_kind(const Formula& f, Formula::Kind k) {
    if (f.kind == k) return true;
    for (const Formula& kid : f.kids)
        if (has_kind(kid, k)) return true;
    return false;
}

}  // namespace

Formula flatten_atoms(const Formula& f, const SigContext& ctx) {
    FreshGen fresh;
    fresh.reserve(f);
    for (const FunctionDecl& d : ctx.sig.decls()) fresh.reserve_name(d.name);
    for (const auto& [name, sort] : ctx.atoms) fresh.reserve_name(name);
    return Flattener(ctx, fresh).run(f);
}

Formula eliminate_upd(const Formula& f, const SigContext& ctx) {
    FreshGen fresh;
    fresh.reserve(f);
    for (const FunctionDecl& d : ctx.sig.decls()) fresh.reserve_name(d.name);
    for (const auto& [name, sort] : ctx.atoms) fresh.reserve_name(name);
    return UpdEliminator(ctx, fresh).run(f);
}

Formula eliminate_modal(const Formula& f, const SigContext& ctx) {
    FreshGen fresh;
    fresh.reserve(f);
    for (const FunctionDecl& d : ctx.sig.decls()) fresh.reserve_name(d.name);
    for (const auto& [name, sort] : ctx.atoms) fresh.reserve_name(name);
    return ModalEliminator(ctx, fresh).run(f);
}

bool is_lin(const Formula& f) {
    return !has_kind(f, Formula::Kind::Upd) && !has_kind(f, Formula::Kind::Modal);
}

bool is_flat(const Formula& f) {
    switch (f.kind) {
        case Formula::Kind::Eq:
            return eq_is_canonical(f.lhs, f.rhs) || eq_is_canonical(f.rhs, f.lhs);
        case Formula::Kind::Mem1:
        case Formula::Kind::Mem2:
            for (const Term& t : f.terms)
                if (!is_simple(t)) return false;
            return true;
        case Formula::Kind::Upd:
            return false;
        default:
            for (const Formula& k : f.kids)
                if (!is_flat(k)) return false;
            return true;
    }
}

Formula to_lin(const Formula& f, const SigContext& ctx, const Caps& caps,
               TranslateSummary* summary) {
    TranslateSummary local;
    local.nodes_in = node_count(f);
    Formula cur = f;
    int iterations = 0;
    // upd-elimination introduces fresh modal atoms ([Y1]upd(r2,Y2) in the
    // seq axiom) but only over strictly smaller rules, so the loop reaches a
    // fixpoint.
    while (!is_lin(cur) || !is_flat(cur)) {
        ++iterations;
        if (iterations > 64) throw ResourceLimit("translation did not reach a fixpoint");
        cur = flatten_atoms(cur, ctx);
        if (has_kind(cur, Formula::Kind::Upd)) cur = eliminate_upd(cur, ctx);
        cur = flatten_atoms(cur, ctx);
        if (has_kind(cur, Formula::Kind::Modal)) cur = eliminate_modal(cur, ctx);
        if (node_count(cur) > caps.max_formula_nodes)
            throw ResourceLimit("translated formula exceeds the node cap");
    }
    local.iterations = iterations;
    local.nodes_out = node_count(cur);
    if (summary) *summary = local;
    return cur;
}

}  // namespace asmw
