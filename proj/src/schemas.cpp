#include "asmw/schemas.hpp"

#include <algorithm>

#include "asmw/analysis.hpp"

namespace asmw {

namespace {

VarSort var_sort_of(TermSort s) { return s == TermSort::Point ? VarSort::Ind1 : VarSort::Ind2; }

Formula conj_all(std::vector<Formula> fs) {
    if (fs.empty()) return f_tautology();
    Formula acc = std::move(fs[0]);
    for (size_t i = 1; i < fs.size(); ++i) acc = f_and(std::move(acc), std::move(fs[i]));
    return acc;
}

}  // namespace

Formula con_uset_formula(const std::string& x_var, const SigContext& ctx, FreshGen& fresh) {
    std::string xv = fresh.fresh("cx");
    std::string yv = fresh.fresh("cy");
    std::string zv = fresh.fresh("cz");
    std::vector<Formula> conj;
    for (const FunctionDecl& d : ctx.sig.decls()) {
        if (!d.dynamic) continue;
        VarSort arg = var_sort_of(Signature::arg_sort(d.kind));
        VarSort valso = var_sort_of(Signature::value_sort(d.kind));
        Term x = Term::var(xv, arg), y = Term::var(yv, valso), z = Term::var(zv, valso);
        Formula body = f_implies(
            f_and(f_mem1(x_var, d.name, x, y), f_mem1(x_var, d.name, x, z)), f_eq(y, z));
        conj.push_back(
            f_forall(xv, arg, f_forall(yv, valso, f_forall(zv, valso, std::move(body)))));
    }
    return conj_all(std::move(conj));
}

Formula empty_set_formula(const std::string& x_var, const SigContext& ctx, FreshGen& fresh) {
    std::string xv = fresh.fresh("ex");
    std::string yv = fresh.fresh("ey");
    std::vector<Formula> conj;
    for (const FunctionDecl& d : ctx.sig.decls()) {
        if (!d.dynamic) continue;
        VarSort arg = var_sort_of(Signature::arg_sort(d.kind));
        VarSort valso = var_sort_of(Signature::value_sort(d.kind));
        Term x = Term::var(xv, arg), y = Term::var(yv, valso);
        conj.push_back(f_forall(
            xv, arg, f_forall(yv, valso, f_not(f_mem1(x_var, d.name, x, y)))));
    }
    return conj_all(std::move(conj));
}

namespace {

// U1 for any of the three update forms: X contains exactly the one update.
Formula u1_rhs(const Rule& r, const std::string& x_var, const SigContext& ctx, FreshGen& fresh) {
    const FunctionDecl& d = ctx.sig.at(r.fn);
    VarSort arg = var_sort_of(Signature::arg_sort(d.kind));
    VarSort valso = var_sort_of(Signature::value_sort(d.kind));
    std::string xv = fresh.fresh("ux");
    std::string yv = fresh.fresh("uy");
    Term x = Term::var(xv, arg), y = Term::var(yv, valso);
    std::vector<Formula> conj;
    conj.push_back(f_mem1(x_var, r.fn, r.arg, r.rhs));
    conj.push_back(f_forall(
        xv, arg,
        f_forall(yv, valso,
                 f_implies(f_mem1(x_var, r.fn, x, y), f_and(f_eq(x, r.arg), f_eq(y, r.rhs))))));
    for (const FunctionDecl& other : ctx.sig.decls()) {
        if (!other.dynamic || other.name == r.fn) continue;
        VarSort oarg = var_sort_of(Signature::arg_sort(other.kind));
        VarSort oval = var_sort_of(Signature::value_sort(other.kind));
        Term ox = Term::var(xv, oarg), oy = Term::var(yv, oval);
        conj.push_back(f_forall(
            xv, oarg, f_forall(yv, oval, f_not(f_mem1(x_var, other.name, ox, oy)))));
    }
    return conj_all(std::move(conj));
}

Formula u2_rhs(const Rule& r, const std::string& x_var, const SigContext& ctx, FreshGen& fresh) {
    Formula then_branch = f_and(r.guard, f_upd(r.kids[0], x_var));
    Formula else_branch = f_and(f_not(r.guard), empty_set_formula(x_var, ctx, fresh));
    return f_or(std::move(then_branch), std::move(else_branch));
}

// Per-function slice equivalence Y(f,y1,y2) <-> T(f,y1,y2,tag).
Formula slice_eq(const std::string& y_var, const std::string& t_var, const Term& tag,
                 const SigContext& ctx, FreshGen& fresh) {
    std::string y1 = fresh.fresh("sy");
    std::string y2 = fresh.fresh("sz");
    std::vector<Formula> conj;
    for (const FunctionDecl& d : ctx.sig.decls()) {
        if (!d.dynamic) continue;
        VarSort arg = var_sort_of(Signature::arg_sort(d.kind));
        VarSort valso = var_sort_of(Signature::value_sort(d.kind));
        Term a = Term::var(y1, arg), b = Term::var(y2, valso);
        conj.push_back(f_forall(
            y1, arg,
            f_forall(y2, valso,
                     f_iff(f_mem1(y_var, d.name, a, b), f_mem2(t_var, d.name, a, b, tag)))));
    }
    return conj_all(std::move(conj));
}

Formula slice_empty(const std::string& t_var, const Term& tag, const SigContext& ctx,
                    FreshGen& fresh) {
    std::string y1 = fresh.fresh("sy");
    std::string y2 = fresh.fresh("sz");
    std::vector<Formula> conj;
    for (const FunctionDecl& d : ctx.sig.decls()) {
        if (!d.dynamic) continue;
        VarSort arg = var_sort_of(Signature::arg_sort(d.kind));
        VarSort valso = var_sort_of(Signature::value_sort(d.kind));
        Term a = Term::var(y1, arg), b = Term::var(y2, valso);
        conj.push_back(f_forall(
            y1, arg, f_forall(y2, valso, f_not(f_mem2(t_var, d.name, a, b, tag)))));
    }
    return conj_all(std::move(conj));
}

Formula projection_eq(const std::string& x_var, const std::string& t_var, const SigContext& ctx,
                      FreshGen& fresh) {
    std::string x1 = fresh.fresh("px");
    std::string x2 = fresh.fresh("py");
    std::string x3 = fresh.fresh("pt");
    std::vector<Formula> conj;
    for (const FunctionDecl& d : ctx.sig.decls()) {
        if (!d.dynamic) continue;
        VarSort arg = var_sort_of(Signature::arg_sort(d.kind));
        VarSort valso = var_sort_of(Signature::value_sort(d.kind));
        Term a = Term::var(x1, arg), b = Term::var(x2, valso), tag = Term::var(x3, VarSort::Ind1);
        Formula rhs = f_exists(x3, VarSort::Ind1, f_mem2(t_var, d.name, a, b, tag));
        conj.push_back(f_forall(
            x1, arg,
            f_forall(x2, valso, f_iff(f_mem1(x_var, d.name, a, b), std::move(rhs)))));
    }
    return conj_all(std::move(conj));
}

Formula u3_rhs(const Rule& r, const std::string& x_var, const SigContext& ctx, FreshGen& fresh) {
    std::string t_var = fresh.fresh("T");
    std::string y_var = fresh.fresh("Y");
    Term tag = Term::var(r.var, VarSort::Ind1);
    Formula some_member =
        f_exists(y_var, VarSort::Pred1,
                 f_and(f_upd(r.kids[0], y_var), slice_eq(y_var, t_var, tag, ctx, fresh)));
    Formula body = f_and(f_implies(r.guard, std::move(some_member)),
                         f_implies(f_not(r.guard), slice_empty(t_var, tag, ctx, fresh)));
    Formula all_x = f_forall(r.var, VarSort::Ind1, std::move(body));
    return f_exists(t_var, VarSort::Pred2,
                    f_and(std::move(all_x), projection_eq(x_var, t_var, ctx, fresh)));
}

Formula union_link(const std::string& x_var, const std::string& y1_var,
                   const std::string& y2_var, const SigContext& ctx, FreshGen& fresh) {
    std::string xv = fresh.fresh("lx");
    std::string yv = fresh.fresh("ly");
    std::vector<Formula> conj;
    for (const FunctionDecl& d : ctx.sig.decls()) {
        if (!d.dynamic) continue;
        VarSort arg = var_sort_of(Signature::arg_sort(d.kind));
        VarSort valso = var_sort_of(Signature::value_sort(d.kind));
        Term a = Term::var(xv, arg), b = Term::var(yv, valso);
        Formula rhs = f_or(f_mem1(y1_var, d.name, a, b), f_mem1(y2_var, d.name, a, b));
        conj.push_back(f_forall(
            xv, arg, f_forall(yv, valso, f_iff(f_mem1(x_var, d.name, a, b), std::move(rhs)))));
    }
    return conj_all(std::move(conj));
}

Formula u4_rhs(const Rule& r, const std::string& x_var, const SigContext& ctx, FreshGen& fresh) {
    std::string y1 = fresh.fresh("Y");
    std::string y2 = fresh.fresh("Y");
    Formula link = union_link(x_var, y1, y2, ctx, fresh);
    Formula inner = f_and(f_upd(r.kids[1], y2), std::move(link));
    return f_exists(y1, VarSort::Pred1,
                    f_and(f_upd(r.kids[0], y1), f_exists(y2, VarSort::Pred1, std::move(inner))));
}

Formula u56_rhs(const Rule& r, const std::string& x_var) {
    VarSort vs = r.kind == Rule::Kind::ChooseU ? VarSort::Ind2 : VarSort::Ind1;
    return f_exists(r.var, vs, f_and(r.guard, f_upd(r.kids[0], x_var)));
}

// seq merge linkage: X(f,x,y) <-> ((Y1(f,x,y) ∧ ∀z ¬Y2(f,x,z)) ∨ Y2(f,x,y))
Formula merge_link(const std::string& x_var, const std::string& y1_var,
                   const std::string& y2_var, const SigContext& ctx, FreshGen& fresh) {
    std::string xv = fresh.fresh("mx");
    std::string yv = fresh.fresh("my");
    std::string zv = fresh.fresh("mz");
    std::vector<Formula> conj;
    for (const FunctionDecl& d : ctx.sig.decls()) {
        if (!d.dynamic) continue;
        VarSort arg = var_sort_of(Signature::arg_sort(d.kind));
        VarSort valso = var_sort_of(Signature::value_sort(d.kind));
        Term a = Term::var(xv, arg), b = Term::var(yv, valso), z = Term::var(zv, valso);
        Formula survives =
            f_and(f_mem1(y1_var, d.name, a, b),
                  f_forall(zv, valso, f_not(f_mem1(y2_var, d.name, a, z))));
        Formula rhs = f_or(std::move(survives), f_mem1(y2_var, d.name, a, b));
        conj.push_back(f_forall(
            xv, arg, f_forall(yv, valso, f_iff(f_mem1(x_var, d.name, a, b), std::move(rhs)))));
    }
    return conj_all(std::move(conj));
}

Formula u7_rhs(const Rule& r, const std::string& x_var, const SigContext& ctx, FreshGen& fresh) {
    Formula stuck = f_and(f_upd(r.kids[0], x_var),
                          f_not(con_uset_formula(x_var, ctx, fresh)));
    std::string y1 = fresh.fresh("Y");
    std::string y2 = fresh.fresh("Y");
    Formula link = merge_link(x_var, y1, y2, ctx, fresh);
    Formula inner = f_and(f_modal(y1, f_upd(r.kids[1], y2)), std::move(link));
    Formula go = f_exists(
        y1, VarSort::Pred1,
        f_and(f_upd(r.kids[0], y1),
              f_and(con_uset_formula(y1, ctx, fresh),
                    f_exists(y2, VarSort::Pred1, std::move(inner)))));
    return f_or(std::move(stuck), std::move(go));
}

}  // namespace

Formula upd_rhs(const Rule& r, const std::string& x_var, const SigContext& ctx, FreshGen& fresh) {
    switch (r.kind) {
        case Rule::Kind::UpdatePrimary:
        case Rule::Kind::UpdateSecondary:
        case Rule::Kind::UpdateBridge:
            return u1_rhs(r, x_var, ctx, fresh);
        case Rule::Kind::If:
            return u2_rhs(r, x_var, ctx, fresh);
        case Rule::Kind::Forall:
            return u3_rhs(r, x_var, ctx, fresh);
        case Rule::Kind::Par:
            return u4_rhs(r, x_var, ctx, fresh);
        case Rule::Kind::Choose:
        case Rule::Kind::ChooseU:
            return u56_rhs(r, x_var);
        case Rule::Kind::Seq:
            return u7_rhs(r, x_var, ctx, fresh);
    }
    throw IllFormedInstantiation("bad rule");
}

// --- schema registry -----------------------------------------------------------

namespace {

const std::vector<std::string> kAxioms = {"U1", "U2", "U3", "U4", "U5", "U6", "U7",
                                          "M1", "M4", "M5", "M6", "M7", "M8",
                                          "A1", "A2", "P1", "P2", "P3",
                                          "EQ1", "EQ2", "DY1", "E"};
const std::vector<std::string> kControls = {"A2-noguard", "M4-noguard", "M5-converse"};

}  // namespace

bool is_axiom_schema(const std::string& id) {
    return std::find(kAxioms.begin(), kAxioms.end(), id) != kAxioms.end() ||
           std::find(kControls.begin(), kControls.end(), id) != kControls.end();
}
std::vector<std::string> axiom_schema_ids() { return kAxioms; }
std::vector<std::string> control_schema_ids() { return kControls; }

std::vector<MetaVar> schema_metavars(const std::string& id) {
    using K = MetaVar::Kind;
    auto mv = [](std::string n, K k) { return MetaVar{std::move(n), k, false}; };
    if (id == "U1" || id == "U2" || id == "U3" || id == "U4" || id == "U5" || id == "U6" ||
        id == "U7")
        return {mv("r", K::RuleK), mv("X", K::VarK)};
    if (id == "M1") return {mv("phi", K::FormulaK), mv("psi", K::FormulaK), mv("X", K::VarK)};
    if (id == "M4" || id == "M5" || id == "M4-noguard" || id == "M5-converse")
        return {mv("phi", K::FormulaK), mv("X", K::VarK)};
    if (id == "M6") return {mv("phi", K::FormulaK), mv("X", K::VarK), mv("x", K::VarK)};
    if (id == "M7" || id == "M8")
        return {mv("r", K::RuleK), mv("X", K::VarK), mv("phi", K::FormulaK)};
    if (id == "A1" || id == "A2" || id == "A2-noguard")
        return {mv("f", K::FnK), mv("X", K::VarK), mv("x", K::VarK), mv("y", K::VarK)};
    if (id == "P1" || id == "P3") return {mv("phi", K::FormulaK), mv("psi", K::FormulaK)};
    if (id == "P2")
        return {mv("phi", K::FormulaK), mv("psi", K::FormulaK), mv("chi", K::FormulaK)};
    if (id == "EQ1") return {mv("t", K::TermK)};
    if (id == "EQ2") {
        std::vector<MetaVar> out = {mv("f", K::FnK)};
        for (int i = 1; i <= 8; ++i)
            out.push_back(MetaVar{"t" + std::to_string(i), K::TermK, true});
        return out;
    }
    if (id == "DY1" || id == "E")
        return {mv("r1", K::RuleK), mv("r2", K::RuleK), mv("phi", K::FormulaK)};
    throw IllFormedInstantiation("unknown schema '" + id + "'");
}

namespace {

const Formula& need_formula(const Instantiation& inst, const std::string& n) {
    auto it = inst.formulas.find(n);
    if (it == inst.formulas.end())
        throw IllFormedInstantiation("missing formula metavariable '" + n + "'");
    return it->second;
}
const Rule& need_rule(const Instantiation& inst, const std::string& n) {
    auto it = inst.rules.find(n);
    if (it == inst.rules.end())
        throw IllFormedInstantiation("missing rule metavariable '" + n + "'");
    return it->second;
}
const Term& need_term(const Instantiation& inst, const std::string& n) {
    auto it = inst.terms.find(n);
    if (it == inst.terms.end())
        throw IllFormedInstantiation("missing term metavariable '" + n + "'");
    return it->second;
}
const VarRef& need_var(const Instantiation& inst, const std::string& n, VarSort want) {
    auto it = inst.vars.find(n);
    if (it == inst.vars.end())
        throw IllFormedInstantiation("missing variable metavariable '" + n + "'");
    if (it->second.sort != want)
        throw IllFormedInstantiation("metavariable '" + n + "' has the wrong sort");
    return it->second;
}
const VarRef& need_var_any(const Instantiation& inst, const std::string& n) {
    auto it = inst.vars.find(n);
    if (it == inst.vars.end())
        throw IllFormedInstantiation("missing variable metavariable '" + n + "'");
    return it->second;
}
const std::string& need_fn(const Instantiation& inst, const std::string& n, const SigContext& ctx) {
    auto it = inst.funcs.find(n);
    if (it == inst.funcs.end())
        throw IllFormedInstantiation("missing function metavariable '" + n + "'");
    const FunctionDecl* d = ctx.sig.find(it->second);
    if (!d || !d->dynamic)
        throw IllFormedInstantiation("'" + it->second + "' is not a dynamic function");
    return it->second;
}

FreshGen fresh_from(const SigContext& ctx, const Instantiation& inst) {
    FreshGen fresh;
    for (const FunctionDecl& d : ctx.sig.decls()) fresh.reserve_name(d.name);
    for (const auto& [name, sort] : ctx.atoms) fresh.reserve_name(name);
    for (const auto& [k, f] : inst.formulas) fresh.reserve(f);
    for (const auto& [k, t] : inst.terms) fresh.reserve(t);
    for (const auto& [k, r] : inst.rules) fresh.reserve(r);
    for (const auto& [k, v] : inst.vars) fresh.reserve_name(v.name);
    return fresh;
}

}  // namespace

Formula instantiate_schema(const std::string& id, const SigContext& ctx,
                           const Instantiation& inst) {
    FreshGen fresh = fresh_from(ctx, inst);

    auto u_axiom = [&](Rule::Kind expect1, Rule::Kind expect2, Rule::Kind expect3) {
        const Rule& r = need_rule(inst, "r");
        if (r.kind != expect1 && r.kind != expect2 && r.kind != expect3)
            throw IllFormedInstantiation("rule form does not match schema '" + id + "'");
        const VarRef& x = need_var(inst, "X", VarSort::Pred1);
        return f_iff(f_upd(r, x.name), upd_rhs(r, x.name, ctx, fresh));
    };

    if (id == "U1")
        return u_axiom(Rule::Kind::UpdatePrimary, Rule::Kind::UpdateSecondary,
                       Rule::Kind::UpdateBridge);
    if (id == "U2") return u_axiom(Rule::Kind::If, Rule::Kind::If, Rule::Kind::If);
    if (id == "U3") return u_axiom(Rule::Kind::Forall, Rule::Kind::Forall, Rule::Kind::Forall);
    if (id == "U4") return u_axiom(Rule::Kind::Par, Rule::Kind::Par, Rule::Kind::Par);
    if (id == "U5") return u_axiom(Rule::Kind::Choose, Rule::Kind::Choose, Rule::Kind::Choose);
    if (id == "U6") return u_axiom(Rule::Kind::ChooseU, Rule::Kind::ChooseU, Rule::Kind::ChooseU);
    if (id == "U7") return u_axiom(Rule::Kind::Seq, Rule::Kind::Seq, Rule::Kind::Seq);

    if (id == "M1") {
        const VarRef& x = need_var(inst, "X", VarSort::Pred1);
        Formula phi = need_formula(inst, "phi");
        Formula psi = need_formula(inst, "psi");
        return f_implies(f_modal(x.name, f_implies(phi, psi)),
                         f_implies(f_modal(x.name, phi), f_modal(x.name, psi)));
    }
    if (id == "M4") {
        const VarRef& x = need_var(inst, "X", VarSort::Pred1);
        return f_implies(f_not(con_uset_formula(x.name, ctx, fresh)),
                         f_modal(x.name, need_formula(inst, "phi")));
    }
    if (id == "M4-noguard") {
        const VarRef& x = need_var(inst, "X", VarSort::Pred1);
        return f_modal(x.name, need_formula(inst, "phi"));
    }
    if (id == "M5") {
        const VarRef& x = need_var(inst, "X", VarSort::Pred1);
        const Formula& phi = need_formula(inst, "phi");
        return f_implies(f_not(f_modal(x.name, phi)), f_modal(x.name, f_not(phi)));
    }
    if (id == "M5-converse") {
        const VarRef& x = need_var(inst, "X", VarSort::Pred1);
        const Formula& phi = need_formula(inst, "phi");
        return f_implies(f_modal(x.name, f_not(phi)), f_not(f_modal(x.name, phi)));
    }
    if (id == "M6") {
        const VarRef& x = need_var(inst, "X", VarSort::Pred1);
        const VarRef& v = need_var_any(inst, "x");
        if (v.name == x.name && v.sort == VarSort::Pred1)
            throw IllFormedInstantiation("Barcan variable must differ from the update-set variable");
        const Formula& phi = need_formula(inst, "phi");
        return f_implies(f_forall(v.name, v.sort, f_modal(x.name, phi)),
                         f_modal(x.name, f_forall(v.name, v.sort, phi)));
    }
    if (id == "M7" || id == "M8") {
        const VarRef& x = need_var(inst, "X", VarSort::Pred1);
        const Rule& r = need_rule(inst, "r");
        const Formula& phi = need_formula(inst, "phi");
        if (!is_static(phi, ctx) && !is_pure(phi))
            throw IllFormedInstantiation(id + " requires a static or pure formula");
        Formula con = f_and(f_upd(r, x.name), con_uset_formula(x.name, ctx, fresh));
        if (id == "M7") return f_implies(f_and(std::move(con), phi), f_modal(x.name, phi));
        return f_implies(f_and(std::move(con), f_modal(x.name, phi)), phi);
    }
    if (id == "A1" || id == "A2" || id == "A2-noguard") {
        const std::string& fn = need_fn(inst, "f", ctx);
        const FunctionDecl& d = ctx.sig.at(fn);
        VarSort args = var_sort_of(Signature::arg_sort(d.kind));
        VarSort vals = var_sort_of(Signature::value_sort(d.kind));
        const VarRef& xset = need_var(inst, "X", VarSort::Pred1);
        const VarRef& x = need_var(inst, "x", args);
        const VarRef& y = need_var(inst, "y", vals);
        Term tx = Term::var(x.name, args), ty = Term::var(y.name, vals);
        Formula eq_after = f_modal(xset.name, f_eq(Term::app(fn, {tx}), ty));
        if (id == "A2-noguard")
            return f_implies(f_mem1(xset.name, fn, tx, ty), std::move(eq_after));
        if (id == "A2")
            return f_implies(f_and(con_uset_formula(xset.name, ctx, fresh),
                                   f_mem1(xset.name, fn, tx, ty)),
                             std::move(eq_after));
        std::string zv = fresh.fresh("z");
        Formula no_update =
            f_forall(zv, vals, f_not(f_mem1(xset.name, fn, tx, Term::var(zv, vals))));
        Formula now = f_eq(Term::app(fn, {tx}), ty);
        return f_implies(f_and(f_and(con_uset_formula(xset.name, ctx, fresh),
                                     std::move(no_update)),
                               std::move(now)),
                         std::move(eq_after));
    }
    if (id == "P1") {
        const Formula& phi = need_formula(inst, "phi");
        const Formula& psi = need_formula(inst, "psi");
        return f_implies(phi, f_implies(psi, phi));
    }
    if (id == "P2") {
        const Formula& phi = need_formula(inst, "phi");
        const Formula& psi = need_formula(inst, "psi");
        const Formula& chi = need_formula(inst, "chi");
        return f_implies(f_implies(phi, f_implies(psi, chi)),
                         f_implies(f_implies(phi, psi), f_implies(phi, chi)));
    }
    if (id == "P3") {
        const Formula& phi = need_formula(inst, "phi");
        const Formula& psi = need_formula(inst, "psi");
        return f_implies(f_implies(f_not(phi), f_not(psi)), f_implies(psi, phi));
    }
    if (id == "EQ1") {
        const Term& t = need_term(inst, "t");
        if (!is_static_term(t, ctx))
            throw IllFormedInstantiation("EQ1 requires a static term");
        return f_eq(t, t);
    }
    if (id == "EQ2") {
        auto fit = inst.funcs.find("f");
        if (fit == inst.funcs.end())
            throw IllFormedInstantiation("missing function metavariable 'f'");
        const FunctionDecl* d = ctx.sig.find(fit->second);
        if (!d) throw IllFormedInstantiation("unknown function '" + fit->second + "'");
        int n = d->arity;
        if (n < 1) throw IllFormedInstantiation("EQ2 requires arity >= 1");
        std::vector<Term> left, right;
        std::vector<Formula> prem;
        for (int i = 1; i <= 2 * n; ++i) {
            const Term& t = need_term(inst, "t" + std::to_string(i));
            if (!is_static_term(t, ctx))
                throw IllFormedInstantiation("EQ2 requires static terms");
            (i <= n ? left : right).push_back(t);
        }
        for (int i = 0; i < n; ++i) prem.push_back(f_eq(left[static_cast<size_t>(i)], right[static_cast<size_t>(i)]));
        return f_implies(conj_all(std::move(prem)),
                         f_eq(Term::app(fit->second, left), Term::app(fit->second, right)));
    }
    if (id == "DY1") {
        const Rule& r1 = need_rule(inst, "r1");
        const Rule& r2 = need_rule(inst, "r2");
        const Formula& phi = need_formula(inst, "phi");
        std::string x = fresh.fresh("X");
        std::string x1 = fresh.fresh("X");
        std::string x2 = fresh.fresh("X");
        Formula lhs = f_exists(
            x, VarSort::Pred1, f_and(f_upd(r_seq(r1, r2), x), f_modal(x, phi)));
        Formula inner2 = f_exists(x2, VarSort::Pred1, f_and(f_upd(r2, x2), f_modal(x2, phi)));
        Formula rhs = f_exists(
            x1, VarSort::Pred1, f_and(f_upd(r1, x1), f_modal(x1, std::move(inner2))));
        return f_iff(std::move(lhs), std::move(rhs));
    }
    if (id == "E") {
        const Rule& r1 = need_rule(inst, "r1");
        const Rule& r2 = need_rule(inst, "r2");
        const Formula& phi = need_formula(inst, "phi");
        std::string x1 = fresh.fresh("X");
        std::string x2 = fresh.fresh("X");
        Formula a = f_and(f_upd(r1, x1), f_modal(x1, phi));
        Formula b = f_and(f_upd(r2, x2), f_modal(x2, phi));
        return f_exists(x1, VarSort::Pred1,
                        f_exists(x2, VarSort::Pred1, f_iff(std::move(a), std::move(b))));
    }
    throw IllFormedInstantiation("unknown schema '" + id + "'");
}

}  // namespace asmw
