#include "asmw/sampler.hpp"

#include "asmw/analysis.hpp"
#include "asmw/logic.hpp"

namespace asmw {

State Sampler::random_state(const StateSpec& spec) {
    std::vector<std::string> primary = {"true", "false"};
    for (int i = 0; i < spec.primary_extra; ++i) primary.push_back("a" + std::to_string(i));
    std::vector<std::string> secondary;
    for (int i = 0; i < spec.secondary; ++i) secondary.push_back("b" + std::to_string(i));
    auto carriers = std::make_shared<const Carriers>(primary, secondary);

    auto sig = std::make_shared<Signature>();
    for (int i = 0; i < spec.dyn_funcs; ++i) {
        FuncKind kind = FuncKind::Primary;
        int pick = uniform(0, 2);
        if (pick == 1 && spec.allow_secondary_dyn) kind = FuncKind::Secondary;
        if (pick == 2 && spec.allow_bridge_dyn) kind = FuncKind::Bridge;
        sig->add(FunctionDecl{"d" + std::to_string(i), kind, true, 1});
    }
    for (int i = 0; i < spec.static_funcs; ++i) {
        FuncKind kind = uniform(0, 1) ? FuncKind::Primary : FuncKind::Secondary;
        int arity = uniform(0, 1);
        sig->add(FunctionDecl{"s" + std::to_string(i), kind, false, arity});
    }

    State s(sig, carriers);
    for (size_t fi = 0; fi < sig->size(); ++fi) {
        const FunctionDecl& d = sig->decl(static_cast<int>(fi));
        TermSort vs = Signature::value_sort(d.kind);
        std::vector<Value> values = carriers->values_of(vs);
        size_t cells = 1;
        size_t dom = carriers->sort_size(Signature::arg_sort(d.kind));
        for (int a = 0; a < d.arity; ++a) cells *= dom;
        std::vector<Value> argdom = carriers->values_of(Signature::arg_sort(d.kind));
        for (size_t cell = 0; cell < cells; ++cell) {
            // decode cell -> args
            std::vector<Value> args(static_cast<size_t>(d.arity));
            size_t rem = cell;
            for (int k = d.arity - 1; k >= 0; --k) {
                args[static_cast<size_t>(k)] = argdom[rem % dom];
                rem /= dom;
            }
            s.set(static_cast<int>(fi), args,
                  values[static_cast<size_t>(uniform(0, static_cast<int>(values.size()) - 1))]);
        }
    }
    s.validate_total();
    return s;
}

State Sampler::reinterpret(const State& s) {
    State out(s.sig_ptr(), s.carriers_ptr());
    const Carriers& c = s.carriers();
    for (size_t fi = 0; fi < s.sig().size(); ++fi) {
        const FunctionDecl& d = s.sig().decl(static_cast<int>(fi));
        std::vector<Value> values = c.values_of(Signature::value_sort(d.kind));
        std::vector<Value> argdom = c.values_of(Signature::arg_sort(d.kind));
        size_t dom = argdom.size();
        size_t cells = 1;
        for (int a = 0; a < d.arity; ++a) cells *= dom;
        for (size_t cell = 0; cell < cells; ++cell) {
            std::vector<Value> args(static_cast<size_t>(d.arity));
            size_t rem = cell;
            for (int k = d.arity - 1; k >= 0; --k) {
                args[static_cast<size_t>(k)] = argdom[rem % dom];
                rem /= dom;
            }
            out.set(static_cast<int>(fi), args,
                    values[static_cast<size_t>(uniform(0, static_cast<int>(values.size()) - 1))]);
        }
    }
    out.validate_total();
    return out;
}

SigContext Sampler::context_for(const State& s) {
    SigContext ctx;
    ctx.sig = s.sig();
    const Carriers& c = s.carriers();
    for (Value v = 0; v < c.total(); ++v)
        ctx.declare_atom(c.name(v), c.is_primary(v) ? TermSort::Point : TermSort::Algorithmic);
    return ctx;
}

Value Sampler::random_value(const State& s, TermSort sort) {
    std::vector<Value> vals = s.carriers().values_of(sort);
    return vals[static_cast<size_t>(uniform(0, static_cast<int>(vals.size()) - 1))];
}

Term Sampler::random_term(const SigContext& ctx, const std::vector<VarRef>& scope, TermSort sort,
                          int depth, bool static_only) {
    // candidate scope variables of the right sort
    std::vector<const VarRef*> vars;
    for (const VarRef& v : scope) {
        TermSort vs = v.sort == VarSort::Ind1 ? TermSort::Point : TermSort::Algorithmic;
        if ((v.sort == VarSort::Ind1 || v.sort == VarSort::Ind2) && vs == sort)
            vars.push_back(&v);
    }
    if (!vars.empty() && chance(0.45)) {
        const VarRef* v = vars[static_cast<size_t>(uniform(0, static_cast<int>(vars.size()) - 1))];
        return Term::var(v->name, v->sort);
    }
    if (depth > 0 && chance(0.4)) {
        std::vector<const FunctionDecl*> fns;
        for (const FunctionDecl& d : ctx.sig.decls()) {
            if (static_only && d.dynamic) continue;
            if (Signature::value_sort(d.kind) != sort) continue;
            fns.push_back(&d);
        }
        if (!fns.empty()) {
            const FunctionDecl* d = fns[static_cast<size_t>(uniform(0, static_cast<int>(fns.size()) - 1))];
            std::vector<Term> args;
            for (int i = 0; i < d->arity; ++i)
                args.push_back(random_term(ctx, scope, Signature::arg_sort(d->kind), depth - 1,
                                           static_only));
            return Term::app(d->name, std::move(args));
        }
    }
    // atom constant
    std::vector<const std::string*> atoms;
    for (const auto& [name, asort] : ctx.atoms)
        if (asort == sort) atoms.push_back(&name);
    if (atoms.empty()) throw Error("sampler: no atoms of requested sort");
    std::sort(atoms.begin(), atoms.end(),
              [](const std::string* a, const std::string* b) { return *a < *b; });
    return Term::atom(*atoms[static_cast<size_t>(uniform(0, static_cast<int>(atoms.size()) - 1))],
                      sort);
}

Formula Sampler::random_guard(const SigContext& ctx, const std::vector<VarRef>& scope, int depth) {
    if (depth <= 0 || chance(0.5)) {
        TermSort sort = chance(0.5) ? TermSort::Point : TermSort::Algorithmic;
        Term a = random_term(ctx, scope, sort, 1);
        Term b = random_term(ctx, scope, sort, 1);
        Formula eq = f_eq(std::move(a), std::move(b));
        return chance(0.3) ? f_not(std::move(eq)) : eq;
    }
    switch (uniform(0, 3)) {
        case 0:
            return f_not(random_guard(ctx, scope, depth - 1));
        case 1:
            return f_and(random_guard(ctx, scope, depth - 1), random_guard(ctx, scope, depth - 1));
        case 2:
            return f_or(random_guard(ctx, scope, depth - 1), random_guard(ctx, scope, depth - 1));
        default: {
            VarSort vs = chance(0.5) ? VarSort::Ind1 : VarSort::Ind2;
            std::string name = "q" + std::to_string(name_counter_++);
            std::vector<VarRef> inner = scope;
            inner.push_back({name, vs});
            Formula body = random_guard(ctx, inner, depth - 1);
            return chance(0.5) ? f_forall(name, vs, std::move(body))
                               : f_exists(name, vs, std::move(body));
        }
    }
}

Rule Sampler::random_open_rule(const SigContext& ctx, int depth, const std::vector<VarRef>& scope) {
    std::vector<const FunctionDecl*> dyn;
    for (const FunctionDecl& d : ctx.sig.decls())
        if (d.dynamic) dyn.push_back(&d);
    if (dyn.empty()) throw Error("sampler: signature has no dynamic function");

    auto update = [&]() {
        const FunctionDecl* d = dyn[static_cast<size_t>(uniform(0, static_cast<int>(dyn.size()) - 1))];
        Term arg = random_term(ctx, scope, Signature::arg_sort(d->kind), 1);
        Term rhs = random_term(ctx, scope, Signature::value_sort(d->kind), 1);
        Rule::Kind k = d->kind == FuncKind::Primary   ? Rule::Kind::UpdatePrimary
                       : d->kind == FuncKind::Secondary ? Rule::Kind::UpdateSecondary
                                                        : Rule::Kind::UpdateBridge;
        return r_update(k, d->name, std::move(arg), std::move(rhs));
    };
    if (depth <= 0) return update();

    int pick = uniform(0, 99);
    if (pick < 30) return update();
    if (pick < 45) {
        Formula g = random_guard(ctx, scope, 1);
        return r_if(std::move(g), random_open_rule(ctx, depth - 1, scope));
    }
    if (pick < 60) {  // par
        return r_par(random_open_rule(ctx, depth - 1, scope),
                     random_open_rule(ctx, depth - 1, scope));
    }
    if (pick < 70) {  // seq
        return r_seq(random_open_rule(ctx, depth - 1, scope),
                     random_open_rule(ctx, depth - 1, scope));
    }
    // binders
    bool forall = pick < 80;
    bool unbounded = !forall && chance(0.4);
    std::string name = "q" + std::to_string(name_counter_++);
    VarSort vs = unbounded ? VarSort::Ind2 : VarSort::Ind1;
    std::vector<VarRef> inner = scope;
    inner.push_back({name, vs});
    Formula g = random_guard(ctx, inner, 1);
    Rule body = random_open_rule(ctx, depth - 1, inner);
    Rule::Kind k = forall ? Rule::Kind::Forall
                   : unbounded ? Rule::Kind::ChooseU
                               : Rule::Kind::Choose;
    return r_binder(k, name, std::move(g), std::move(body));
}

Rule Sampler::random_rule(const SigContext& ctx, int depth, bool deterministic) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        Rule r = random_open_rule(ctx, depth, {});
        if (deterministic) {
            // rejection-sample the choose-free fragment
            bool has_choice = false;
            std::vector<const Rule*> stack{&r};
            while (!stack.empty()) {
                const Rule* cur = stack.back();
                stack.pop_back();
                if (cur->kind == Rule::Kind::Choose || cur->kind == Rule::Kind::ChooseU)
                    has_choice = true;
                for (const Rule& k : cur->kids) stack.push_back(&k);
            }
            if (has_choice) continue;
        }
        if (is_closed(r)) return r;
    }
    throw Error("sampler: failed to generate a rule");
}

Rule Sampler::random_rule_of_kind(const SigContext& ctx, Rule::Kind kind, int body_depth) {
    switch (kind) {
        case Rule::Kind::UpdatePrimary:
        case Rule::Kind::UpdateSecondary:
        case Rule::Kind::UpdateBridge: {
            std::vector<const FunctionDecl*> dyn;
            FuncKind want = kind == Rule::Kind::UpdatePrimary   ? FuncKind::Primary
                            : kind == Rule::Kind::UpdateSecondary ? FuncKind::Secondary
                                                                  : FuncKind::Bridge;
            for (const FunctionDecl& d : ctx.sig.decls())
                if (d.dynamic && d.kind == want) dyn.push_back(&d);
            if (dyn.empty()) throw Error("sampler: no dynamic function of requested kind");
            const FunctionDecl* d = dyn[static_cast<size_t>(uniform(0, static_cast<int>(dyn.size()) - 1))];
            return r_update(kind, d->name, random_term(ctx, {}, Signature::arg_sort(d->kind), 1),
                            random_term(ctx, {}, Signature::value_sort(d->kind), 1));
        }
        case Rule::Kind::If:
            return r_if(random_guard(ctx, {}, 1), random_rule(ctx, body_depth));
        case Rule::Kind::Forall:
        case Rule::Kind::Choose:
        case Rule::Kind::ChooseU: {
            std::string name = "q" + std::to_string(name_counter_++);
            VarSort vs = kind == Rule::Kind::ChooseU ? VarSort::Ind2 : VarSort::Ind1;
            std::vector<VarRef> scope{{name, vs}};
            Formula g = random_guard(ctx, scope, 1);
            Rule body = random_open_rule(ctx, body_depth, scope);
            return r_binder(kind, name, std::move(g), std::move(body));
        }
        case Rule::Kind::Par:
            return r_par(random_rule(ctx, body_depth), random_rule(ctx, body_depth));
        case Rule::Kind::Seq:
            return r_seq(random_rule(ctx, body_depth), random_rule(ctx, body_depth));
    }
    throw Error("sampler: bad rule kind");
}

Formula Sampler::random_formula_in_scope(const SigContext& ctx, int depth, int rule_depth,
                                         const std::vector<VarRef>& scope) {
    std::vector<const VarRef*> pred1, pred2;
    for (const VarRef& v : scope) {
        if (v.sort == VarSort::Pred1) pred1.push_back(&v);
        if (v.sort == VarSort::Pred2) pred2.push_back(&v);
    }
    std::vector<const FunctionDecl*> dyn;
    for (const FunctionDecl& d : ctx.sig.decls())
        if (d.dynamic) dyn.push_back(&d);

    auto atom = [&]() -> Formula {
        int pick = uniform(0, 99);
        if (!pred1.empty() && !dyn.empty() && pick < 25) {
            const VarRef* x = pred1[static_cast<size_t>(uniform(0, static_cast<int>(pred1.size()) - 1))];
            const FunctionDecl* d = dyn[static_cast<size_t>(uniform(0, static_cast<int>(dyn.size()) - 1))];
            Term t0 = random_term(ctx, scope, Signature::arg_sort(d->kind), 1);
            Term s0 = random_term(ctx, scope, Signature::value_sort(d->kind), 1);
            return f_mem1(x->name, d->name, std::move(t0), std::move(s0));
        }
        if (!pred2.empty() && !dyn.empty() && pick < 35) {
            const VarRef* x = pred2[static_cast<size_t>(uniform(0, static_cast<int>(pred2.size()) - 1))];
            const FunctionDecl* d = dyn[static_cast<size_t>(uniform(0, static_cast<int>(dyn.size()) - 1))];
            Term t0 = random_term(ctx, scope, Signature::arg_sort(d->kind), 1);
            Term s0 = random_term(ctx, scope, Signature::value_sort(d->kind), 1);
            Term tag = random_term(ctx, scope, TermSort::Point, 1);
            return f_mem2(x->name, d->name, std::move(t0), std::move(s0), std::move(tag));
        }
        if (!pred1.empty() && pick < 55) {
            const VarRef* x = pred1[static_cast<size_t>(uniform(0, static_cast<int>(pred1.size()) - 1))];
            std::vector<VarRef> ind_scope;
            for (const VarRef& v : scope)
                if (v.sort == VarSort::Ind1 || v.sort == VarSort::Ind2) ind_scope.push_back(v);
            return f_upd(random_open_rule(ctx, rule_depth, ind_scope), x->name);
        }
        TermSort sort = chance(0.5) ? TermSort::Point : TermSort::Algorithmic;
        return f_eq(random_term(ctx, scope, sort, 1), random_term(ctx, scope, sort, 1));
    };

    if (depth <= 0) return atom();
    int pick = uniform(0, 99);
    if (pick < 20) return atom();
    if (pick < 35) return f_not(random_formula_in_scope(ctx, depth - 1, rule_depth, scope));
    if (pick < 50)
        return f_and(random_formula_in_scope(ctx, depth - 1, rule_depth, scope),
                     random_formula_in_scope(ctx, depth - 1, rule_depth, scope));
    if (pick < 60)
        return f_or(random_formula_in_scope(ctx, depth - 1, rule_depth, scope),
                    random_formula_in_scope(ctx, depth - 1, rule_depth, scope));
    if (pick < 75 && !pred1.empty()) {
        const VarRef* x = pred1[static_cast<size_t>(uniform(0, static_cast<int>(pred1.size()) - 1))];
        return f_modal(x->name, random_formula_in_scope(ctx, depth - 1, rule_depth, scope));
    }
    // quantifier
    int qs = uniform(0, 3);
    VarSort vs = qs == 0 ? VarSort::Ind1 : qs == 1 ? VarSort::Ind2 : qs == 2 ? VarSort::Pred1
                                                                             : VarSort::Pred2;
    std::string name = (vs == VarSort::Pred1 || vs == VarSort::Pred2)
                           ? "Q" + std::to_string(name_counter_++)
                           : "q" + std::to_string(name_counter_++);
    std::vector<VarRef> inner = scope;
    inner.push_back({name, vs});
    Formula body = random_formula_in_scope(ctx, depth - 1, rule_depth, inner);
    return chance(0.5) ? f_forall(name, vs, std::move(body))
                       : f_exists(name, vs, std::move(body));
}

Formula Sampler::random_formula(const SigContext& ctx, int depth, int rule_depth) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        Formula f = random_formula_in_scope(ctx, depth, rule_depth, {});
        if (free_variables(f).empty()) return f;
    }
    throw Error("sampler: failed to generate a closed formula");
}

Formula Sampler::random_static_formula(const SigContext& ctx, int depth) {
    std::vector<VarRef> scope;
    // closed, equalities over static terms, individual quantifiers only
    std::string name = "q" + std::to_string(name_counter_++);
    VarSort vs = chance(0.5) ? VarSort::Ind1 : VarSort::Ind2;
    scope.push_back({name, vs});
    TermSort sort = chance(0.5) ? TermSort::Point : TermSort::Algorithmic;
    Formula body = f_eq(random_term(ctx, scope, sort, depth, /*static_only=*/true),
                        random_term(ctx, scope, sort, depth, /*static_only=*/true));
    if (chance(0.3)) body = f_not(std::move(body));
    if (chance(0.3))
        body = f_and(std::move(body),
                     f_eq(random_term(ctx, scope, sort, 1, true), random_term(ctx, scope, sort, 1, true)));
    return chance(0.5) ? f_forall(name, vs, std::move(body)) : f_exists(name, vs, std::move(body));
}

UpdateSet Sampler::random_update_set(const State& s, SetFlavor flavor) {
    if (flavor == SetFlavor::Empty) return UpdateSet::empty();
    std::vector<Update> universe = PredicateDomains::triple_universe(s);
    if (universe.empty()) return UpdateSet::empty();
    std::vector<Update> items;
    int k = uniform(0, 3);
    for (int i = 0; i < k; ++i)
        items.push_back(universe[static_cast<size_t>(uniform(0, static_cast<int>(universe.size()) - 1))]);
    if (flavor == SetFlavor::Inconsistent) {
        // force two updates on one location with different values
        for (int attempt = 0; attempt < 64; ++attempt) {
            const Update& u =
                universe[static_cast<size_t>(uniform(0, static_cast<int>(universe.size()) - 1))];
            for (const Update& w : universe) {
                if (w.fn == u.fn && w.arg == u.arg && w.value != u.value) {
                    items.push_back(u);
                    items.push_back(w);
                    return UpdateSet(std::move(items));
                }
            }
        }
    }
    return UpdateSet(std::move(items));
}

TaggedUpdateSet Sampler::random_tagged_set(const State& s) {
    std::vector<TaggedUpdate> universe = PredicateDomains::quad_universe(s);
    std::vector<TaggedUpdate> items;
    if (universe.empty()) return TaggedUpdateSet{};
    int k = uniform(0, 3);
    for (int i = 0; i < k; ++i)
        items.push_back(universe[static_cast<size_t>(uniform(0, static_cast<int>(universe.size()) - 1))]);
    return TaggedUpdateSet(std::move(items));
}

}  // namespace asmw
