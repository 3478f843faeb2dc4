#include <functional>

#include "asmw/logic.hpp"
#include "asmw/printer.hpp"
#include "asmw/sampler.hpp"

namespace asmw {

namespace {

// Solves the forall axiom's right-hand side directly: X is yielded by
// forall x with phi do r enddo iff X is a union of one update set per
// guard witness (the tagged second-sort existential decomposes by tag).
bool u3_solver(const State& s, const Rule& forall_rule, const UpdateSet& x, const Caps& caps) {
    Valuation val;
    std::vector<UpdateSetFamily> families;
    for (Value a : s.carriers().values_of(TermSort::Point)) {
        ScopedBindInd bind(val, forall_rule.var, VarSort::Ind1, a);
        if (!eval_formula(s, forall_rule.guard, val, caps)) continue;
        families.push_back(delta(s, forall_rule.kids[0], val, caps));
    }
    if (families.empty()) return x.is_empty();
    // Depth-first choice of one member per witness; members must stay inside
    // x and jointly cover it.
    std::function<bool(size_t, const UpdateSet&)> search = [&](size_t i,
                                                               const UpdateSet& acc) -> bool {
        if (i == families.size()) return acc == x;
        for (const UpdateSet& pick : families[i]) {
            bool inside = true;
            for (const Update& u : pick)
                if (!x.contains(u)) {
                    inside = false;
                    break;
                }
            if (!inside) continue;
            if (search(i + 1, set_union(acc, pick))) return true;
        }
        return false;
    };
    return search(0, UpdateSet::empty());
}

struct TrialCtx {
    Sampler& sampler;
    State state;
    SigContext ctx;
    const Caps& caps;
};

UpdateSet sample_set(TrialCtx& t, const UpdateSetFamily* bias_family) {
    int pick = t.sampler.uniform(0, 99);
    if (bias_family && !bias_family->is_empty() && pick < 45) {
        int i = t.sampler.uniform(0, static_cast<int>(bias_family->size()) - 1);
        UpdateSet u = bias_family->sets()[static_cast<size_t>(i)];
        if (pick < 15) {
            // perturb: drop or add one update
            std::vector<Update> items(u.begin(), u.end());
            std::vector<Update> universe = PredicateDomains::triple_universe(t.state);
            if (!items.empty() && t.sampler.chance(0.5)) {
                items.erase(items.begin() +
                            t.sampler.uniform(0, static_cast<int>(items.size()) - 1));
            } else if (!universe.empty()) {
                items.push_back(universe[static_cast<size_t>(
                    t.sampler.uniform(0, static_cast<int>(universe.size()) - 1))]);
            }
            return UpdateSet(std::move(items));
        }
        return u;
    }
    if (pick < 70) return t.sampler.random_update_set(t.state, Sampler::SetFlavor::Random);
    if (pick < 90) return t.sampler.random_update_set(t.state, Sampler::SetFlavor::Inconsistent);
    return UpdateSet::empty();
}

// One trial; returns an explanation when the instance evaluates false.
std::optional<std::string> run_trial(const std::string& id, TrialCtx& t) {
    Sampler& smp = t.sampler;
    const SigContext& ctx = t.ctx;
    Instantiation inst;
    Valuation val;

    auto eval_instance = [&](const Formula& instance) -> std::optional<std::string> {
        if (eval_formula(t.state, instance, val, t.caps)) return std::nullopt;
        return "instance false: " + print(instance);
    };

    if (id == "U1" || id == "U2" || id == "U3" || id == "U4" || id == "U5" || id == "U6" ||
        id == "U7") {
        Rule::Kind kind;
        if (id == "U1") {
            static const Rule::Kind forms[] = {Rule::Kind::UpdatePrimary,
                                               Rule::Kind::UpdateSecondary,
                                               Rule::Kind::UpdateBridge};
            kind = forms[smp.uniform(0, 2)];
        } else {
            kind = id == "U2"   ? Rule::Kind::If
                   : id == "U3" ? Rule::Kind::Forall
                   : id == "U4" ? Rule::Kind::Par
                   : id == "U5" ? Rule::Kind::Choose
                   : id == "U6" ? Rule::Kind::ChooseU
                                : Rule::Kind::Seq;
        }
        Rule r;
        try {
            r = smp.random_rule_of_kind(ctx, kind, 1);
        } catch (const Error&) {
            return std::nullopt;  // signature lacks the kind; counts as a skip-free pass
        }
        Valuation empty;
        UpdateSetFamily fam = delta(t.state, r, empty, t.caps);
        UpdateSet x = sample_set(t, &fam);
        if (id == "U3") {
            bool lhs = fam.contains(x);
            bool rhs = u3_solver(t.state, r, x, t.caps);
            if (lhs == rhs) return std::nullopt;
            return "U3 mismatch for X=" + print(t.state, x) + " rule=" + print(r, -1);
        }
        inst.rules.emplace("r", r);
        inst.vars.emplace("X", VarRef{"X", VarSort::Pred1});
        val.bind_pred1("X", x);
        return eval_instance(instantiate_schema(id, ctx, inst));
    }

    if (id == "M1" || id == "M4" || id == "M5" || id == "M4-noguard" || id == "M5-converse") {
        inst.formulas.emplace("phi", smp.random_formula(ctx, 1, 1));
        if (id == "M1") inst.formulas.emplace("psi", smp.random_formula(ctx, 1, 1));
        inst.vars.emplace("X", VarRef{"X", VarSort::Pred1});
        val.bind_pred1("X", sample_set(t, nullptr));
        return eval_instance(instantiate_schema(id, ctx, inst));
    }
    if (id == "M6") {
        // Barcan: phi with the quantified variable free
        VarSort vs = smp.chance(0.5) ? VarSort::Ind1 : VarSort::Ind2;
        std::vector<VarRef> scope{{"bx", vs}};
        inst.formulas.emplace("phi", smp.random_formula_in_scope(ctx, 1, 1, scope));
        inst.vars.emplace("x", VarRef{"bx", vs});
        inst.vars.emplace("X", VarRef{"X", VarSort::Pred1});
        val.bind_pred1("X", sample_set(t, nullptr));
        Formula instance = instantiate_schema(id, ctx, inst);
        if (!free_variables(instance).empty() &&
            free_variables(instance) != std::set<VarRef>{{"X", VarSort::Pred1}})
            return std::nullopt;  // regenerate on odd free-variable leakage
        return eval_instance(instance);
    }
    if (id == "M7" || id == "M8") {
        Rule r = smp.random_rule(ctx, 1);
        Valuation empty;
        UpdateSetFamily fam = delta(t.state, r, empty, t.caps);
        inst.rules.emplace("r", r);
        // Static formulas only: purity does not make truth update-invariant,
        // so the sound instances are the static ones.
        inst.formulas.emplace("phi", smp.random_static_formula(ctx, 1));
        inst.vars.emplace("X", VarRef{"X", VarSort::Pred1});
        val.bind_pred1("X", sample_set(t, &fam));
        return eval_instance(instantiate_schema(id, ctx, inst));
    }
    if (id == "A1" || id == "A2" || id == "A2-noguard") {
        std::vector<const FunctionDecl*> dyn;
        for (const FunctionDecl& d : ctx.sig.decls())
            if (d.dynamic) dyn.push_back(&d);
        const FunctionDecl* d = dyn[static_cast<size_t>(smp.uniform(0, static_cast<int>(dyn.size()) - 1))];
        inst.funcs.emplace("f", d->name);
        VarSort args = Signature::arg_sort(d->kind) == TermSort::Point ? VarSort::Ind1 : VarSort::Ind2;
        VarSort vals = Signature::value_sort(d->kind) == TermSort::Point ? VarSort::Ind1 : VarSort::Ind2;
        inst.vars.emplace("X", VarRef{"X", VarSort::Pred1});
        inst.vars.emplace("x", VarRef{"ax", args});
        inst.vars.emplace("y", VarRef{"ay", vals});
        Value xv = smp.random_value(t.state, Signature::arg_sort(d->kind));
        Value yv = smp.random_value(t.state, Signature::value_sort(d->kind));
        val.bind_ind("ax", args, xv);
        val.bind_ind("ay", vals, yv);
        UpdateSet x = sample_set(t, nullptr);
        if (smp.chance(0.5)) {
            // make the membership premise live
            std::vector<Update> items(x.begin(), x.end());
            items.push_back(Update{ctx.sig.index_of(d->name), xv, yv});
            x = UpdateSet(std::move(items));
        }
        val.bind_pred1("X", x);
        return eval_instance(instantiate_schema(id, ctx, inst));
    }
    if (id == "P1" || id == "P2" || id == "P3") {
        inst.formulas.emplace("phi", smp.random_formula(ctx, 1, 1));
        inst.formulas.emplace("psi", smp.random_formula(ctx, 1, 1));
        if (id == "P2") inst.formulas.emplace("chi", smp.random_formula(ctx, 1, 1));
        return eval_instance(instantiate_schema(id, ctx, inst));
    }
    if (id == "EQ1") {
        TermSort sort = smp.chance(0.5) ? TermSort::Point : TermSort::Algorithmic;
        inst.terms.emplace("t", smp.random_term(ctx, {}, sort, 2, /*static_only=*/true));
        return eval_instance(instantiate_schema(id, ctx, inst));
    }
    if (id == "EQ2") {
        std::vector<const FunctionDecl*> fns;
        for (const FunctionDecl& d : ctx.sig.decls())
            if (d.arity >= 1) fns.push_back(&d);
        if (fns.empty()) return std::nullopt;
        const FunctionDecl* d = fns[static_cast<size_t>(smp.uniform(0, static_cast<int>(fns.size()) - 1))];
        inst.funcs.emplace("f", d->name);
        int n = d->arity;
        bool same = smp.chance(0.5);  // premise-true instances half the time
        for (int i = 1; i <= n; ++i) {
            Term ti = smp.random_term(ctx, {}, Signature::arg_sort(d->kind), 1, true);
            Term tj = same ? ti : smp.random_term(ctx, {}, Signature::arg_sort(d->kind), 1, true);
            inst.terms.emplace("t" + std::to_string(i), ti);
            inst.terms.emplace("t" + std::to_string(n + i), tj);
        }
        return eval_instance(instantiate_schema(id, ctx, inst));
    }
    if (id == "DY1") {
        inst.rules.emplace("r1", smp.random_rule(ctx, 1));
        inst.rules.emplace("r2", smp.random_rule(ctx, 1));
        inst.formulas.emplace("phi", smp.random_formula(ctx, 1, 1));
        return eval_instance(instantiate_schema(id, ctx, inst));
    }
    if (id == "E") {
        Rule r1 = smp.random_rule(ctx, 1);
        Rule r2 = smp.chance(0.5) ? r1 : smp.random_rule(ctx, 1);
        inst.rules.emplace("r1", r1);
        inst.rules.emplace("r2", r2);
        inst.formulas.emplace("phi", smp.random_formula(ctx, 1, 1));
        return eval_instance(instantiate_schema(id, ctx, inst));
    }
    throw IllFormedInstantiation("unknown schema '" + id + "'");
}

}  // namespace

SchemaReport validate_schema(const std::string& schema_id, int trials, uint64_t seed,
                             const Caps& caps) {
    SchemaReport report;
    report.schema = schema_id;
    report.seed = seed;
    Sampler sampler(seed);
    StateSpec spec;
    int done = 0;
    int attempts = 0;
    while (done < trials) {
        if (++attempts > trials * 20)
            throw ResourceLimit("schema trials exhausted the attempt budget");
        spec.primary_extra = sampler.uniform(0, 2);
        spec.secondary = sampler.uniform(1, 4);
        spec.dyn_funcs = sampler.uniform(1, 2);
        spec.static_funcs = sampler.uniform(1, 2);
        TrialCtx t{sampler, sampler.random_state(spec), {}, caps};
        t.ctx = Sampler::context_for(t.state);
        try {
            auto cex = run_trial(schema_id, t);
            ++done;
            ++report.trials;
            if (cex) {
                ++report.counterexamples;
                if (report.examples.size() < 3)
                    report.examples.push_back(Counterexample{*cex});
            }
        } catch (const ResourceLimit&) {
            ++report.resource_skips;  // resample, never approximate
        }
    }
    return report;
}

}  // namespace asmw
