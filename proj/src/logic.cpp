#include "asmw/logic.hpp"

#include <bit>
#include <map>
#include <unordered_map>

namespace asmw {

namespace {

// Per-state evaluation scope: delta results are memoised per rule node as
// long as the rule has no free individual variables (binding-dependent
// families are recomputed); quantifier nodes are memoised keyed by the
// bindings of their free variables.
struct StateCtx {
    const State& s;
    const Caps& caps;
    StateCtx(const State& state, const Caps& c) : s(state), caps(c) {}
    std::map<const Rule*, UpdateSetFamily> delta_cache;
    std::unordered_map<const Rule*, bool> rule_closed;
    std::unordered_map<const Formula*, std::vector<VarRef>> fv_cache;
    std::unordered_map<const Formula*, size_t> size_cache;
    std::unordered_map<const Formula*, std::unordered_map<std::string, bool>> forall_cache;
};

class Evaluator {
public:
    explicit Evaluator(const Caps& caps) : caps_(caps) {}

    bool eval(StateCtx& ctx, const Formula& f, Valuation& val) {
        switch (f.kind) {
            case Formula::Kind::Eq:
                return eval_term(ctx.s, f.lhs, val) == eval_term(ctx.s, f.rhs, val);
            case Formula::Kind::Not:
                return !eval(ctx, f.kids[0], val);
            case Formula::Kind::And:
                return eval(ctx, f.kids[0], val) && eval(ctx, f.kids[1], val);
            case Formula::Kind::Forall:
                return eval_forall_memo(ctx, f, val);
            case Formula::Kind::Mem1: {
                Update u{ctx.s.sig().index_of(f.fn), eval_term(ctx.s, f.terms[0], val),
                         eval_term(ctx.s, f.terms[1], val)};
                return val.pred1(f.var).contains(u);
            }
            case Formula::Kind::Mem2: {
                TaggedUpdate u{ctx.s.sig().index_of(f.fn), eval_term(ctx.s, f.terms[0], val),
                               eval_term(ctx.s, f.terms[1], val),
                               eval_term(ctx.s, f.terms[2], val)};
                return val.pred2(f.var).contains(u);
            }
            case Formula::Kind::Upd:
                return family(ctx, *f.rule, val).contains(val.pred1(f.var));
            case Formula::Kind::Modal: {
                const UpdateSet& x = val.pred1(f.var);
                // No successor state for inconsistent (or ill-kinded) sets:
                // the modal formula holds.
                if (!is_applicable(ctx.s, x)) return true;
                State next = apply_unchecked(ctx.s, x);
                StateCtx sub(next, caps_);
                return eval(sub, f.kids[0], val);
            }
        }
        throw SortError("bad formula");
    }

private:
    const UpdateSetFamily& family(StateCtx& ctx, const Rule& r, Valuation& val) {
        auto closed_it = ctx.rule_closed.find(&r);
        if (closed_it == ctx.rule_closed.end()) {
            bool closed = true;
            for (const VarRef& v : free_variables(r))
                if (v.sort == VarSort::Ind1 || v.sort == VarSort::Ind2) closed = false;
            closed_it = ctx.rule_closed.emplace(&r, closed).first;
        }
        if (!closed_it->second) {
            scratch_ = delta(ctx.s, r, val, caps_);
            return scratch_;
        }
        auto it = ctx.delta_cache.find(&r);
        if (it == ctx.delta_cache.end())
            it = ctx.delta_cache.emplace(&r, delta(ctx.s, r, val, caps_)).first;
        return it->second;
    }

    // Quantifier evaluations are memoised per state, keyed by the bindings
    // of the node's free variables; cheap individual quantifiers skip the
    // cache, where the key encoding would cost more than the loop.
    bool eval_forall_memo(StateCtx& ctx, const Formula& f, Valuation& val) {
        bool individual = f.var_sort == VarSort::Ind1 || f.var_sort == VarSort::Ind2;
        auto size_it = ctx.size_cache.find(&f);
        if (size_it == ctx.size_cache.end())
            size_it = ctx.size_cache.emplace(&f, node_count(f)).first;
        bool use_cache = !individual || size_it->second >= 24;
        if (!use_cache)
            return individual ? eval_forall_ind(ctx, f, val) : eval_forall_pred(ctx, f, val);

        auto fv_it = ctx.fv_cache.find(&f);
        if (fv_it == ctx.fv_cache.end()) {
            std::set<VarRef> fvs = free_variables(f);
            fv_it = ctx.fv_cache.emplace(&f, std::vector<VarRef>(fvs.begin(), fvs.end())).first;
        }
        std::string key;
        key.reserve(fv_it->second.size() * 8);
        auto put32 = [&key](uint32_t v) {
            key.append(reinterpret_cast<const char*>(&v), sizeof v);
        };
        for (const VarRef& v : fv_it->second) {
            switch (v.sort) {
                case VarSort::Ind1:
                case VarSort::Ind2:
                    put32(val.ind(v.name, v.sort));
                    break;
                case VarSort::Pred1: {
                    const UpdateSet& u = val.pred1(v.name);
                    put32(static_cast<uint32_t>(u.size()));
                    for (const Update& up : u) {
                        put32(static_cast<uint32_t>(up.fn));
                        put32(up.arg);
                        put32(up.value);
                    }
                    break;
                }
                case VarSort::Pred2: {
                    const TaggedUpdateSet& u = val.pred2(v.name);
                    put32(static_cast<uint32_t>(u.size()));
                    for (const TaggedUpdate& up : u) {
                        put32(static_cast<uint32_t>(up.fn));
                        put32(up.arg);
                        put32(up.value);
                        put32(up.tag);
                    }
                    break;
                }
            }
        }
        auto& slot = ctx.forall_cache[&f];
        auto hit = slot.find(key);
        if (hit != slot.end()) return hit->second;
        bool result = individual ? eval_forall_ind(ctx, f, val) : eval_forall_pred(ctx, f, val);
        slot.emplace(std::move(key), result);
        return result;
    }

    bool eval_forall_ind(StateCtx& ctx, const Formula& f, Valuation& val) {
        TermSort sort = f.var_sort == VarSort::Ind1 ? TermSort::Point : TermSort::Algorithmic;
        for (Value a : ctx.s.carriers().values_of(sort)) {
            ScopedBindInd bind(val, f.var, f.var_sort, a);
            if (!eval(ctx, f.kids[0], val)) return false;
        }
        return true;
    }

    static void flatten_and(const Formula& f, std::vector<const Formula*>& out) {
        if (f.kind == Formula::Kind::And) {
            flatten_and(f.kids[0], out);
            flatten_and(f.kids[1], out);
        } else {
            out.push_back(&f);
        }
    }

    // For ∀V ¬(c1 ∧ ... ∧ cn) with some conjunct that pins V to a delta
    // family, iterate that family instead of the full subset domain.
    bool eval_forall_pred(StateCtx& ctx, const Formula& f, Valuation& val) {
        const std::string& v = f.var;
        if (f.kids[0].kind == Formula::Kind::Not && f.var_sort == VarSort::Pred1) {
            std::vector<const Formula*> conj;
            flatten_and(f.kids[0].kids[0], conj);
            for (const Formula* c : conj) {
                std::vector<UpdateSet> candidates;
                if (c->kind == Formula::Kind::Upd && c->var == v) {
                    const UpdateSetFamily& fam = family(ctx, *c->rule, val);
                    candidates.assign(fam.begin(), fam.end());
                } else if (c->kind == Formula::Kind::Modal && c->var != v &&
                           c->kids[0].kind == Formula::Kind::Upd && c->kids[0].var == v) {
                    const UpdateSet& w = val.pred1(c->var);
                    if (!is_applicable(ctx.s, w)) continue;  // conjunct holds for every V
                    State next = apply_unchecked(ctx.s, w);
                    const UpdateSetFamily fam = delta(next, *c->kids[0].rule, val, caps_);
                    candidates.assign(fam.begin(), fam.end());
                } else {
                    continue;
                }
                for (const UpdateSet& cand : candidates) {
                    ScopedBindPred1 bind(val, v, cand);
                    bool all = true;
                    for (const Formula* cc : conj)
                        if (!eval(ctx, *cc, val)) {
                            all = false;
                            break;
                        }
                    if (all) return false;  // a witness violates the ∀¬
                }
                return true;
            }
        }
        return eval_forall_pred_enum(ctx, f, val);
    }

    // Subsets are walked in Gray-code order so each step flips one element
    // of the bound set in place.
    bool eval_forall_pred_enum(StateCtx& ctx, const Formula& f, Valuation& val) {
        if (f.var_sort == VarSort::Pred1) {
            std::vector<Update> universe =
                PredicateDomains::triple_universe(ctx.s, caps_.strict_domains);
            require_enumerable(universe.size());
            uint64_t total = uint64_t{1} << universe.size();
            ScopedBindPred1 bind(val, f.var, UpdateSet::empty());
            UpdateSet& slot = val.pred1_ref(f.var);
            std::vector<bool> present(universe.size(), false);
            if (!eval(ctx, f.kids[0], val)) return false;
            for (uint64_t i = 1; i < total; ++i) {
                size_t bit = static_cast<size_t>(std::countr_zero(i));
                if (present[bit]) slot.erase(universe[bit]);
                else slot.insert(universe[bit]);
                present[bit] = !present[bit];
                if (!eval(ctx, f.kids[0], val)) return false;
            }
            return true;
        }
        std::vector<TaggedUpdate> universe =
            PredicateDomains::quad_universe(ctx.s, caps_.strict_domains);
        require_enumerable(universe.size());
        uint64_t total = uint64_t{1} << universe.size();
        ScopedBindPred2 bind(val, f.var, TaggedUpdateSet{});
        TaggedUpdateSet& slot = val.pred2_ref(f.var);
        std::vector<bool> present(universe.size(), false);
        if (!eval(ctx, f.kids[0], val)) return false;
        for (uint64_t i = 1; i < total; ++i) {
            size_t bit = static_cast<size_t>(std::countr_zero(i));
            if (present[bit]) slot.erase(universe[bit]);
            else slot.insert(universe[bit]);
            present[bit] = !present[bit];
            if (!eval(ctx, f.kids[0], val)) return false;
        }
        return true;
    }

    void require_enumerable(size_t universe_size) const {
        if (universe_size >= 63 || (uint64_t{1} << universe_size) > caps_.max_pred_enum)
            throw ResourceLimit("predicate-sort quantifier domain too large (" +
                                std::to_string(universe_size) + " tuples)");
    }

    const Caps& caps_;
    UpdateSetFamily scratch_;
};

}  // namespace

bool eval_formula(const State& s, const Formula& f, Valuation& val, const Caps& caps) {
    StateCtx ctx(s, caps);
    Evaluator ev(caps);
    return ev.eval(ctx, f, val);
}

std::vector<Update> PredicateDomains::triple_universe(const State& s, bool strict) {
    std::vector<Update> out;
    const Carriers& c = s.carriers();
    std::vector<Value> all;
    for (Value v = 0; v < c.total(); ++v) all.push_back(v);
    for (size_t fi = 0; fi < s.sig().size(); ++fi) {
        const FunctionDecl& d = s.sig().decl(static_cast<int>(fi));
        if (!d.dynamic) continue;
        const std::vector<Value> args =
            strict ? all : c.values_of(Signature::arg_sort(d.kind));
        const std::vector<Value> vals =
            strict ? all : c.values_of(Signature::value_sort(d.kind));
        for (Value a : args)
            for (Value b : vals) out.push_back(Update{static_cast<int>(fi), a, b});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<TaggedUpdate> PredicateDomains::quad_universe(const State& s, bool strict) {
    std::vector<TaggedUpdate> out;
    for (const Update& u : triple_universe(s, strict))
        for (Value tag : s.carriers().values_of(TermSort::Point))
            out.push_back(TaggedUpdate{u.fn, u.arg, u.value, tag});
    std::sort(out.begin(), out.end());
    return out;
}

// --- derived predicates -------------------------------------------------------

bool op_con_uset(const UpdateSet& u) { return is_consistent(u); }

bool op_con(const State& s, const Rule& r, const UpdateSet& x, Valuation& val, const Caps& caps) {
    return is_consistent(x) && delta(s, r, val, caps).contains(x);
}

bool op_wcon(const State& s, const Rule& r, Valuation& val, const Caps& caps) {
    for (const UpdateSet& u : delta(s, r, val, caps))
        if (is_consistent(u)) return true;
    return false;
}

bool op_scon(const State& s, const Rule& r, Valuation& val, const Caps& caps) {
    for (const UpdateSet& u : delta(s, r, val, caps))
        if (!is_consistent(u)) return false;
    return true;
}

bool op_joinable(const State& s, const Rule& r1, const Rule& r2, Valuation& val, const Caps& caps) {
    UpdateSetFamily f1 = delta(s, r1, val, caps);
    UpdateSetFamily f2 = delta(s, r2, val, caps);
    for (const UpdateSet& a : f1)
        for (const UpdateSet& b : f2)
            if (is_consistent(set_union(a, b))) return true;
    return false;
}

// --- defining formulas ---------------------------------------------------------

namespace {

FreshGen fresh_for(const SigContext& ctx) {
    FreshGen fresh;
    for (const FunctionDecl& d : ctx.sig.decls()) fresh.reserve_name(d.name);
    for (const auto& [name, sort] : ctx.atoms) fresh.reserve_name(name);
    return fresh;
}

}  // namespace

Formula con_formula(const Rule& r, const std::string& x_var, const SigContext& ctx) {
    FreshGen fresh = fresh_for(ctx);
    fresh.reserve(r);
    fresh.reserve_name(x_var);
    return f_and(f_upd(r, x_var), con_uset_formula(x_var, ctx, fresh));
}

Formula wcon_formula(const Rule& r, const SigContext& ctx) {
    FreshGen fresh = fresh_for(ctx);
    fresh.reserve(r);
    std::string x = fresh.fresh("X");
    return f_exists(x, VarSort::Pred1, con_formula(r, x, ctx));
}

Formula scon_formula(const Rule& r, const SigContext& ctx) {
    FreshGen fresh = fresh_for(ctx);
    fresh.reserve(r);
    std::string x = fresh.fresh("X");
    return f_forall(x, VarSort::Pred1, f_implies(f_upd(r, x), con_formula(r, x, ctx)));
}

namespace {

// ⋀_f ∀x y z (X1(f,x,y) ∧ X2(f,x,z) → y = z)
Formula cross_consistency(const std::string& x1, const std::string& x2, const SigContext& ctx,
                          FreshGen& fresh) {
    std::string xv = fresh.fresh("x");
    std::string yv = fresh.fresh("y");
    std::string zv = fresh.fresh("z");
    Formula acc;
    bool have = false;
    for (const FunctionDecl& d : ctx.sig.decls()) {
        if (!d.dynamic) continue;
        VarSort arg = Signature::arg_sort(d.kind) == TermSort::Point ? VarSort::Ind1 : VarSort::Ind2;
        VarSort valso = Signature::value_sort(d.kind) == TermSort::Point ? VarSort::Ind1 : VarSort::Ind2;
        Term x = Term::var(xv, arg), y = Term::var(yv, valso), z = Term::var(zv, valso);
        Formula body = f_implies(f_and(f_mem1(x1, d.name, x, y), f_mem1(x2, d.name, x, z)),
                                 f_eq(y, z));
        Formula quant = f_forall(xv, arg, f_forall(yv, valso, f_forall(zv, valso, std::move(body))));
        acc = have ? f_and(std::move(acc), std::move(quant)) : std::move(quant);
        have = true;
    }
    if (!have) acc = f_tautology();  // no dynamic functions
    return acc;
}

}  // namespace

Formula joinable_formula(const Rule& r1, const Rule& r2, const SigContext& ctx) {
    FreshGen fresh = fresh_for(ctx);
    fresh.reserve(r1);
    fresh.reserve(r2);
    std::string x1 = fresh.fresh("X");
    std::string x2 = fresh.fresh("X");
    // Cross-consistency plus internal consistency of both sets: a pair of
    // update sets is joinable when its union is conflict-free.
    Formula inner = f_and(f_upd(r2, x2),
                          f_and(con_uset_formula(x1, ctx, fresh),
                                f_and(con_uset_formula(x2, ctx, fresh),
                                      cross_consistency(x1, x2, ctx, fresh))));
    return f_exists(x1, VarSort::Pred1,
                    f_and(f_upd(r1, x1), f_exists(x2, VarSort::Pred1, std::move(inner))));
}

Formula box_formula(const Rule& r, Formula phi, const SigContext& ctx) {
    FreshGen fresh = fresh_for(ctx);
    fresh.reserve(r);
    fresh.reserve(phi);
    std::string x = fresh.fresh("X");
    return f_forall(x, VarSort::Pred1, f_implies(f_upd(r, x), f_modal(x, std::move(phi))));
}

Formula diamond_formula(const Rule& r, Formula phi, const SigContext& ctx) {
    FreshGen fresh = fresh_for(ctx);
    fresh.reserve(r);
    fresh.reserve(phi);
    std::string x = fresh.fresh("X");
    return f_exists(x, VarSort::Pred1, f_and(f_upd(r, x), f_modal(x, std::move(phi))));
}

bool rules_equivalent(const Rule& r1, const Rule& r2, std::span<const State> states,
                      const Caps& caps) {
    if (!is_closed(r1) || !is_closed(r2))
        throw SortError("rule equivalence requires closed rules");
    for (const State& s : states) {
        Valuation val;
        if (!(delta(s, r1, val, caps) == delta(s, r2, val, caps))) return false;
    }
    return true;
}

}  // namespace asmw
