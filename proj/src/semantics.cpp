#include "asmw/semantics.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <unordered_map>

#include "asmw/analysis.hpp"
#include "asmw/logic.hpp"

namespace asmw {

Value eval_term(const State& s, const Term& t, const Valuation& val) {
    switch (t.kind) {
        case Term::Kind::Var:
            return val.ind(t.name, t.var_sort);
        case Term::Kind::Atom: {
            Value v = s.carriers().id(t.name);
            if (v == kNoValue) throw SortError("atom '" + t.name + "' not in this state's carriers");
            if (!s.carriers().in_sort(v, t.atom_sort))
                throw SortError("atom '" + t.name + "' is in the wrong carrier");
            return v;
        }
        case Term::Kind::App: {
            int fn = s.sig().index_of(t.name);
            const FunctionDecl& d = s.sig().decl(fn);
            if (static_cast<int>(t.args.size()) != d.arity)
                throw SortError("arity mismatch for '" + t.name + "'");
            std::vector<Value> args;
            args.reserve(t.args.size());
            for (const Term& a : t.args) args.push_back(eval_term(s, a, val));
            TermSort want = Signature::arg_sort(d.kind);
            for (Value a : args)
                if (!s.carriers().in_sort(a, want))
                    throw SortError("ill-sorted argument for '" + t.name + "'");
            return s.lookup(fn, args);
        }
    }
    throw SortError("bad term");
}

namespace {

void check_caps(const UpdateSetFamily& fam, const Caps& caps) {
    if (fam.size() > caps.max_family)
        throw ResourceLimit("update-set family exceeds cap (" + std::to_string(caps.max_family) + ")");
    for (const UpdateSet& u : fam)
        if (u.size() > caps.max_set)
            throw ResourceLimit("update set exceeds cap (" + std::to_string(caps.max_set) + ")");
}

UpdateSetFamily delta_impl(const State& s, const Rule& r, Valuation& val, const Caps& caps) {
    switch (r.kind) {
        case Rule::Kind::UpdatePrimary:
        case Rule::Kind::UpdateSecondary:
        case Rule::Kind::UpdateBridge: {
            int fn = s.sig().index_of(r.fn);
            Value a = eval_term(s, r.arg, val);
            Value b = eval_term(s, r.rhs, val);
            UpdateSetFamily fam;
            fam.add(UpdateSet::single(Update{fn, a, b}));
            fam.finish();
            return fam;
        }
        case Rule::Kind::If: {
            if (eval_formula(s, r.guard, val, caps)) return delta_impl(s, r.kids[0], val, caps);
            UpdateSetFamily fam;
            fam.add(UpdateSet::empty());
            fam.finish();
            return fam;
        }
        case Rule::Kind::Forall: {
            // Unions over one choice of update set per witness.
            std::vector<UpdateSetFamily> branches;
            for (Value a : s.carriers().values_of(TermSort::Point)) {
                ScopedBindInd bind(val, r.var, VarSort::Ind1, a);
                if (!eval_formula(s, r.guard, val, caps)) continue;
                branches.push_back(delta_impl(s, r.kids[0], val, caps));
            }
            std::vector<UpdateSet> acc{UpdateSet::empty()};
            for (const UpdateSetFamily& fam : branches) {
                std::vector<UpdateSet> next;
                if (acc.size() * fam.size() > caps.max_family)
                    throw ResourceLimit("forall cross-product exceeds family cap");
                next.reserve(acc.size() * fam.size());
                for (const UpdateSet& left : acc)
                    for (const UpdateSet& pick : fam) next.push_back(set_union(left, pick));
                acc = std::move(next);
                if (acc.empty()) break;  // some witness yields no update set at all
            }
            UpdateSetFamily out(std::move(acc));
            check_caps(out, caps);
            return out;
        }
        case Rule::Kind::Choose:
        case Rule::Kind::ChooseU: {
            TermSort sort = r.kind == Rule::Kind::Choose ? TermSort::Point : TermSort::Algorithmic;
            VarSort vs = r.kind == Rule::Kind::Choose ? VarSort::Ind1 : VarSort::Ind2;
            UpdateSetFamily out;
            for (Value a : s.carriers().values_of(sort)) {
                ScopedBindInd bind(val, r.var, vs, a);
                if (!eval_formula(s, r.guard, val, caps)) continue;
                UpdateSetFamily fam = delta_impl(s, r.kids[0], val, caps);
                for (const UpdateSet& u : fam) out.add(u);
                out.finish();
                check_caps(out, caps);
            }
            out.finish();
            return out;
        }
        case Rule::Kind::Par: {
            UpdateSetFamily f1 = delta_impl(s, r.kids[0], val, caps);
            UpdateSetFamily f2 = delta_impl(s, r.kids[1], val, caps);
            if (f1.size() * f2.size() > caps.max_family)
                throw ResourceLimit("par cross-product exceeds family cap");
            UpdateSetFamily out;
            for (const UpdateSet& a : f1)
                for (const UpdateSet& b : f2) out.add(set_union(a, b));
            out.finish();
            check_caps(out, caps);
            return out;
        }
        case Rule::Kind::Seq: {
            UpdateSetFamily f1 = delta_impl(s, r.kids[0], val, caps);
            UpdateSetFamily out;
            for (const UpdateSet& d1 : f1) {
                if (!is_consistent(d1)) {
                    out.add(d1);  // inconsistent first stages are kept verbatim
                    continue;
                }
                State mid = apply_unchecked(s, d1);
                UpdateSetFamily f2 = delta_impl(mid, r.kids[1], val, caps);
                for (const UpdateSet& d2 : f2) out.add(seq_merge(d1, d2));
                out.finish();
                check_caps(out, caps);
            }
            out.finish();
            return out;
        }
    }
    throw SortError("bad rule");
}

}  // namespace

UpdateSetFamily delta(const State& s, const Rule& r, Valuation& val, const Caps& caps) {
    UpdateSetFamily fam = delta_impl(s, r, val, caps);
    check_caps(fam, caps);
    return fam;
}

namespace {

std::vector<State> sorted_unique_states(std::vector<State> states) {
    // Canonical order: lexicographic over the dynamic tables.
    auto less = [](const State& a, const State& b) {
        for (size_t i = 0; i < a.sig().size(); ++i) {
            if (!a.sig().decl(static_cast<int>(i)).dynamic) continue;
            const auto& da = a.table(static_cast<int>(i)).data;
            const auto& db = b.table(static_cast<int>(i)).data;
            if (da != db) return da < db;
        }
        return false;
    };
    std::sort(states.begin(), states.end(), less);
    states.erase(std::unique(states.begin(), states.end(),
                             [](const State& a, const State& b) { return a.same_dynamics(b); }),
                 states.end());
    return states;
}

}  // namespace

std::vector<State> successors(const State& s, const Rule& r, const Caps& caps) {
    if (!is_closed(r)) throw SortError("successor relation requires a closed rule");
    Valuation val;
    UpdateSetFamily fam = delta(s, r, val, caps);
    std::vector<State> out;
    for (const UpdateSet& u : fam)
        if (is_consistent(u)) out.push_back(apply(s, u));
    return sorted_unique_states(std::move(out));
}

bool state_satisfies(const State& s, const Formula& f, const Caps& caps) {
    Valuation val;
    return eval_formula(s, f, val, caps);
}

RunReport run(const Machine& m, const State& s0, int max_steps, RunMode mode, uint64_t seed,
              const Caps& caps) {
    RunReport report;
    auto is_final = [&](const State& s) {
        return m.final && state_satisfies(s, *m.final, caps);
    };

    if (is_final(s0)) {
        // The zero-length run.
        report.initial_is_final = true;
        report.terminal_states.push_back(s0);
        report.trace_count = 1;
        return report;
    }

    if (mode == RunMode::Sample) {
        std::mt19937_64 rng(seed);
        State cur = s0;
        report.sample_trace.push_back(cur);
        for (int step = 0; step < max_steps; ++step) {
            std::vector<State> nexts = successors(cur, m.rule, caps);
            if (nexts.empty()) {
                report.stuck_states.push_back(cur);
                return report;
            }
            std::uniform_int_distribution<size_t> pick(0, nexts.size() - 1);
            cur = nexts[pick(rng)];
            report.sample_trace.push_back(cur);
            report.max_depth_explored = step + 1;
            if (is_final(cur)) {
                report.sample_reached_final = true;
                report.terminal_states.push_back(cur);
                report.trace_count = 1;
                return report;
            }
        }
        report.hit_step_cap = true;
        return report;
    }

    // Exhaustive exploration, layered by depth; traces are counted by walk
    // (states deduplicated per layer, path counts accumulated).
    struct Hash {
        size_t operator()(const State* s) const { return s->dynamics_hash(); }
    };
    struct Eq {
        bool operator()(const State* a, const State* b) const { return a->same_dynamics(*b); }
    };

    std::vector<State> terminals;
    std::vector<State> stuck;

    std::deque<State> keep_alive;  // owns frontier states across layers
    keep_alive.push_back(s0);
    std::unordered_map<const State*, uint64_t, Hash, Eq> frontier;
    frontier.emplace(&keep_alive.back(), 1);

    for (int depth = 0; depth < max_steps && !frontier.empty(); ++depth) {
        std::unordered_map<const State*, uint64_t, Hash, Eq> next;
        std::deque<State> next_alive;
        for (const auto& [sp, count] : frontier) {
            std::vector<State> nexts = successors(*sp, m.rule, caps);
            if (nexts.empty()) {
                stuck.push_back(*sp);
                continue;
            }
            for (State& ns : nexts) {
                if (is_final(ns)) {
                    report.trace_count += count;
                    terminals.push_back(ns);
                    continue;
                }
                next_alive.push_back(std::move(ns));
                auto [it, fresh] = next.emplace(&next_alive.back(), count);
                if (!fresh) {
                    it->second += count;
                    next_alive.pop_back();
                }
            }
        }
        report.max_depth_explored = depth + 1;
        frontier = std::move(next);
        keep_alive = std::move(next_alive);
    }
    if (!frontier.empty()) report.hit_step_cap = true;
    report.terminal_states = sorted_unique_states(std::move(terminals));
    report.stuck_states = sorted_unique_states(std::move(stuck));
    return report;
}

}  // namespace asmw
