#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "asmw/errors.hpp"
#include "asmw/signature.hpp"
#include "asmw/updates.hpp"

namespace asmw {

// Variable sorts of the logic: the two individual sorts plus the two
// predicate sorts (values are UpdateSet / TaggedUpdateSet).
enum class VarSort { Ind1, Ind2, Pred1, Pred2 };

inline const char* sigil(VarSort s) {
    switch (s) {
        case VarSort::Ind1: return "";
        case VarSort::Ind2: return "$";
        case VarSort::Pred1: return "%";
        case VarSort::Pred2: return "%%";
    }
    return "";
}

struct VarRef {
    std::string name;
    VarSort sort = VarSort::Ind1;
    auto operator<=>(const VarRef&) const = default;
};

// ---------------------------------------------------------------------------
// Terms

struct Term {
    enum class Kind { Var, Atom, App };

    Kind kind = Kind::Var;
    // Var: variable name (without sigil) + var_sort (Ind1/Ind2).
    // Atom: carrier atom used as a constant; atom_sort gives its carrier.
    // App: function name + argument terms.
    std::string name;
    VarSort var_sort = VarSort::Ind1;
    TermSort atom_sort = TermSort::Point;
    std::vector<Term> args;

    static Term var(std::string n, VarSort s) {
        Term t;
        t.kind = Kind::Var;
        t.name = std::move(n);
        t.var_sort = s;
        return t;
    }
    static Term atom(std::string n, TermSort s) {
        Term t;
        t.kind = Kind::Atom;
        t.name = std::move(n);
        t.atom_sort = s;
        return t;
    }
    static Term app(std::string n, std::vector<Term> as = {}) {
        Term t;
        t.kind = Kind::App;
        t.name = std::move(n);
        t.args = std::move(as);
        return t;
    }

    bool operator==(const Term&) const = default;
};

// ---------------------------------------------------------------------------
// Formulas (core: the surface connectives ∨ → ↔ ∃ and the rule modalities
// [r]/<r> plus wcon/scon/con/conUSet/joinable are desugared at parse time).

struct Rule;

struct Formula {
    enum class Kind { Eq, Not, And, Forall, Mem1, Mem2, Upd, Modal };

    Kind kind = Kind::Eq;
    Term lhs, rhs;               // Eq
    std::vector<Formula> kids;   // Not:1, And:2, Forall:1, Modal:1
    std::string var;             // Forall binder / Modal,Mem,Upd predicate variable
    VarSort var_sort = VarSort::Ind1;
    std::string fn;              // Mem1/Mem2 function name
    std::vector<Term> terms;     // Mem1: t0,s0   Mem2: t0,s0,s
    std::shared_ptr<const Rule> rule;  // Upd

    bool operator==(const Formula& o) const;
};

struct Rule {
    // Update kinds are split by the target function's kind as in the three
    // update rule forms; Choose is the bounded (sort-1) rule, ChooseU the
    // unbounded (sort-2) one.
    enum class Kind { UpdatePrimary, UpdateSecondary, UpdateBridge, If, Forall, Choose, ChooseU, Par, Seq };

    Kind kind = Kind::UpdatePrimary;
    std::string fn;   // updates
    Term arg, rhs;    // updates: f(arg) := rhs
    Formula guard;    // If / Forall / Choose / ChooseU
    std::string var;  // Forall/Choose binder (Ind1), ChooseU binder (Ind2)
    std::vector<Rule> kids;  // If/Forall/Choose: body; Par/Seq: r1 r2

    bool operator==(const Rule&) const = default;

    bool is_update() const {
        return kind == Kind::UpdatePrimary || kind == Kind::UpdateSecondary ||
               kind == Kind::UpdateBridge;
    }
    bool has_binder() const {
        return kind == Kind::Forall || kind == Kind::Choose || kind == Kind::ChooseU;
    }
    VarSort binder_sort() const { return kind == Kind::ChooseU ? VarSort::Ind2 : VarSort::Ind1; }
};

inline bool Formula::operator==(const Formula& o) const {
    if (kind != o.kind || var != o.var || var_sort != o.var_sort || fn != o.fn) return false;
    if (!(lhs == o.lhs) || !(rhs == o.rhs)) return false;
    if (!(kids == o.kids) || !(terms == o.terms)) return false;
    if (static_cast<bool>(rule) != static_cast<bool>(o.rule)) return false;
    if (rule && !(*rule == *o.rule)) return false;
    return true;
}

// Builders -------------------------------------------------------------------

inline Formula f_eq(Term a, Term b) {
    Formula f;
    f.kind = Formula::Kind::Eq;
    f.lhs = std::move(a);
    f.rhs = std::move(b);
    return f;
}
inline Formula f_not(Formula a) {
    Formula f;
    f.kind = Formula::Kind::Not;
    f.kids.push_back(std::move(a));
    return f;
}
inline Formula f_and(Formula a, Formula b) {
    Formula f;
    f.kind = Formula::Kind::And;
    f.kids.push_back(std::move(a));
    f.kids.push_back(std::move(b));
    return f;
}
inline Formula f_forall(std::string var, VarSort s, Formula body) {
    Formula f;
    f.kind = Formula::Kind::Forall;
    f.var = std::move(var);
    f.var_sort = s;
    f.kids.push_back(std::move(body));
    return f;
}
inline Formula f_mem1(std::string pred_var, std::string fn, Term t0, Term s0) {
    Formula f;
    f.kind = Formula::Kind::Mem1;
    f.var = std::move(pred_var);
    f.var_sort = VarSort::Pred1;
    f.fn = std::move(fn);
    f.terms = {std::move(t0), std::move(s0)};
    return f;
}
inline Formula f_mem2(std::string pred_var, std::string fn, Term t0, Term s0, Term s) {
    Formula f;
    f.kind = Formula::Kind::Mem2;
    f.var = std::move(pred_var);
    f.var_sort = VarSort::Pred2;
    f.fn = std::move(fn);
    f.terms = {std::move(t0), std::move(s0), std::move(s)};
    return f;
}
inline Formula f_upd(Rule r, std::string pred_var) {
    Formula f;
    f.kind = Formula::Kind::Upd;
    f.rule = std::make_shared<const Rule>(std::move(r));
    f.var = std::move(pred_var);
    f.var_sort = VarSort::Pred1;
    return f;
}
inline Formula f_modal(std::string pred_var, Formula body) {
    Formula f;
    f.kind = Formula::Kind::Modal;
    f.var = std::move(pred_var);
    f.var_sort = VarSort::Pred1;
    f.kids.push_back(std::move(body));
    return f;
}

// Derived connectives (the parse-time desugaring).
inline Formula f_or(Formula a, Formula b) { return f_not(f_and(f_not(std::move(a)), f_not(std::move(b)))); }
inline Formula f_implies(Formula a, Formula b) { return f_not(f_and(std::move(a), f_not(std::move(b)))); }
inline Formula f_iff(Formula a, Formula b) {
    Formula ab = f_implies(a, b);
    Formula ba = f_implies(std::move(b), std::move(a));
    return f_and(std::move(ab), std::move(ba));
}
inline Formula f_exists(std::string var, VarSort s, Formula body) {
    return f_not(f_forall(std::move(var), s, f_not(std::move(body))));
}
// Closed truth/falsehood without referring to any atom or function (B1 is
// never empty, so ∀x(x=x) holds in every state).
inline Formula f_tautology() {
    Term v = Term::var("xTaut", VarSort::Ind1);
    return f_forall("xTaut", VarSort::Ind1, f_eq(v, v));
}
inline Formula f_contradiction() { return f_not(f_tautology()); }

inline Rule r_update(Rule::Kind k, std::string fn, Term arg, Term rhs) {
    Rule r;
    r.kind = k;
    r.fn = std::move(fn);
    r.arg = std::move(arg);
    r.rhs = std::move(rhs);
    return r;
}
inline Rule r_if(Formula guard, Rule body) {
    Rule r;
    r.kind = Rule::Kind::If;
    r.guard = std::move(guard);
    r.kids.push_back(std::move(body));
    return r;
}
inline Rule r_binder(Rule::Kind k, std::string var, Formula guard, Rule body) {
    Rule r;
    r.kind = k;
    r.var = std::move(var);
    r.guard = std::move(guard);
    r.kids.push_back(std::move(body));
    return r;
}
inline Rule r_par(Rule a, Rule b) {
    Rule r;
    r.kind = Rule::Kind::Par;
    r.kids.push_back(std::move(a));
    r.kids.push_back(std::move(b));
    return r;
}
inline Rule r_seq(Rule a, Rule b) {
    Rule r;
    r.kind = Rule::Kind::Seq;
    r.kids.push_back(std::move(a));
    r.kids.push_back(std::move(b));
    return r;
}

// ---------------------------------------------------------------------------
// Machines

struct Machine {
    SigContext ctx;
    Rule rule;                      // closed
    Formula init;                   // initial-state predicate (closed)
    std::optional<Formula> final;   // final-state predicate; nullopt = none
};

// ---------------------------------------------------------------------------
// Valuations

class Valuation {
public:
    Value ind(const std::string& name, VarSort s) const {
        const auto& m = s == VarSort::Ind1 ? ind1_ : ind2_;
        auto it = m.find(name);
        if (it == m.end()) throw UnboundVariable("unbound variable '" + std::string(sigil(s)) + name + "'");
        return it->second;
    }
    const UpdateSet& pred1(const std::string& name) const {
        auto it = pred1_.find(name);
        if (it == pred1_.end()) throw UnboundVariable("unbound variable '%" + name + "'");
        return it->second;
    }
    const TaggedUpdateSet& pred2(const std::string& name) const {
        auto it = pred2_.find(name);
        if (it == pred2_.end()) throw UnboundVariable("unbound variable '%%" + name + "'");
        return it->second;
    }

    // In-place handles for enumeration loops; the name must be bound.
    UpdateSet& pred1_ref(const std::string& name) { return pred1_.at(name); }
    TaggedUpdateSet& pred2_ref(const std::string& name) { return pred2_.at(name); }

    void bind_ind(const std::string& name, VarSort s, Value v) {
        (s == VarSort::Ind1 ? ind1_ : ind2_)[name] = v;
    }
    void bind_pred1(const std::string& name, UpdateSet v) { pred1_[name] = std::move(v); }
    void bind_pred2(const std::string& name, TaggedUpdateSet v) { pred2_[name] = std::move(v); }

    void unbind(const std::string& name, VarSort s) {
        switch (s) {
            case VarSort::Ind1: ind1_.erase(name); break;
            case VarSort::Ind2: ind2_.erase(name); break;
            case VarSort::Pred1: pred1_.erase(name); break;
            case VarSort::Pred2: pred2_.erase(name); break;
        }
    }

    bool bound(const std::string& name, VarSort s) const {
        switch (s) {
            case VarSort::Ind1: return ind1_.count(name) > 0;
            case VarSort::Ind2: return ind2_.count(name) > 0;
            case VarSort::Pred1: return pred1_.count(name) > 0;
            case VarSort::Pred2: return pred2_.count(name) > 0;
        }
        return false;
    }

private:
    std::unordered_map<std::string, Value> ind1_, ind2_;
    std::unordered_map<std::string, UpdateSet> pred1_;
    std::unordered_map<std::string, TaggedUpdateSet> pred2_;
};

// RAII re-binder: saves any previous binding of the name and restores it.
template <typename T>
class ScopedBind;

class ScopedBindInd {
public:
    ScopedBindInd(Valuation& v, const std::string& name, VarSort s, Value val)
        : v_(v), name_(name), sort_(s) {
        had_ = v.bound(name, s);
        if (had_) prev_ = v.ind(name, s);
        v.bind_ind(name, s, val);
    }
    ~ScopedBindInd() {
        if (had_) v_.bind_ind(name_, sort_, prev_);
        else v_.unbind(name_, sort_);
    }

private:
    Valuation& v_;
    std::string name_;
    VarSort sort_;
    bool had_ = false;
    Value prev_ = 0;
};

class ScopedBindPred1 {
public:
    ScopedBindPred1(Valuation& v, const std::string& name, UpdateSet val) : v_(v), name_(name) {
        had_ = v.bound(name, VarSort::Pred1);
        if (had_) prev_ = v.pred1(name);
        v.bind_pred1(name, std::move(val));
    }
    ~ScopedBindPred1() {
        if (had_) v_.bind_pred1(name_, std::move(prev_));
        else v_.unbind(name_, VarSort::Pred1);
    }

private:
    Valuation& v_;
    std::string name_;
    bool had_ = false;
    UpdateSet prev_;
};

class ScopedBindPred2 {
public:
    ScopedBindPred2(Valuation& v, const std::string& name, TaggedUpdateSet val) : v_(v), name_(name) {
        had_ = v.bound(name, VarSort::Pred2);
        if (had_) prev_ = v.pred2(name);
        v.bind_pred2(name, std::move(val));
    }
    ~ScopedBindPred2() {
        if (had_) v_.bind_pred2(name_, std::move(prev_));
        else v_.unbind(name_, VarSort::Pred2);
    }

private:
    Valuation& v_;
    std::string name_;
    bool had_ = false;
    TaggedUpdateSet prev_;
};

}  // namespace asmw
