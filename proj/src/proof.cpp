#include "asmw/proof.hpp"

#include <algorithm>

#include "asmw/analysis.hpp"
#include "asmw/logic.hpp"
#include "asmw/printer.hpp"

namespace asmw {

namespace {

bool is_proof_axiom(const std::string& id) {
    for (const std::string& a : axiom_schema_ids())
        if (a == id) return true;
    return false;
}

bool is_inference_rule(const std::string& id) {
    return id == "M2" || id == "M3" || id == "UI" || id == "EG" || id == "UG" || id == "EI";
}

Formula universal_closure(const Formula& f) {
    Formula out = f;
    std::set<VarRef> fvs = free_variables(f);
    for (auto it = fvs.rbegin(); it != fvs.rend(); ++it)
        out = f_forall(it->name, it->sort, std::move(out));
    return out;
}

struct Checker {
    const Derivation& d;
    const CheckContext& ctx;
    bool used_axiomatic = false;
    std::vector<bool> depends_on_hyp;

    [[noreturn]] void reject(int line, const std::string& why) {
        throw LineError{line, why};
    }

    const DerivationLine& premise(const DerivationLine& line, size_t idx) {
        if (idx >= line.just.premises.size())
            reject(line.number, "missing premise");
        int n = line.just.premises[idx];
        if (n <= 0 || n >= line.number)
            reject(line.number, "premise " + std::to_string(n) + " is not an earlier line");
        for (const DerivationLine& l : d.lines)
            if (l.number == n) return l;
        reject(line.number, "premise " + std::to_string(n) + " does not exist");
    }

    std::vector<const State*> certificate_states(const DerivationLine& line) {
        std::vector<const State*> out;
        for (const std::string& name : line.just.cert.state_files) {
            const State* found = nullptr;
            for (const auto& [file, st] : ctx.certificate_states)
                if (file == name) found = &st;
            if (!found) reject(line.number, "certificate state '" + name + "' not provided");
            out.push_back(found);
        }
        return out;
    }

    // Finite-scope validity of a formula over the certificate states; any
    // `axiomatic` certificate downgrades the overall result instead.
    bool discharge(const DerivationLine& line, const Formula& obligation) {
        const Certificate& cert = line.just.cert;
        if (cert.kind == Certificate::Kind::Axiomatic) {
            used_axiomatic = true;
            return true;
        }
        if (cert.kind != Certificate::Kind::States)
            reject(line.number, "rule " + line.just.id + " requires a certificate");
        Formula closed = universal_closure(obligation);
        for (const State* s : certificate_states(line)) {
            Valuation val;
            try {
                if (!eval_formula(*s, closed, val, ctx.caps))
                    reject(line.number, "certificate check failed: " + print(obligation));
            } catch (const LineError&) {
                throw;
            } catch (const Error& e) {
                reject(line.number, std::string("certificate check error: ") + e.what());
            }
        }
        return true;
    }

    void check_line(const DerivationLine& line, size_t index) {
        const Justification& j = line.just;
        switch (j.kind) {
            case Justification::Kind::Hypothesis: {
                for (const Formula& h : d.hypotheses)
                    if (h == line.formula) {
                        depends_on_hyp[index] = true;
                        return;
                    }
                reject(line.number, "formula is not among the hypotheses");
            }
            case Justification::Kind::Axiom:
                check_axiom(line);
                return;
            case Justification::Kind::Rule:
                check_rule_app(line, index);
                return;
        }
    }

    void check_axiom(const DerivationLine& line) {
        const std::string& id = line.just.id;
        if (!is_proof_axiom(id))
            reject(line.number, "unknown axiom schema '" + id + "'");
        if (id == "E") {
            // The rule-equivalence hypothesis is discharged by certificate.
            auto it1 = line.just.inst.rules.find("r1");
            auto it2 = line.just.inst.rules.find("r2");
            if (it1 == line.just.inst.rules.end() || it2 == line.just.inst.rules.end())
                reject(line.number, "axiom E needs r1 and r2");
            if (line.just.cert.kind == Certificate::Kind::Axiomatic) {
                used_axiomatic = true;
            } else if (line.just.cert.kind == Certificate::Kind::States) {
                std::vector<const State*> sts = certificate_states(line);
                std::vector<State> owned;
                owned.reserve(sts.size());
                for (const State* s : sts) owned.push_back(*s);
                try {
                    if (!rules_equivalent(it1->second, it2->second, owned, ctx.caps))
                        reject(line.number, "rules are not equivalent on the certificate states");
                } catch (const LineError&) {
                    throw;
                } catch (const Error& e) {
                    reject(line.number, std::string("equivalence check error: ") + e.what());
                }
            } else {
                reject(line.number, "axiom E requires a certificate for r1 == r2");
            }
        }
        Formula expected;
        try {
            expected = instantiate_schema(id, d.ctx, line.just.inst);
        } catch (const IllFormedInstantiation& e) {
            reject(line.number, std::string("ill-formed instantiation: ") + e.what());
        }
        if (!alpha_equal(expected, line.formula))
            reject(line.number,
                   "formula is not the stated instance of " + id + " (expected: " +
                       print(expected) + ")");
    }

    // Splits not(and(a, not(b))) back into (a, b); the shape f_implies builds.
    static bool match_implies(const Formula& f, const Formula** a, const Formula** b) {
        if (f.kind != Formula::Kind::Not) return false;
        const Formula& inner = f.kids[0];
        if (inner.kind != Formula::Kind::And) return false;
        if (inner.kids[1].kind != Formula::Kind::Not) return false;
        *a = &inner.kids[0];
        *b = &inner.kids[1].kids[0];
        return true;
    }

    static bool match_exists(const Formula& f, const Formula** body, VarRef* var) {
        // not(forall x (not(body)))
        if (f.kind != Formula::Kind::Not) return false;
        const Formula& q = f.kids[0];
        if (q.kind != Formula::Kind::Forall) return false;
        if (q.kids[0].kind != Formula::Kind::Not) return false;
        *body = &q.kids[0].kids[0];
        *var = {q.var, q.var_sort};
        return true;
    }

    Formula apply_subst(const DerivationLine& line, const Formula& phi, const VarRef& x) {
        // Individual sorts substitute a term; predicate sorts substitute a
        // variable.
        if (x.sort == VarSort::Ind1 || x.sort == VarSort::Ind2) {
            auto it = line.just.inst.terms.find("t");
            if (it == line.just.inst.terms.end())
                reject(line.number, "missing witness binding 't'");
            try {
                return substitute(phi, x, it->second);
            } catch (const IllFormedInstantiation& e) {
                reject(line.number, std::string("substitution: ") + e.what());
            }
        }
        auto it = line.just.inst.vars.find("y");
        if (it == line.just.inst.vars.end())
            reject(line.number, "missing witness binding 'y'");
        if (it->second.sort != x.sort)
            reject(line.number, "witness variable has the wrong sort");
        try {
            return substitute_pred(phi, x, it->second.name);
        } catch (const IllFormedInstantiation& e) {
            reject(line.number, std::string("substitution: ") + e.what());
        }
    }

    bool witness_is_generalization(const DerivationLine& line, const VarRef& x) {
        if (x.sort == VarSort::Ind1 || x.sort == VarSort::Ind2) {
            auto it = line.just.inst.terms.find("t");
            return it != line.just.inst.terms.end() && it->second.kind == Term::Kind::Var &&
                   it->second.name == x.name && it->second.var_sort == x.sort;
        }
        auto it = line.just.inst.vars.find("y");
        return it != line.just.inst.vars.end() && it->second == x;
    }

    bool witness_side_condition_ok(const DerivationLine& line, const Formula& phi,
                                   const VarRef& x) {
        if (is_pure(phi)) return true;
        if (x.sort == VarSort::Ind1 || x.sort == VarSort::Ind2) {
            auto it = line.just.inst.terms.find("t");
            return it != line.just.inst.terms.end() && is_static_term(it->second, d.ctx);
        }
        return true;  // predicate-variable witnesses carry no function symbols
    }

    void check_rule_app(const DerivationLine& line, size_t index) {
        const std::string& id = line.just.id;
        if (!is_inference_rule(id)) reject(line.number, "unknown inference rule '" + id + "'");
        // hypothesis dependence propagates through premises
        bool dep = false;
        for (int p : line.just.premises)
            for (size_t k = 0; k < d.lines.size(); ++k)
                if (d.lines[k].number == p) dep = dep || depends_on_hyp[k];
        depends_on_hyp[index] = dep;

        if (id == "M3") {
            const DerivationLine& p1 = premise(line, 0);
            const DerivationLine& p2 = premise(line, 1);
            const Formula *a = nullptr, *b = nullptr;
            if (!match_implies(p2.formula, &a, &b))
                reject(line.number, "second premise of M3 is not an implication");
            if (!(*a == p1.formula))
                reject(line.number, "M3 premises do not match (antecedent differs)");
            if (!(*b == line.formula))
                reject(line.number, "M3 conclusion does not match the implication");
            return;
        }
        if (id == "M2") {
            const DerivationLine& p = premise(line, 0);
            for (size_t k = 0; k < d.lines.size(); ++k)
                if (d.lines[k].number == p.number && depends_on_hyp[k])
                    reject(line.number, "necessitation premise depends on a hypothesis");
            if (line.formula.kind != Formula::Kind::Modal)
                reject(line.number, "M2 conclusion must be a modal formula");
            if (!(line.formula.kids[0] == p.formula))
                reject(line.number, "M2 conclusion does not box the premise");
            return;
        }
        if (id == "UI") {
            const DerivationLine& p = premise(line, 0);
            if (p.formula.kind != Formula::Kind::Forall)
                reject(line.number, "UI premise must be universally quantified");
            VarRef x{p.formula.var, p.formula.var_sort};
            const Formula& phi = p.formula.kids[0];
            if (!witness_side_condition_ok(line, phi, x))
                reject(line.number, "UI side condition: formula not pure and term not static");
            if (!(apply_subst(line, phi, x) == line.formula))
                reject(line.number, "UI conclusion is not the substituted instance");
            return;
        }
        if (id == "EG") {
            const Formula* body = nullptr;
            VarRef x;
            if (!match_exists(line.formula, &body, &x))
                reject(line.number, "EG conclusion must be existentially quantified");
            const DerivationLine& p = premise(line, 0);
            if (!witness_side_condition_ok(line, *body, x))
                reject(line.number, "EG side condition: formula not pure and term not static");
            if (!(apply_subst(line, *body, x) == p.formula))
                reject(line.number, "EG premise is not the substituted instance");
            return;
        }
        if (id == "UG") {
            if (line.formula.kind != Formula::Kind::Forall)
                reject(line.number, "UG conclusion must be universally quantified");
            VarRef x{line.formula.var, line.formula.var_sort};
            const Formula& phi = line.formula.kids[0];
            const DerivationLine& p = premise(line, 0);
            if (!(apply_subst(line, phi, x) == p.formula))
                reject(line.number, "UG premise is not the substituted instance");
            if (!witness_is_generalization(line, x) && !witness_side_condition_ok(line, phi, x))
                reject(line.number, "UG side condition: formula not pure and term not static");
            discharge(line, line.formula);
            return;
        }
        if (id == "EI") {
            const DerivationLine& p = premise(line, 0);
            const Formula* body = nullptr;
            VarRef x;
            if (!match_exists(p.formula, &body, &x))
                reject(line.number, "EI premise must be existentially quantified");
            if (!(apply_subst(line, *body, x) == line.formula))
                reject(line.number, "EI conclusion is not the substituted instance");
            if (!witness_is_generalization(line, x) && !witness_side_condition_ok(line, *body, x))
                reject(line.number, "EI side condition: formula not pure and term not static");
            discharge(line, f_implies(p.formula, line.formula));
            return;
        }
        reject(line.number, "unknown inference rule '" + id + "'");
    }
};

}  // namespace

CheckResult check(const Derivation& d, const CheckContext& ctx) {
    CheckResult result;
    Checker checker{d, ctx, false, {}};
    checker.depends_on_hyp.assign(d.lines.size(), false);

    // line numbers must be 1..n in order
    for (size_t i = 0; i < d.lines.size(); ++i) {
        if (d.lines[i].number != static_cast<int>(i) + 1) {
            result.status = CheckResult::Status::Rejected;
            result.error = LineError{d.lines[i].number, "lines must be numbered consecutively"};
            return result;
        }
    }
    try {
        for (size_t i = 0; i < d.lines.size(); ++i) checker.check_line(d.lines[i], i);
    } catch (const LineError& e) {
        result.status = CheckResult::Status::Rejected;
        result.error = e;
        return result;
    }
    result.status = checker.used_axiomatic ? CheckResult::Status::OkModuloCertificates
                                           : CheckResult::Status::Ok;
    return result;
}

}  // namespace asmw
