#pragma once

#include <map>
#include <string>
#include <vector>

#include "asmw/ast.hpp"
#include "asmw/caps.hpp"

namespace asmw {

// Arguments supplied for the metavariables of an axiom schema or inference
// rule. Which names are required, and of which kind, is fixed per schema id
// (see schema_metavars).
struct Instantiation {
    std::map<std::string, Formula> formulas;
    std::map<std::string, Term> terms;
    std::map<std::string, Rule> rules;
    std::map<std::string, VarRef> vars;
    std::map<std::string, std::string> funcs;  // dynamic function names
};

struct MetaVar {
    enum class Kind { FormulaK, TermK, RuleK, VarK, FnK };
    std::string name;
    Kind kind;
    bool optional = false;
};

// Axiom schema ids: U1..U7, M1, M4..M8, A1, A2, P1..P3, EQ1, EQ2, DY1, E.
// Corrupted control schemas for the mutation tests: A2-noguard, M4-noguard,
// M5-converse. Inference rules (M2, M3, UI, EG, UG, EI) are handled by the
// proof checker, not by instantiate_schema.
bool is_axiom_schema(const std::string& id);
std::vector<std::string> axiom_schema_ids();           // the real axioms
std::vector<std::string> control_schema_ids();         // corrupted controls
std::vector<MetaVar> schema_metavars(const std::string& id);

// Builds the concrete axiom instance for the given signature. Throws
// IllFormedInstantiation when pieces are missing, ill-sorted, or the schema's
// side conditions are violated (e.g. M7/M8 on a non-static non-pure formula).
Formula instantiate_schema(const std::string& id, const SigContext& ctx, const Instantiation& inst);

// The right-hand sides of the update-set axioms, shared between
// instantiate_schema and the translation pipeline. `x_var` is the update-set
// variable the rule's updates are asserted about.
class FreshGen;
Formula upd_rhs(const Rule& r, const std::string& x_var, const SigContext& ctx, FreshGen& fresh);

// conUSet(X) expanded for the signature.
Formula con_uset_formula(const std::string& x_var, const SigContext& ctx, FreshGen& fresh);
// "X is empty" clause used by U2: every dynamic function has no entry in X.
Formula empty_set_formula(const std::string& x_var, const SigContext& ctx, FreshGen& fresh);

}  // namespace asmw
