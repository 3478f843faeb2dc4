#pragma once

#include <set>
#include <string>

#include "asmw/ast.hpp"
#include "asmw/signature.hpp"

namespace asmw {

// Classification of a term per the metafinite term discipline. Throws
// SortError for ill-formed applications (wrong kind/arity/argument sorts).
TermSort sort_of(const Term& t, const SigContext& ctx);

// Well-sortedness checks; throw SortError on violations.
void check_formula(const Formula& f, const SigContext& ctx);
void check_rule(const Rule& r, const SigContext& ctx);

// True if the formula stays inside the first-order fragment used by rule
// guards (no membership atoms, no upd, no modal, no predicate quantifiers).
bool is_first_order(const Formula& f);

// Free variables (all four sorts).
std::set<VarRef> free_variables(const Term& t);
std::set<VarRef> free_variables(const Formula& f);
std::set<VarRef> free_variables(const Rule& r);
bool is_closed(const Rule& r);

// A formula is static if every function symbol occurring in it (including
// inside embedded rules and membership atoms) is static.
bool is_static(const Formula& f, const SigContext& ctx);
bool is_static_term(const Term& t, const SigContext& ctx);

// Pure formulas: equalities, ¬, ∧ and individual-sort quantification only.
bool is_pure(const Formula& f);

// Substitution of a term for an individual variable, or of a predicate
// variable for a predicate variable. Substitution is defined only when no
// free variable of the witness would be captured; capture is an error.
Term substitute(const Term& in, const VarRef& x, const Term& t);
Formula substitute(const Formula& in, const VarRef& x, const Term& t);
Rule substitute(const Rule& in, const VarRef& x, const Term& t);
Formula substitute_pred(const Formula& in, const VarRef& x, const std::string& y);

// Alpha-equivalence on formulas (bound names ignored).
bool alpha_equal(const Formula& a, const Formula& b);

// Node counts (terms count as nodes too); used for translation caps.
size_t node_count(const Term& t);
size_t node_count(const Formula& f);
size_t node_count(const Rule& r);

// Dispenses variable names unused in the formulas/rules registered with it.
class FreshGen {
public:
    void reserve(const Term& t);
    void reserve(const Formula& f);
    void reserve(const Rule& r);
    void reserve_name(const std::string& n) { used_.insert(n); }
    std::string fresh(const std::string& stem);

private:
    std::set<std::string> used_;
    int counter_ = 0;
};

}  // namespace asmw
