#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "asmw/analysis.hpp"
#include "asmw/ast.hpp"
#include "asmw/caps.hpp"
#include "asmw/schemas.hpp"
#include "asmw/semantics.hpp"

namespace asmw {

// Truth value of an L-formula on a finite state under a valuation, with
// the modal clause [X]phi = true when zeta(X) has no successor state. Quantifiers over predicate sorts search delta families
// when the body is upd-rooted and otherwise enumerate the (well-kinded)
// finite-subset domain up to caps.max_pred_enum.
bool eval_formula(const State& s, const Formula& f, Valuation& val, const Caps& caps);

// Predicate-sort domains over a state's carriers.
struct PredicateDomains {
    // All well-kinded triples (f dynamic, arg, value); strict additionally
    // admits the raw product's ill-kinded triples.
    static std::vector<Update> triple_universe(const State& s, bool strict = false);
    static std::vector<TaggedUpdate> quad_universe(const State& s, bool strict = false);
};

// Derived consistency predicates, computed by direct enumeration of delta.
bool op_con_uset(const UpdateSet& u);
bool op_con(const State& s, const Rule& r, const UpdateSet& x, Valuation& val, const Caps& caps);
bool op_wcon(const State& s, const Rule& r, Valuation& val, const Caps& caps);
bool op_scon(const State& s, const Rule& r, Valuation& val, const Caps& caps);
// Some pair of yielded update sets whose union is conflict-free.
bool op_joinable(const State& s, const Rule& r1, const Rule& r2, Valuation& val, const Caps& caps);

// Defining formulas for the derived predicates (desugared core ASTs).
Formula con_formula(const Rule& r, const std::string& x_var, const SigContext& ctx);
Formula wcon_formula(const Rule& r, const SigContext& ctx);
Formula scon_formula(const Rule& r, const SigContext& ctx);
Formula joinable_formula(const Rule& r1, const Rule& r2, const SigContext& ctx);

// [r]phi / <r>phi desugarings with a fresh update-set variable.
Formula box_formula(const Rule& r, Formula phi, const SigContext& ctx);
Formula diamond_formula(const Rule& r, Formula phi, const SigContext& ctx);

// Finite-scope check of rule equivalence: equal delta families on every
// supplied state.
bool rules_equivalent(const Rule& r1, const Rule& r2, std::span<const State> states,
                      const Caps& caps);

// --- schema validity trials -------------------------------------------------

struct Counterexample {
    std::string description;
};

struct SchemaReport {
    std::string schema;
    int trials = 0;
    int counterexamples = 0;
    int resource_skips = 0;
    uint64_t seed = 0;
    std::vector<Counterexample> examples;  // first few
};

// Runs `trials` random instantiations of the named axiom schema over random
// small states and reports counterexamples (none expected for the sound
// schemas; the corrupted control schemas exist to prove the harness can find
// them).
SchemaReport validate_schema(const std::string& schema_id, int trials, uint64_t seed,
                             const Caps& caps);

}  // namespace asmw
