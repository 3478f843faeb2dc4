#pragma once

#include "asmw/ast.hpp"
#include "asmw/caps.hpp"
#include "asmw/signature.hpp"

namespace asmw {

// Rewrites all atoms into the canonical shapes (variable/constant equalities,
// function-over-variables equalities, membership atoms over variables),
// introducing fresh existentials. Evaluation-equivalent.
Formula flatten_atoms(const Formula& f, const SigContext& ctx);

// Replaces every upd(r, X) atom by the matching update-set axiom right-hand
// side, recursing through the sub-rules. Output contains no upd atoms.
Formula eliminate_upd(const Formula& f, const SigContext& ctx);

// Removes modal atoms from an upd-free formula with flattened atoms. Output
// is modality-free.
Formula eliminate_modal(const Formula& f, const SigContext& ctx);

struct TranslateSummary {
    size_t nodes_in = 0;
    size_t nodes_out = 0;
    int iterations = 0;
};

// Full pipeline into the upd-free, modality-free fragment; iterates
// flatten / eliminate_upd / eliminate_modal to a fixpoint and verifies the
// output syntactically. Throws ResourceLimit if the output exceeds
// caps.max_formula_nodes.
Formula to_lin(const Formula& f, const SigContext& ctx, const Caps& caps,
               TranslateSummary* summary = nullptr);

// Membership in the restricted fragment (no upd, no modal operator).
bool is_lin(const Formula& f);
// All atoms in canonical flattened shape.
bool is_flat(const Formula& f);

}  // namespace asmw
