#pragma once

#include <cstddef>

namespace asmw {

// Resource caps. Exceeding any of them raises ResourceLimit; results are
// never silently truncated.
struct Caps {
    size_t max_family = 100000;        // update sets per family
    size_t max_set = 10000;            // updates per update set
    size_t max_pred_enum = 1u << 20;   // candidates per predicate-sort quantifier
    size_t max_formula_nodes = 1000000;  // translation output size
    // Predicate-sort quantifiers normally range over well-kinded update
    // tuples; strict mode enumerates the raw product (for conformance runs
    // on tiny carriers).
    bool strict_domains = false;
};

}  // namespace asmw
