#pragma once

#include <cstdint>
#include <vector>

#include "asmw/ast.hpp"
#include "asmw/caps.hpp"
#include "asmw/state.hpp"
#include "asmw/updates.hpp"

namespace asmw {

// Standard inductive term interpretation. Throws UnboundVariable / SortError.
Value eval_term(const State& s, const Term& t, const Valuation& val);

// Delta(r, S, zeta) exactly per the update-set semantics of the nine rule
// forms. Deduplicated; caps enforced.
UpdateSetFamily delta(const State& s, const Rule& r, Valuation& val, const Caps& caps);

// { apply(s, D) | D in delta(r, s, {}), D consistent }, deduplicated by
// extensional equality of the dynamic parts, in canonical order.
std::vector<State> successors(const State& s, const Rule& r, const Caps& caps);

enum class RunMode { All, Sample };

struct RunReport {
    bool initial_is_final = false;
    std::vector<State> terminal_states;      // canonical order
    uint64_t trace_count = 0;                // runs of length <= max_steps
    int max_depth_explored = 0;
    bool hit_step_cap = false;               // frontier non-empty at max_steps
    std::vector<State> stuck_states;         // non-final states without successors
    std::vector<State> sample_trace;         // Sample mode: the followed trace
    bool sample_reached_final = false;
};

// Bounded runs. Preconditions: machine rule closed and s0 satisfies init.
RunReport run(const Machine& m, const State& s0, int max_steps, RunMode mode, uint64_t seed,
              const Caps& caps);

bool state_satisfies(const State& s, const Formula& f, const Caps& caps);

}  // namespace asmw
