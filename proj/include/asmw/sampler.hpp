#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "asmw/ast.hpp"
#include "asmw/state.hpp"

namespace asmw {

struct StateSpec {
    int primary_extra = 2;  // atoms besides true/false (|B1| <= 4)
    int secondary = 3;
    int dyn_funcs = 2;
    int static_funcs = 2;
    bool allow_secondary_dyn = true;
    bool allow_bridge_dyn = true;
};

// Seeded generator of random small states, rules, formulas and update sets
// for the property suites. Deterministic per seed.
class Sampler {
public:
    explicit Sampler(uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }

    State random_state(const StateSpec& spec);
    // Same signature and carriers, fresh random interpretation.
    State reinterpret(const State& s);
    // Context with the state's signature and all carrier atoms declared.
    static SigContext context_for(const State& s);

    // Closed random rule. `deterministic` suppresses choose forms.
    Rule random_rule(const SigContext& ctx, int depth, bool deterministic = false);
    // Rule with the given free variables available in terms and guards.
    Rule random_open_rule(const SigContext& ctx, int depth, const std::vector<VarRef>& scope);
    Rule random_rule_of_kind(const SigContext& ctx, Rule::Kind kind, int body_depth);

    Formula random_formula(const SigContext& ctx, int depth, int rule_depth);
    Formula random_formula_in_scope(const SigContext& ctx, int depth, int rule_depth,
                                    const std::vector<VarRef>& scope);
    // Closed formula mentioning static symbols only.
    Formula random_static_formula(const SigContext& ctx, int depth);
    Formula random_guard(const SigContext& ctx, const std::vector<VarRef>& scope, int depth);
    Term random_term(const SigContext& ctx, const std::vector<VarRef>& scope, TermSort sort,
                     int depth, bool static_only = false);

    enum class SetFlavor { Random, Inconsistent, Empty };
    UpdateSet random_update_set(const State& s, SetFlavor flavor);
    TaggedUpdateSet random_tagged_set(const State& s);

    Value random_value(const State& s, TermSort sort);

    int uniform(int lo, int hi) {  // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(rng_);
    }
    bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng_) < p; }

private:
    std::mt19937_64 rng_;
    int name_counter_ = 0;
};

}  // namespace asmw
