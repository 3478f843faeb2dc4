#pragma once

#include <string>

#include "asmw/ast.hpp"
#include "asmw/proof.hpp"
#include "asmw/state.hpp"

namespace asmw {

// Whole-file entry points for the four text formats (grammars in
// docs/formats.md). All throw SyntaxError / SortError / InputError with
// positions.

// .asms: carriers + functions with defaults and graph rows.
State parse_state(const std::string& text);

// .asmr: signature block + rule block (machines additionally carry init /
// final blocks; parse_rule accepts both and ignores init/final).
struct ParsedRule {
    SigContext ctx;
    Rule rule;
};
ParsedRule parse_rule(const std::string& text);
Machine parse_machine(const std::string& text);

// .asml: signature block + formula block.
struct ParsedFormula {
    SigContext ctx;
    Formula formula;
};
ParsedFormula parse_lformula(const std::string& text);

// .asmd: signature block + optional hypotheses + numbered derivation lines.
Derivation parse_derivation(const std::string& text);

// Snippet parsers against an existing context (used by tests, derivation
// bindings and the CLI's --bind flags).
Formula parse_formula_text(const std::string& text, const SigContext& ctx);
Rule parse_rule_text(const std::string& text, const SigContext& ctx);
Term parse_term_text(const std::string& text, const SigContext& ctx);

// Update-set literals: "{(f,a,b), (g,c,d)}" / "{(f,a,b,t), ...}" with atom
// arguments, resolved against a state.
UpdateSet parse_update_set_literal(const std::string& text, const State& s);
TaggedUpdateSet parse_tagged_set_literal(const std::string& text, const State& s);

}  // namespace asmw
