#pragma once

#include <string>

#include "asmw/ast.hpp"
#include "asmw/proof.hpp"
#include "asmw/state.hpp"

namespace asmw {

// Canonical printers; parse(print(x)) == x on ASTs, and printing is stable
// so identical inputs give byte-identical output.
std::string print(const Term& t);
std::string print(const Formula& f);
std::string print(const Rule& r, int indent = 0);
std::string print_signature(const SigContext& ctx);
std::string print_machine(const Machine& m);
std::string print_state(const State& s);
std::string print_formula_file(const SigContext& ctx, const Formula& f);

std::string print(const State& s, const Update& u);
std::string print(const State& s, const UpdateSet& us);
std::string print(const State& s, const TaggedUpdateSet& us);

}  // namespace asmw
