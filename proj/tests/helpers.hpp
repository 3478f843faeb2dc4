#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "asmw/parser.hpp"
#include "asmw/sampler.hpp"
#include "asmw/state.hpp"

namespace testutil {

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string corpus(const std::string& name) {
    return std::string(ASMW_CORPUS_DIR) + "/" + name;
}

// A small fixed state used across the unit tests:
//   B1 = {true,false,a,b}, B2 = {0,1,2}
//   f : B1 -> B1 dynamic      g : B1 -> B1 dynamic
//   h : B2 -> B2 dynamic      w : B1 -> B2 dynamic (bridge)
//   c : B1 constant (= a)     lt : B2^2 -> B2 static (strict order on 0,1,2)
inline asmw::State tiny_state() {
    static const char* text = R"(
primary-carrier: true false a b
secondary-carrier: 0 1 2
functions:
  f: primary dynamic arity 1 default false
    f(a) = a
  g: primary dynamic arity 1 default false
  h: secondary dynamic arity 1 default 0
  w: bridge dynamic arity 1 default 0
  c: primary static arity 0 default a
  lt: secondary static arity 2 default 0
    lt(0,1) = 1
    lt(0,2) = 1
    lt(1,2) = 1
)";
    return asmw::parse_state(text);
}

inline asmw::SigContext tiny_ctx() { return asmw::Sampler::context_for(tiny_state()); }

inline asmw::Update upd(const asmw::State& s, const std::string& fn, const std::string& arg,
                        const std::string& value) {
    return asmw::Update{s.sig().index_of(fn), s.carriers().id(arg), s.carriers().id(value)};
}

}  // namespace testutil
