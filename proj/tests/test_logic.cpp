#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asmw/logic.hpp"
#include "asmw/parser.hpp"
#include "asmw/printer.hpp"
#include "asmw/sampler.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace asmw;
using testutil::tiny_ctx;
using testutil::tiny_state;
using testutil::upd;

namespace {

const Caps kCaps;

bool ev(const State& s, const std::string& text, Valuation& val) {
    SigContext ctx = Sampler::context_for(s);
    return eval_formula(s, parse_formula_text(text, ctx), val, kCaps);
}

bool ev(const State& s, const std::string& text) {
    Valuation val;
    return ev(s, text, val);
}

}  // namespace

TEST_CASE("equalities and individual quantifiers") {
    State s = tiny_state();
    CHECK(ev(s, "a = a"));
    CHECK_FALSE(ev(s, "a = b"));
    CHECK(ev(s, "forall x (x = x)"));
    CHECK(ev(s, "exists x (f(x) = a)"));
    CHECK(ev(s, "forall $i (forall $j (lt($i, $j) = 1 -> !($i = $j)))"));
    CHECK_THROWS_AS(ev(s, "f(x) = a"), UnboundVariable);
}

TEST_CASE("membership atoms") {
    State s = tiny_state();
    Valuation val;
    val.bind_pred1("X", UpdateSet({upd(s, "f", "a", "b")}));
    CHECK(ev(s, "%X(f, a, b)", val));
    CHECK_FALSE(ev(s, "%X(f, b, a)", val));
    CHECK_FALSE(ev(s, "%X(g, a, b)", val));
    val.bind_pred2("T", TaggedUpdateSet({TaggedUpdate{s.sig().index_of("f"), s.carriers().id("a"),
                                                      s.carriers().id("b"),
                                                      s.carriers().id("true")}}));
    CHECK(ev(s, "%%T(f, a, b, true)", val));
    CHECK_FALSE(ev(s, "%%T(f, a, b, false)", val));
}

TEST_CASE("upd atom is delta membership") {
    State s = tiny_state();
    Valuation val;
    val.bind_pred1("X", UpdateSet({upd(s, "f", "a", "b")}));
    CHECK(ev(s, "upd(f(a) := b, %X)", val));
    CHECK_FALSE(ev(s, "upd(f(a) := a, %X)", val));
    CHECK_FALSE(ev(s, "upd(g(a) := b, %X)", val));
    // choose witness membership
    CHECK(ev(s, "upd(choose x with x = a | x = b do f(x) := b enddo, %X)", val));
}

TEST_CASE("modal operator") {
    State s = tiny_state();
    Valuation val;
    SUBCASE("inconsistent sets satisfy every modal formula") {
        val.bind_pred1("X", UpdateSet({upd(s, "f", "a", "a"), upd(s, "f", "a", "b")}));
        CHECK(ev(s, "[%X] a = b", val));
        CHECK(ev(s, "[%X] !(a = a)", val));
    }
    SUBCASE("consistent sets evaluate in the successor") {
        val.bind_pred1("X", UpdateSet({upd(s, "f", "a", "b")}));
        CHECK(ev(s, "[%X] f(a) = b", val));
        CHECK_FALSE(ev(s, "[%X] f(a) = a", val));
        // untouched locations keep their values
        CHECK(ev(s, "[%X] f(b) = false", val));
    }
    SUBCASE("ill-kinded sets have no successor") {
        val.bind_pred1("X",
                       UpdateSet({Update{s.sig().index_of("f"), s.carriers().id("a"),
                                         s.carriers().id("0")}}));
        CHECK(ev(s, "[%X] !(a = a)", val));
    }
}

TEST_CASE("box and diamond desugarings") {
    State s = tiny_state();
    SigContext ctx = tiny_ctx();
    // [r]phi over a singleton family
    CHECK(ev(s, "[f(a) := b] f(a) = b"));
    CHECK_FALSE(ev(s, "<f(a) := b> f(a) = a"));
    // box over the empty family holds vacuously
    CHECK(ev(s, "[choose x with !(x = x) do f(x) := x enddo] !(a = a)"));
    // an inconsistent yielded set satisfies the diamond's existential
    // (the existential desugaring makes [X]phi true when X has no successor)
    CHECK(ev(s, "<par f(a) := a f(a) := b endpar> !(a = a)"));
    CHECK(ev(s, "[par f(a) := a f(a) := b endpar] !(a = a)"));
    // with a consistent-witness guard the diamond behaves classically
    CHECK_FALSE(ev(s, "exists %X (upd(par f(a) := a f(a) := b endpar, %X) & conUSet(%X) & [%X] a = a)"));
    // box(r, tautology) is true everywhere
    Sampler sampler(5);
    for (int i = 0; i < 30; ++i) {
        Rule r = sampler.random_rule(ctx, 2);
        Formula boxed = box_formula(r, f_tautology(), ctx);
        Valuation val;
        CHECK(eval_formula(s, boxed, val, kCaps));
    }
}

TEST_CASE("derived consistency predicates agree with their defining formulas") {
    Sampler sampler(77);
    for (int trial = 0; trial < 60; ++trial) {
        StateSpec spec;
        spec.primary_extra = sampler.uniform(0, 2);
        spec.secondary = sampler.uniform(1, 3);
        State s = sampler.random_state(spec);
        SigContext ctx = Sampler::context_for(s);
        Rule r1 = sampler.random_rule(ctx, 2);
        Rule r2 = sampler.random_rule(ctx, 2);
        Valuation val;
        CHECK(op_wcon(s, r1, val, kCaps) == eval_formula(s, wcon_formula(r1, ctx), val, kCaps));
        CHECK(op_scon(s, r1, val, kCaps) == eval_formula(s, scon_formula(r1, ctx), val, kCaps));
        CHECK(op_joinable(s, r1, r2, val, kCaps) ==
              eval_formula(s, joinable_formula(r1, r2, ctx), val, kCaps));
        UpdateSet x = sampler.random_update_set(s, Sampler::SetFlavor::Random);
        val.bind_pred1("X", x);
        CHECK(op_con(s, r1, x, val, kCaps) ==
              eval_formula(s, con_formula(r1, "X", ctx), val, kCaps));
        CHECK(op_con_uset(x) ==
              [&] {
                  FreshGen fresh;
                  Formula cu = con_uset_formula("X", ctx, fresh);
                  return eval_formula(s, cu, val, kCaps);
              }());
        val.unbind("X", VarSort::Pred1);
    }
}

TEST_CASE("wcon examples") {
    State s = tiny_state();
    SigContext ctx = tiny_ctx();
    Valuation val;
    // update rules are always weakly consistent
    CHECK(op_wcon(s, parse_rule_text("f(a) := b", ctx), val, kCaps));
    CHECK(op_wcon(s, parse_rule_text("w(a) := 0", ctx), val, kCaps));
    CHECK(op_wcon(s, parse_rule_text("h(0) := 1", ctx), val, kCaps));
    // the clashing par is neither weakly nor strongly consistent
    Rule clash = parse_rule_text("par f(a) := a f(a) := b endpar", ctx);
    CHECK_FALSE(op_wcon(s, clash, val, kCaps));
    CHECK_FALSE(op_scon(s, clash, val, kCaps));
    // deterministic rules: wcon iff scon
    Sampler sampler(13);
    for (int i = 0; i < 50; ++i) {
        Rule r = sampler.random_rule(ctx, 2, /*deterministic=*/true);
        CHECK(op_wcon(s, r, val, kCaps) == op_scon(s, r, val, kCaps));
    }
    // scon implies wcon when the family is nonempty
    for (int i = 0; i < 50; ++i) {
        Rule r = sampler.random_rule(ctx, 2);
        if (!delta(s, r, val, kCaps).is_empty() && op_scon(s, r, val, kCaps))
            CHECK(op_wcon(s, r, val, kCaps));
    }
}

TEST_CASE("joinable requires a conflict-free union") {
    State s = tiny_state();
    SigContext ctx = tiny_ctx();
    Valuation val;
    Rule r1 = parse_rule_text("f(a) := a", ctx);
    Rule r2 = parse_rule_text("f(a) := b", ctx);
    Rule r3 = parse_rule_text("g(a) := b", ctx);
    CHECK_FALSE(op_joinable(s, r1, r2, val, kCaps));
    CHECK(op_joinable(s, r1, r3, val, kCaps));
    CHECK(op_joinable(s, r1, r1, val, kCaps));
    // an internally inconsistent option does not make a pair joinable
    Rule incons = parse_rule_text("par g(b) := a g(b) := b endpar", ctx);
    CHECK_FALSE(op_joinable(s, incons, r1, val, kCaps));
}

TEST_CASE("rules_equivalent") {
    State s = tiny_state();
    SigContext ctx = tiny_ctx();
    std::vector<State> states = {s};
    Rule r1 = parse_rule_text("f(a) := b", ctx);
    Rule r2 = parse_rule_text("f(a) := a", ctx);
    CHECK(rules_equivalent(r1, r1, states, kCaps));
    CHECK_FALSE(rules_equivalent(r1, r2, states, kCaps));
    Rule p12 = parse_rule_text("par f(a) := b g(a) := a endpar", ctx);
    Rule p21 = parse_rule_text("par g(a) := a f(a) := b endpar", ctx);
    CHECK(rules_equivalent(p12, p21, states, kCaps));
}

TEST_CASE("predicate-sort quantifiers enumerate the well-kinded domain") {
    // one dynamic unary function over B1 = {true,false}: 4 triples, 16 subsets
    const char* text = R"(
primary-carrier: true false
secondary-carrier: 0
functions:
  f: primary dynamic arity 1 default false
)";
    State s = parse_state(text);
    // every consistent X with f-updates everywhere determines f's graph:
    // exists X such that X assigns (f,true,true) and nothing else at true
    CHECK(ev(s, "exists %X (%X(f, true, true) & conUSet(%X))"));
    CHECK(ev(s, "forall %X (conUSet(%X) -> [%X] (f(true) = true | !(f(true) = true)))"));
    // a genuinely second-sort quantifier
    CHECK(ev(s, "exists %%T (%%T(f, true, true, false))"));
    CHECK(ev(s, "forall %%T (exists %Y (forall x (forall y (%Y(f, x, y) <-> %%T(f, x, y, false)))))"));
}

TEST_CASE("predicate enumeration respects the cap") {
    State s = tiny_state();  // universe: f,g: 4x4=16 each; h: 3x3=9; w: 4x3=12 -> 53 triples
    Caps caps;
    caps.max_pred_enum = 1024;
    SigContext ctx = tiny_ctx();
    Formula f = parse_formula_text("forall %X (conUSet(%X) | !(conUSet(%X)))", ctx);
    Valuation val;
    CHECK_THROWS_AS(eval_formula(s, f, val, caps), ResourceLimit);
}

TEST_CASE("upd-rooted predicate quantifiers avoid enumeration") {
    // works on the big tiny_state because the quantifier is delta-driven
    State s = tiny_state();
    CHECK(ev(s, "forall %X (upd(f(a) := b, %X) -> [%X] f(a) = b)"));
    CHECK(ev(s, "exists %X (upd(choose x with x = a | x = b do f(x) := b enddo, %X) & %X(f, a, b))"));
    CHECK_FALSE(ev(s, "exists %X (upd(f(a) := b, %X) & %X(f, a, a))"));
}

namespace {

// Re-wraps every upd conjunct in a double negation, which hides it from the
// family-driven quantifier path and forces subset enumeration.
Formula hide_upd(const Formula& f) {
    Formula out = f;
    if (f.kind == Formula::Kind::Upd) return f_not(f_not(f));
    for (size_t i = 0; i < f.kids.size(); ++i) out.kids[i] = hide_upd(f.kids[i]);
    return out;
}

}  // namespace

TEST_CASE("family-driven quantifiers agree with subset enumeration") {
    Sampler sampler(909);
    StateSpec spec;
    spec.primary_extra = 0;
    spec.secondary = 2;
    spec.dyn_funcs = 1;
    int compared = 0;
    while (compared < 120) {
        State s = sampler.random_state(spec);
        SigContext ctx = Sampler::context_for(s);
        Rule r = sampler.random_rule(ctx, 2);
        Formula chi = sampler.random_formula_in_scope(ctx, 1, 1, {{"X", VarSort::Pred1}});
        Formula fast = f_forall("X", VarSort::Pred1, f_implies(f_upd(r, "X"), chi));
        Formula slow = hide_upd(fast);
        Valuation val;
        bool a, b;
        try {
            a = eval_formula(s, fast, val, kCaps);
            b = eval_formula(s, slow, val, kCaps);
        } catch (const ResourceLimit&) {
            continue;
        }
        CAPTURE(print(fast));
        CHECK(a == b);
        ++compared;
    }
}

TEST_CASE("U3 solver agrees with the generic evaluator on random forall rules") {
    Sampler sampler(910);
    StateSpec spec;
    spec.primary_extra = 0;
    spec.secondary = 1;
    spec.dyn_funcs = 1;
    int compared = 0;
    while (compared < 60) {
        State s = sampler.random_state(spec);
        SigContext ctx = Sampler::context_for(s);
        Rule r;
        try {
            r = sampler.random_rule_of_kind(ctx, Rule::Kind::Forall, 1);
        } catch (const Error&) {
            continue;
        }
        if (!is_closed(r)) continue;
        Instantiation inst;
        inst.rules.emplace("r", r);
        inst.vars.emplace("X", VarRef{"X", VarSort::Pred1});
        Formula u3 = instantiate_schema("U3", ctx, inst);
        UpdateSet x = sampler.random_update_set(
            s, sampler.chance(0.5) ? Sampler::SetFlavor::Random : Sampler::SetFlavor::Empty);
        Valuation val;
        val.bind_pred1("X", x);
        bool whole;
        try {
            whole = eval_formula(s, u3, val, kCaps);  // generic path incl. the exists-T
        } catch (const ResourceLimit&) {
            continue;
        }
        CAPTURE(print(r, -1));
        CHECK(whole);  // the biconditional itself must hold
        ++compared;
    }
}

TEST_CASE("axiom schema validity trials") {
    Caps caps;
    for (const std::string& id : axiom_schema_ids()) {
        if (id == "E") continue;  // meta-hypothetical; exercised by the proof checker
        SchemaReport rep = validate_schema(id, 25, 99, caps);
        CAPTURE(id);
        CAPTURE(rep.examples.empty() ? "" : rep.examples[0].description);
        CHECK(rep.counterexamples == 0);
        CHECK(rep.trials == 25);
    }
}

TEST_CASE("corrupted control schemas are caught") {
    Caps caps;
    SchemaReport m4 = validate_schema("M4-noguard", 60, 99, caps);
    CHECK(m4.counterexamples > 0);
    SchemaReport m5 = validate_schema("M5-converse", 60, 99, caps);
    CHECK(m5.counterexamples > 0);
}

TEST_CASE("A2 without its guard stays valid under the modal semantics") {
    // The modal clause rescues inconsistent sets, so no counterexample can
    // exist for the guard-dropped A2. Pinned here; the acceptance suite
    // reports the corresponding control honestly as failing.
    Caps caps;
    SchemaReport rep = validate_schema("A2-noguard", 80, 99, caps);
    CHECK(rep.counterexamples == 0);
}

TEST_CASE("M7 with a pure but dynamic formula is invalid") {
    // pins why the M7/M8 validity sampler draws static formulas only
    State s = tiny_state();
    SigContext ctx = tiny_ctx();
    // f(a) = a holds now; after the update f(a) = b it does not
    Formula phi = parse_formula_text("f(a) = a", ctx);
    CHECK(is_pure(phi));
    CHECK_FALSE(is_static(phi, ctx));
    Valuation val;
    val.bind_pred1("X", UpdateSet({upd(s, "f", "a", "b")}));
    Formula m7_shape = parse_formula_text(
        "(upd(f(a) := b, %X) & conUSet(%X) & f(a) = a) -> [%X] f(a) = a", ctx);
    CHECK_FALSE(eval_formula(s, m7_shape, val, kCaps));
}

TEST_CASE("U3 tag-decomposition matches generic enumeration on a tiny state") {
    const char* text = R"(
primary-carrier: true false
secondary-carrier: 0
functions:
  f: primary dynamic arity 1 default false
)";
    State s = parse_state(text);
    SigContext ctx = Sampler::context_for(s);
    Rule r = parse_rule_text("forall x with x = true | f(x) = false do f(x) := true enddo", ctx);
    Instantiation inst;
    inst.rules.emplace("r", r);
    inst.vars.emplace("X", VarRef{"X", VarSort::Pred1});
    Formula u3 = instantiate_schema("U3", ctx, inst);
    // enumerate every X over the 4-triple universe and check the biconditional
    std::vector<Update> universe = PredicateDomains::triple_universe(s);
    REQUIRE(universe.size() == 4);
    for (uint64_t mask = 0; mask < 16; ++mask) {
        std::vector<Update> items;
        for (size_t i = 0; i < universe.size(); ++i)
            if (mask & (1u << i)) items.push_back(universe[i]);
        Valuation val;
        val.bind_pred1("X", UpdateSet(std::move(items)));
        CHECK(eval_formula(s, u3, val, kCaps));
    }
}

TEST_CASE("the bundled Kruskal properties hold on the bundled graphs") {
    for (const char* graph : {"kruskal_g4.asms", "kruskal_g5_ties.asms", "kruskal_g6.asms"}) {
        State s = parse_state(testutil::slurp(testutil::corpus(graph)));
        for (const char* prop :
             {"kruskal_prop1.asml", "kruskal_prop2.asml", "kruskal_prop3.asml"}) {
            CAPTURE(graph);
            CAPTURE(prop);
            ParsedFormula pf = parse_lformula(testutil::slurp(testutil::corpus(prop)));
            Valuation val;
            CHECK(eval_formula(s, pf.formula, val, kCaps));
        }
    }
}

TEST_CASE("diamond picks a minimal eligible edge (Kruskal example)") {
    State s = parse_state(testutil::slurp(testutil::corpus("kruskal_g4.asms")));
    SigContext ctx = Sampler::context_for(s);
    std::string rule_text = R"(choose x with E(x) = true & !(label(first(x)) = label(second(x))) &
      forall y (E(y) = true & !(label(first(y)) = label(second(y))) -> geq(weight(y), weight(x)) = 1) do
    T(x) := true
    T(rev(x)) := true
    choose y with y = first(x) | y = second(x) do
      forall z with label(z) = label(y) do
        if label(y) = label(first(x)) then label(z) := label(second(x)) endif
        if label(y) = label(second(x)) then label(z) := label(first(x)) endif
      enddo
    enddo
  enddo)";
    Rule r = parse_rule_text(rule_text, ctx);
    // e12 is the unique minimal eligible edge of g4
    Valuation val;
    val.bind_ind("e", VarSort::Ind1, s.carriers().id("e12"));
    Formula dia = diamond_formula(
        r, parse_formula_text("T(e) = true", ctx), ctx);
    CHECK(eval_formula(s, dia, val, kCaps));
    // a non-minimal edge cannot be recorded this step
    val.bind_ind("e", VarSort::Ind1, s.carriers().id("e34"));
    CHECK_FALSE(eval_formula(s, dia, val, kCaps));
}

TEST_CASE("strict predicate domains include ill-kinded triples") {
    State s = tiny_state();
    size_t wk = PredicateDomains::triple_universe(s, false).size();
    size_t raw = PredicateDomains::triple_universe(s, true).size();
    CHECK(raw > wk);
    // raw product: 4 dynamic functions x 7 x 7
    CHECK(raw == 4 * 7 * 7);
}

TEST_CASE("strict mode agrees on well-kinded atoms, differs on ill-kinded ones") {
    const char* text = R"(
primary-carrier: true false
secondary-carrier: 0
functions:
  f: primary dynamic arity 1 default false
)";
    State s = parse_state(text);
    SigContext ctx = Sampler::context_for(s);
    Caps strict;
    strict.strict_domains = true;
    // well-kinded atom: both modes agree
    Formula wk = parse_formula_text("exists %X (%X(f, true, false) & conUSet(%X))", ctx);
    Valuation val;
    CHECK(eval_formula(s, wk, val, kCaps) == eval_formula(s, wk, val, strict));
    // an atom no dynamic function can realize is reachable only in strict
    // mode, where the raw product admits the triple (f, 0, true)
    Formula ill = parse_formula_text("exists %X (%X(f, 0, true))", ctx);
    CHECK_FALSE(eval_formula(s, ill, val, kCaps));
    CHECK(eval_formula(s, ill, val, strict));
}
