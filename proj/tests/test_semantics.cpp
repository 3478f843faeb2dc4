#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asmw/parser.hpp"
#include "asmw/printer.hpp"
#include "asmw/sampler.hpp"
#include "asmw/semantics.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace asmw;
using testutil::tiny_ctx;
using testutil::tiny_state;
using testutil::upd;

namespace {

UpdateSetFamily engine_delta(const State& s, const std::string& rule_text) {
    SigContext ctx = Sampler::context_for(s);
    Rule r = parse_rule_text(rule_text, ctx);
    Valuation val;
    Caps caps;
    return delta(s, r, val, caps);
}

}  // namespace

TEST_CASE("update rules yield singleton families") {
    State s = tiny_state();
    UpdateSetFamily fam = engine_delta(s, "f(a) := b");
    REQUIRE(fam.size() == 1);
    CHECK(*fam.begin() == UpdateSet({upd(s, "f", "a", "b")}));
    // bridge and secondary forms
    CHECK(*engine_delta(s, "w(a) := 2").begin() == UpdateSet({upd(s, "w", "a", "2")}));
    CHECK(*engine_delta(s, "h(0) := 2").begin() == UpdateSet({upd(s, "h", "0", "2")}));
}

TEST_CASE("conditional with false guard yields the empty update set") {
    State s = tiny_state();
    UpdateSetFamily fam = engine_delta(s, "if a = b then f(a) := b endif");
    REQUIRE(fam.size() == 1);
    CHECK(fam.begin()->is_empty());
    // true guard passes through
    CHECK(engine_delta(s, "if a = a then f(a) := b endif").size() == 1);
}

TEST_CASE("choose over an empty witness set yields the empty family") {
    State s = tiny_state();
    CHECK(engine_delta(s, "choose x with !(x = x) do f(x) := x enddo").is_empty());
    CHECK(engine_delta(s, "choose $i with !($i = $i) do h($i) := $i enddo").is_empty());
}

TEST_CASE("forall over an empty witness set yields {empty}") {
    State s = tiny_state();
    UpdateSetFamily fam = engine_delta(s, "forall x with !(x = x) do f(x) := x enddo");
    REQUIRE(fam.size() == 1);
    CHECK(fam.begin()->is_empty());
}

TEST_CASE("seq keeps inconsistent first stages verbatim") {
    State s = tiny_state();
    UpdateSetFamily fam =
        engine_delta(s, "seq par f(a) := a f(a) := b endpar g(b) := a endseq");
    REQUIRE(fam.size() == 1);
    CHECK(*fam.begin() == UpdateSet({upd(s, "f", "a", "a"), upd(s, "f", "a", "b")}));
}

TEST_CASE("seq applies the second stage in the successor state") {
    State s = tiny_state();  // f(a) = a initially
    UpdateSetFamily fam = engine_delta(s, "seq f(a) := b g(f(a)) := a endseq");
    // after the first stage f(a) = b, so the second stage writes g(b)
    REQUIRE(fam.size() == 1);
    CHECK(*fam.begin() == UpdateSet({upd(s, "f", "a", "b"), upd(s, "g", "b", "a")}));
}

TEST_CASE("second stage overrides shared locations") {
    State s = tiny_state();
    UpdateSetFamily fam = engine_delta(s, "seq f(a) := a f(a) := b endseq");
    REQUIRE(fam.size() == 1);
    CHECK(*fam.begin() == UpdateSet({upd(s, "f", "a", "b")}));
}

TEST_CASE("choose-free rules are deterministic") {
    SigContext ctx = tiny_ctx();
    State s = tiny_state();
    Sampler sampler(11);
    Caps caps;
    for (int i = 0; i < 100; ++i) {
        Rule r = sampler.random_rule(ctx, 3, /*deterministic=*/true);
        Valuation val;
        CHECK(delta(s, r, val, caps).size() == 1);
    }
}

TEST_CASE("engine delta agrees with the brute-force oracle") {
    Caps caps;
    SUBCASE("fixed state, random rules") {
        State s = tiny_state();
        SigContext ctx = tiny_ctx();
        Sampler sampler(101);
        for (int i = 0; i < 400; ++i) {
            Rule r = sampler.random_rule(ctx, 3);
            CAPTURE(print(r));
            Valuation val;
            CHECK(delta(s, r, val, caps) == oracle::delta_oracle(s, r));
        }
    }
    SUBCASE("random states, random rules") {
        Sampler sampler(202);
        for (int i = 0; i < 150; ++i) {
            StateSpec spec;
            spec.primary_extra = sampler.uniform(0, 2);
            spec.secondary = sampler.uniform(1, 3);
            spec.dyn_funcs = sampler.uniform(1, 2);
            State s = sampler.random_state(spec);
            SigContext ctx = Sampler::context_for(s);
            Rule r = sampler.random_rule(ctx, 3);
            CAPTURE(print(r));
            Valuation val;
            CHECK(delta(s, r, val, caps) == oracle::delta_oracle(s, r));
        }
    }
}

TEST_CASE("engine delta matches the oracle on the bundled rules") {
    Caps caps;
    {
        ParsedRule ex1 = parse_rule(testutil::slurp(testutil::corpus("example1.asmr")));
        State blank = parse_state(testutil::slurp(testutil::corpus("example1_blank.asms")));
        Valuation val;
        UpdateSetFamily fam = delta(blank, ex1.rule, val, caps);
        CHECK(fam.size() == 14);
        CHECK(fam == oracle::delta_oracle(blank, ex1.rule));
    }
    {
        ParsedRule kru = parse_rule(testutil::slurp(testutil::corpus("kruskal.asmr")));
        for (const char* file : {"kruskal_g4.asms", "kruskal_g5_ties.asms"}) {
            State s = parse_state(testutil::slurp(testutil::corpus(file)));
            Valuation val;
            CHECK(delta(s, kru.rule, val, caps) == oracle::delta_oracle(s, kru.rule));
        }
    }
}

TEST_CASE("multi-binder desugaring preserves delta semantics") {
    State s = tiny_state();
    SigContext ctx = tiny_ctx();
    Caps caps;
    // pair-choose vs. direct pair enumeration
    Rule r = parse_rule_text("choose x, y with !(f(x) = y) do g(x) := y enddo", ctx);
    Valuation val;
    UpdateSetFamily fam = delta(s, r, val, caps);
    std::vector<UpdateSet> expect;
    for (Value x : s.carriers().values_of(TermSort::Point))
        for (Value y : s.carriers().values_of(TermSort::Point))
            if (s.lookup1(s.sig().index_of("f"), x) != y)
                expect.push_back(UpdateSet({Update{s.sig().index_of("g"), x, y}}));
    CHECK(fam == UpdateSetFamily(std::move(expect)));

    // pair-forall vs. direct pair enumeration
    Rule r2 = parse_rule_text("forall x, y with f(x) = y do g(x) := y enddo", ctx);
    UpdateSetFamily fam2 = delta(s, r2, val, caps);
    std::vector<Update> all;
    for (Value x : s.carriers().values_of(TermSort::Point))
        for (Value y : s.carriers().values_of(TermSort::Point))
            if (s.lookup1(s.sig().index_of("f"), x) == y)
                all.push_back(Update{s.sig().index_of("g"), x, y});
    CHECK(fam2 == UpdateSetFamily({UpdateSet(std::move(all))}));
}

TEST_CASE("par is commutative and associative, seq associative (family equality)") {
    Sampler sampler(303);
    Caps caps;
    for (int i = 0; i < 60; ++i) {
        StateSpec spec;
        spec.primary_extra = sampler.uniform(0, 2);
        spec.secondary = sampler.uniform(1, 3);
        State s = sampler.random_state(spec);
        SigContext ctx = Sampler::context_for(s);
        Rule r1 = sampler.random_rule(ctx, 2);
        Rule r2 = sampler.random_rule(ctx, 2);
        Rule r3 = sampler.random_rule(ctx, 2);
        Valuation val;
        CHECK(delta(s, r_par(r1, r2), val, caps) == delta(s, r_par(r2, r1), val, caps));
        CHECK(delta(s, r_par(r_par(r1, r2), r3), val, caps) ==
              delta(s, r_par(r1, r_par(r2, r3)), val, caps));
        CHECK(delta(s, r_seq(r_seq(r1, r2), r3), val, caps) ==
              delta(s, r_seq(r1, r_seq(r2, r3)), val, caps));
    }
}

TEST_CASE("every family member touches only dynamic functions and respects kinds") {
    Sampler sampler(404);
    Caps caps;
    for (int i = 0; i < 100; ++i) {
        State s = sampler.random_state(StateSpec{});
        SigContext ctx = Sampler::context_for(s);
        Rule r = sampler.random_rule(ctx, 3);
        Valuation val;
        for (const UpdateSet& u : delta(s, r, val, caps))
            for (const Update& up : u) CHECK(is_well_kinded(s, up));
    }
}

TEST_CASE("successors") {
    State s = tiny_state();
    SigContext ctx = tiny_ctx();
    Caps caps;
    SUBCASE("skip-like rule returns the state itself") {
        Rule r = parse_rule_text("if a = b then f(a) := b endif", ctx);
        std::vector<State> succ = successors(s, r, caps);
        REQUIRE(succ.size() == 1);
        CHECK(succ[0].same_dynamics(s));
    }
    SUBCASE("only inconsistent update sets: no successor") {
        Rule r = parse_rule_text("par f(a) := a f(a) := b endpar", ctx);
        CHECK(successors(s, r, caps).empty());
    }
    SUBCASE("distinct choices collapsing to one state are deduplicated") {
        Rule r = parse_rule_text("choose x with x = a | x = b do f(a) := a enddo", ctx);
        CHECK(successors(s, r, caps).size() == 1);
    }
    SUBCASE("open rules are rejected") {
        Rule r = parse_rule_text("f(x) := a", ctx);
        CHECK_THROWS_AS(successors(s, r, caps), SortError);
    }
}

TEST_CASE("resource caps raise ResourceLimit") {
    State s = tiny_state();
    SigContext ctx = tiny_ctx();
    Caps caps;
    caps.max_family = 3;
    Rule r = parse_rule_text("choose x, y with x = x do f(x) := y enddo", ctx);
    Valuation val;
    CHECK_THROWS_AS(delta(s, r, val, caps), ResourceLimit);
}

TEST_CASE("runs") {
    const char* machine_text = R"(
signature:
  count: primary dynamic arity 1
  atoms primary: true false n0 n1 n2 n3
init:
  count(n0) = n0
final:
  count(n0) = n3
rule:
  choose x, y with count(n0) = x & (
      (x = n0 & (y = n1 | y = n2)) |
      (x = n1 & y = n2) |
      (x = n2 & y = n3)) do
    count(n0) := y
  enddo
)";
    const char* state_text = R"(
primary-carrier: true false n0 n1 n2 n3
secondary-carrier: u
functions:
  count: primary dynamic arity 1 default n0
)";
    Machine m = parse_machine(machine_text);
    State s0 = parse_state(state_text);
    Caps caps;
    SUBCASE("exhaustive exploration finds all traces to final states") {
        RunReport rep = run(m, s0, 10, RunMode::All, 0, caps);
        // n0->n1->n2->n3, n0->n2->n3: two traces, one terminal state
        CHECK(rep.terminal_states.size() == 1);
        CHECK(rep.trace_count == 2);
        CHECK_FALSE(rep.hit_step_cap);
    }
    SUBCASE("zero-length run when the initial state is final") {
        State done = apply(s0, UpdateSet({Update{s0.sig().index_of("count"),
                                                 s0.carriers().id("n0"), s0.carriers().id("n3")}}));
        RunReport rep = run(m, done, 10, RunMode::All, 0, caps);
        CHECK(rep.initial_is_final);
        CHECK(rep.trace_count == 1);
        REQUIRE(rep.terminal_states.size() == 1);
        CHECK(rep.terminal_states[0].same_dynamics(done));
    }
    SUBCASE("step cap reported") {
        RunReport rep = run(m, s0, 1, RunMode::All, 0, caps);
        CHECK(rep.hit_step_cap);
    }
    SUBCASE("sampled runs are deterministic per seed") {
        RunReport a = run(m, s0, 10, RunMode::Sample, 7, caps);
        RunReport b = run(m, s0, 10, RunMode::Sample, 7, caps);
        REQUIRE(a.sample_trace.size() == b.sample_trace.size());
        for (size_t i = 0; i < a.sample_trace.size(); ++i)
            CHECK(a.sample_trace[i].same_dynamics(b.sample_trace[i]));
        CHECK(a.sample_reached_final == b.sample_reached_final);
    }
    SUBCASE("stuck machine reports stuck states") {
        const char* stuck_text = R"(
signature:
  count: primary dynamic arity 1
  atoms primary: true false n0 n1
init:
  count(n0) = n0
final:
  count(n0) = n1
rule:
  par count(n0) := n0 count(n0) := n1 endpar
)";
        Machine stuck = parse_machine(stuck_text);
        RunReport rep = run(stuck, s0, 5, RunMode::All, 0, caps);
        CHECK(rep.terminal_states.empty());
        CHECK(rep.trace_count == 0);
        CHECK(rep.stuck_states.size() == 1);
    }
}

TEST_CASE("each Kruskal step records exactly one edge, in both orientations") {
    Machine m = parse_machine(testutil::slurp(testutil::corpus("kruskal.asmr")));
    State s0 = parse_state(testutil::slurp(testutil::corpus("kruskal_g4.asms")));
    Caps caps;
    int Tf = s0.sig().index_of("T");
    int revf = s0.sig().index_of("rev");
    Value tru = s0.carriers().true_value();
    std::vector<State> frontier{s0};
    for (int depth = 0; depth < 3; ++depth) {
        std::vector<State> next;
        for (const State& cur : frontier) {
            int before = 0;
            for (Value a : cur.carriers().values_of(TermSort::Point))
                if (cur.lookup1(Tf, a) == tru) ++before;
            for (State& nxt : successors(cur, m.rule, caps)) {
                int after = 0;
                std::vector<Value> fresh;
                for (Value a : nxt.carriers().values_of(TermSort::Point))
                    if (nxt.lookup1(Tf, a) == tru) {
                        ++after;
                        if (cur.lookup1(Tf, a) != tru) fresh.push_back(a);
                    }
                CHECK(after == before + 2);
                REQUIRE(fresh.size() == 2);
                CHECK(nxt.lookup1(revf, fresh[0]) == fresh[1]);
                next.push_back(std::move(nxt));
            }
        }
        frontier = std::move(next);
    }
}

TEST_CASE("eval_term") {
    State s = tiny_state();
    SigContext ctx = tiny_ctx();
    Valuation val;
    val.bind_ind("x", VarSort::Ind1, s.carriers().id("a"));
    CHECK(eval_term(s, parse_term_text("x", ctx), val) == s.carriers().id("a"));
    CHECK(eval_term(s, parse_term_text("f(x)", ctx), val) == s.carriers().id("a"));
    CHECK(eval_term(s, parse_term_text("lt(0, 1)", ctx), val) == s.carriers().id("1"));
    CHECK_THROWS_AS(eval_term(s, parse_term_text("f(y)", ctx), val), UnboundVariable);
}
