#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "asmw/updates.hpp"
#include "helpers.hpp"

using namespace asmw;
using testutil::tiny_state;
using testutil::upd;

TEST_CASE("consistency of update sets") {
    State s = tiny_state();
    CHECK(is_consistent(UpdateSet::empty()));
    UpdateSet clash({upd(s, "f", "a", "true"), upd(s, "f", "a", "false")});
    CHECK_FALSE(is_consistent(clash));
    UpdateSet fine({upd(s, "f", "a", "true"), upd(s, "g", "a", "false")});
    CHECK(is_consistent(fine));
    // same location, same value: one update after dedup
    UpdateSet dup({upd(s, "f", "a", "true"), upd(s, "f", "a", "true")});
    CHECK(dup.size() == 1);
    CHECK(is_consistent(dup));
}

TEST_CASE("apply") {
    State s = tiny_state();
    SUBCASE("empty set is the identity") {
        State t = apply(s, UpdateSet::empty());
        CHECK(t.same_dynamics(s));
    }
    SUBCASE("single update changes exactly one location") {
        UpdateSet u({upd(s, "f", "a", "b")});
        State t = apply(s, u);
        CHECK(t.lookup1(s.sig().index_of("f"), s.carriers().id("a")) == s.carriers().id("b"));
        // every other f-location unchanged
        for (Value v : s.carriers().values_of(TermSort::Point)) {
            if (v == s.carriers().id("a")) continue;
            CHECK(t.lookup1(s.sig().index_of("f"), v) == s.lookup1(s.sig().index_of("f"), v));
        }
        CHECK_FALSE(t.same_dynamics(s));
    }
    SUBCASE("inconsistent set is rejected") {
        UpdateSet u({upd(s, "f", "a", "true"), upd(s, "f", "a", "false")});
        CHECK_THROWS_AS(apply(s, u), InconsistentUpdateSet);
    }
    SUBCASE("static functions and carriers never change") {
        UpdateSet u({upd(s, "f", "a", "b"), upd(s, "w", "b", "2")});
        State t = apply(s, u);
        int c = s.sig().index_of("c");
        int lt = s.sig().index_of("lt");
        CHECK(t.table(c).data == s.table(c).data);
        CHECK(t.table(lt).data == s.table(lt).data);
        CHECK(t.carriers_ptr() == s.carriers_ptr());
    }
}

TEST_CASE("seq_merge") {
    State s = tiny_state();
    UpdateSet d1({upd(s, "f", "a", "true")});
    CHECK(seq_merge(d1, UpdateSet::empty()) == d1);
    UpdateSet d2({upd(s, "f", "a", "false")});
    CHECK(seq_merge(d1, d2) == d2);
    UpdateSet d3({upd(s, "g", "b", "false")});
    UpdateSet merged = seq_merge(d1, d3);
    CHECK(merged.size() == 2);
    CHECK(merged.contains(*d1.begin()));
    CHECK(merged.contains(*d3.begin()));
}

namespace {

UpdateSet random_consistent_set(std::mt19937_64& rng, const State& s) {
    std::vector<Update> items;
    auto pick = [&](auto& v) { return v[rng() % v.size()]; };
    std::vector<Value> prim = s.carriers().values_of(TermSort::Point);
    std::vector<Value> sec = s.carriers().values_of(TermSort::Algorithmic);
    int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
        switch (rng() % 3) {
            case 0: items.push_back(Update{s.sig().index_of("f"), pick(prim), pick(prim)}); break;
            case 1: items.push_back(Update{s.sig().index_of("h"), pick(sec), pick(sec)}); break;
            default: items.push_back(Update{s.sig().index_of("w"), pick(prim), pick(sec)}); break;
        }
    }
    // drop later updates that clash
    std::vector<Update> kept;
    for (const Update& u : items) {
        bool clash = false;
        for (const Update& k : kept)
            if (k.same_location(u) && k.value != u.value) clash = true;
        if (!clash) kept.push_back(u);
    }
    return UpdateSet(std::move(kept));
}

}  // namespace

TEST_CASE("apply(apply(s,d1),d2) == apply(s, seq_merge(d1,d2))") {
    State s = tiny_state();
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 500; ++trial) {
        UpdateSet d1 = random_consistent_set(rng, s);
        UpdateSet d2 = random_consistent_set(rng, s);
        State lhs = apply(apply(s, d1), d2);
        State rhs = apply(s, seq_merge(d1, d2));
        CHECK(lhs.same_dynamics(rhs));
    }
}

TEST_CASE("consistency is monotone-decreasing under union") {
    State s = tiny_state();
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Update> a, b;
        std::vector<Value> prim = s.carriers().values_of(TermSort::Point);
        for (int i = 0; i < 3; ++i) {
            a.push_back(Update{s.sig().index_of("f"), prim[rng() % prim.size()],
                               prim[rng() % prim.size()]});
            b.push_back(Update{s.sig().index_of("g"), prim[rng() % prim.size()],
                               prim[rng() % prim.size()]});
        }
        UpdateSet ua(std::move(a)), ub(std::move(b));
        if (is_consistent(set_union(ua, ub))) {
            CHECK(is_consistent(ua));
            CHECK(is_consistent(ub));
        }
    }
}

TEST_CASE("tagged sets project by tag") {
    State s = tiny_state();
    Value t0 = s.carriers().id("true"), t1 = s.carriers().id("false");
    int f = s.sig().index_of("f");
    TaggedUpdateSet tus({TaggedUpdate{f, 0, 1, t0}, TaggedUpdate{f, 0, 2, t1},
                         TaggedUpdate{f, 1, 1, t0}});
    CHECK(tus.project_tag(t0).size() == 2);
    CHECK(tus.project_tag(t1).size() == 1);
    CHECK(tus.project_tag(s.carriers().id("a")).is_empty());
}

TEST_CASE("family deduplicates by set equality") {
    State s = tiny_state();
    UpdateSetFamily fam;
    fam.add(UpdateSet({upd(s, "f", "a", "true")}));
    fam.add(UpdateSet({upd(s, "f", "a", "true")}));
    fam.add(UpdateSet::empty());
    fam.finish();
    CHECK(fam.size() == 2);
    CHECK(fam.contains(UpdateSet::empty()));
}

TEST_CASE("ill-kinded updates are not applicable") {
    State s = tiny_state();
    // value from the wrong carrier for a primary function
    UpdateSet bad({Update{s.sig().index_of("f"), s.carriers().id("a"), s.carriers().id("0")}});
    CHECK_FALSE(is_applicable(s, bad));
    CHECK_THROWS_AS(apply(s, bad), InconsistentUpdateSet);
    // static target
    UpdateSet stat({Update{s.sig().index_of("c"), s.carriers().id("a"), s.carriers().id("a")}});
    CHECK_FALSE(is_applicable(s, stat));
}

TEST_CASE("carriers validate booleans and disjointness") {
    CHECK_THROWS_AS(Carriers({"a", "b"}, {"0"}), InputError);          // no true/false
    CHECK_THROWS_AS(Carriers({"true", "false"}, {"true"}), InputError);  // overlap
    CHECK_THROWS_AS(Carriers({"true", "false"}, {}), InputError);      // empty secondary
}
