#include "doctest.h"

#include "floation/embed.hpp"
#include "floation/error.hpp"

#include "oracles.hpp"

using namespace flo;

namespace {
const GeneratorSet kAB({"a", "b"});
}

TEST_CASE("minimal embedding on a fixed table") {
    // b^-1 < e < a < b
    UserTable t{2, {{parse_word("b^-1", kAB)}, {Word{}}, {parse_word("a", kAB)}, {parse_word("b", kAB)}}};
    OrderOracle o(t);
    auto e = minimal_embed(o, {Word{}, parse_word("b", kAB), parse_word("a", kAB), parse_word("b^-1", kAB)});
    CHECK(*e.value(Word{}) == 0);
    CHECK(*e.value(parse_word("b", kAB)) == 1);
    CHECK(*e.value(parse_word("a", kAB)) == ratio(1, 2));
    CHECK(*e.value(parse_word("b^-1", kAB)) == -1);
    CHECK(e.classes().size() == 4);
}

TEST_CASE("enumeration must start at the identity") {
    UserTable t{2, {{Word{}}, {parse_word("a", kAB)}}};
    OrderOracle o(t);
    CHECK_THROWS_AS(minimal_embed(o, {parse_word("a", kAB), Word{}}), Error);
}

TEST_CASE("random tables follow the three rules") {
    std::mt19937_64 rng(42);
    for (int k = 0; k < 600; ++k) {
        auto r = oracle::random_table(rng, 3 + k % 10, k % 2 == 0);
        OrderOracle o(r.table);
        auto emb = minimal_embed(o, r.sequence);
        auto expect = oracle::embed_by_rules(r.sequence, r.class_of);
        for (const auto& w : r.sequence) {
            REQUIRE(emb.value(w));
            CHECK(*emb.value(w) == expect.at(w));
            CHECK(is_dyadic(*emb.value(w)));
        }
    }
}

TEST_CASE("collapse of a blow-up reproduces i0") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 300; ++k) {
        auto r = oracle::random_table(rng, 4 + k % 8, true);
        OrderOracle o(r.table);
        auto i0 = minimal_embed(o, r.sequence);
        OrderOracle blown(oracle::refine(r.table, rng));
        auto j = minimal_embed(blown, r.sequence);
        auto f = collapse_between(j, i0);
        for (const auto& w : r.sequence) CHECK(f(*j.value(w)) == *i0.value(w));
        // monotone everywhere, including between breakpoints
        Rational prev = f(Rational(-100));
        for (int s = -399; s <= 400; ++s) {
            Rational x = ratio(s, 4);
            CHECK(f(x) >= prev);
            prev = f(x);
        }
    }
}

TEST_CASE("collapse refuses inconsistent tables") {
    UserTable lo{2, {{Word{}}, {parse_word("a", kAB)}, {parse_word("b", kAB)}}};
    UserTable hi{2, {{Word{}}, {parse_word("b", kAB)}, {parse_word("a", kAB)}}};
    std::vector<Word> seq{Word{}, parse_word("a", kAB), parse_word("b", kAB)};
    auto x = minimal_embed(OrderOracle(lo), seq), y = minimal_embed(OrderOracle(hi), seq);
    CHECK_THROWS_AS(collapse_between(x, y), Error);
}

TEST_CASE("PL maps compose and invert") {
    PLMap f({0, 1, 2}, {0, ratio(1, 2), 3});
    PLMap g({-1, 1}, {-3, 1});
    auto h = f.compose(g);
    for (int s = -20; s <= 20; ++s) {
        Rational x = ratio(s, 3);
        CHECK(h(x) == f(g(x)));
        CHECK(f.inverse()(f(x)) == x);
    }
    CHECK(f(Rational(5)) == 6);  // slope 1 past the last breakpoint
    CHECK_THROWS_AS(PLMap({0, 1}, {1, 0}), Error);
}

TEST_CASE("PL extension of left multiplication") {
    // Z with the usual order: i(n) = n after embedding 0, 1, -1, 2, -2, ...
    GeneratorSet g1({"t"});
    UserTable t{1, {}};
    std::vector<Word> seq;
    for (int n = -4; n <= 4; ++n) t.classes.push_back({power(Word::generator(0), n)});
    seq.push_back(Word{});
    for (int n = 1; n <= 4; ++n) {
        seq.push_back(power(Word::generator(0), n));
        seq.push_back(power(Word::generator(0), -n));
    }
    OrderOracle o(t);
    auto emb = minimal_embed(o, seq);
    auto ext = extend_action(emb, Word::generator(0));
    for (int n = -4; n < 4; ++n) {
        auto w = power(Word::generator(0), n);
        CHECK(ext.map(*emb.value(w)) == *emb.value(Word::generator(0) * w));
    }
    CHECK(ext.unsupported.size() == 1);
    CHECK_THROWS_AS(extend_action(emb, Word::generator(0), true), Error);
}

TEST_CASE("breadth-first ball sizes in the free group") {
    std::vector<Word> gens{Word::generator(0), Word::generator(1)};
    CHECK(breadth_first_ball(gens, 0, free_group_keyer()).size() == 1);
    CHECK(breadth_first_ball(gens, 1, free_group_keyer()).size() == 5);
    CHECK(breadth_first_ball(gens, 2, free_group_keyer()).size() == 17);
    CHECK(breadth_first_ball(gens, 3, free_group_keyer()).size() == 53);
}
