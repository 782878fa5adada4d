#include "doctest.h"

#include <cmath>

#include "floation/algebraic.hpp"
#include "floation/error.hpp"
#include "floation/lattice.hpp"

using namespace flo;

TEST_CASE("sqrt2 arithmetic is exact") {
    auto f = NumberField::sqrt2();
    AlgebraicNumber r(f, RatVec{0, 1});
    CHECK(r * r == AlgebraicNumber(f, Rational(2)));
    CHECK(r.sign() == 1);
    CHECK((r - AlgebraicNumber(f, ratio(141421, 100000))).sign() == 1);
    CHECK((r - AlgebraicNumber(f, ratio(141422, 100000))).sign() == -1);
    CHECK(r.to_double() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("lambda6 satisfies x^6 = x + 1") {
    auto f = NumberField::lambda6();
    AlgebraicNumber x(f, RatVec{0, 1});
    AlgebraicNumber p = x * x * x * x * x * x;
    CHECK(p == x + AlgebraicNumber(f, Rational(1)));
    CHECK(x.to_double() > 1.13);
    CHECK(x.to_double() < 1.14);
}

TEST_CASE("signs near zero are decided exactly") {
    auto f = NumberField::lambda6();
    // 1 + lambda - lambda^6 = 0 exactly; perturb by 2^-200
    Rational tiny(1);
    tiny /= Rational(mpz_class(1) << 200);
    AlgebraicNumber z(f, RatVec{1, 1, 0, 0, 0, 0});
    AlgebraicNumber l6(f, RatVec{0, 1});
    l6 = l6 * l6 * l6 * l6 * l6 * l6;
    CHECK((z - l6).is_zero());
    CHECK((z - l6 + AlgebraicNumber(f, tiny)).sign() == 1);
    CHECK((z - l6 - AlgebraicNumber(f, tiny)).sign() == -1);
}

TEST_CASE("mixing fields is refused") {
    AlgebraicNumber a(NumberField::sqrt2(), Rational(1)), b(NumberField::lambda6(), Rational(1));
    CHECK_THROWS_AS((void)compare(a, b), Error);
}

TEST_CASE("a reducible polynomial is rejected") {
    // x^2 - 4 = (x - 2)(x + 2)
    CHECK_THROWS_AS(NumberField("bad", RatVec{-4, 0, 1}, Rational(1), Rational(3)), Error);
}

TEST_CASE("parse_rational") {
    CHECK(parse_rational("3/6") == ratio(1, 2));
    CHECK(parse_rational("-0.25") == ratio(-1, 4));
    CHECK(parse_rational(" 7 ") == Rational(7));
    CHECK(parse_rational("010/3") == ratio(10, 3));
    CHECK(parse_rational("1.05") == ratio(21, 20));
    CHECK_THROWS_AS(parse_rational(""), Error);
    CHECK_THROWS_AS(parse_rational("1/x"), Error);
}

TEST_CASE("Smith invariants and cokernels") {
    CHECK(smith_invariants({{2, 4}, {6, 8}}) == std::vector<std::int64_t>{2, 4});
    auto s = cokernel_shape(3, {{2, 0, 0}, {0, 3, 0}});
    CHECK(s.free_rank == 1);
    CHECK(s.torsion == std::vector<std::int64_t>{6});
    auto z = cokernel_shape(2, {});
    CHECK(z.free_rank == 2);
}

TEST_CASE("lattice reduction gives canonical coset representatives") {
    LatticeReducer red(2, {{2, 2}, {0, 4}});
    IntVec u{3, 1}, v{5, 7};  // differ by (2, 6) = (2,2) + (0,4)
    red.reduce(u);
    red.reduce(v);
    CHECK(u == v);
    CHECK(red.contains({4, 0}));
    CHECK(!red.contains({1, 1}));
}
