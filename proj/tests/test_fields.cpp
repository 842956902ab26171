#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace miniversal;
using testsupport::lf7;
using testsupport::lq;
using testsupport::q2;
using testsupport::q5;

TEST_CASE("absolute value examples") {
    ComplexField C;
    CHECK(C.abs(C.from_parts(3, 4)) == Catch::Approx(5.0));
    CHECK(C.abs(C.zero()) == 0.0);

    PadicField Q5 = q5();
    CHECK(Q5.abs(Q5.from_int(5)) == Catch::Approx(0.2));
    CHECK(Q5.abs(Q5.from_rational(Rational(1, 5))) == Catch::Approx(5.0));
    CHECK(Q5.abs(Q5.zero()) == 0.0);

    PadicField Q7(7, 64);
    // 2*7^2 + 3*7^3
    auto x = Q7.from_int(2 * 49 + 3 * 343);
    CHECK(Q7.valuation(x) == 2);
    CHECK(Q7.abs(x) == Catch::Approx(std::pow(7.0, -2)));

    LaurentRationalField L = lq(32);
    auto t_inv_plus_1 = L.add(L.from_terms(-1, {Rational(1)}), L.one());
    CHECK(L.abs(t_inv_plus_1) == Catch::Approx(2.0));
    auto y = L.from_terms(2, {Rational(3), Rational(1)});  // 3T^2 + T^3
    CHECK(L.abs(y) == Catch::Approx(0.25));
    CHECK(L.abs(L.zero()) == 0.0);
}

TEST_CASE("complex field laws at tolerance") {
    ComplexField C;
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        auto x = random_value(C, rng), y = random_value(C, rng);
        CHECK(C.abs(C.mul(x, y)) == Catch::Approx(C.abs(x) * C.abs(y)).epsilon(1e-12));
        CHECK(C.abs(C.add(x, y)) <= (C.abs(x) + C.abs(y)) * (1 + 1e-12));
        if (!C.is_zero(x)) CHECK(C.abs(C.inv(x)) == Catch::Approx(1.0 / C.abs(x)).epsilon(1e-12));
    }
    CHECK(C.abs(C.one()) == 1.0);
}

template <FieldBackend F>
static void nonarchimedean_laws(const F& f, int iterations) {
    std::mt19937_64 rng(7);
    CHECK(f.abs(f.one()) == 1.0);
    for (int t = 0; t < iterations; ++t) {
        auto x = random_value(f, rng), y = random_value(f, rng);
        if (f.is_zero(x) || f.is_zero(y)) continue;
        // multiplicativity, exactly, via valuations
        CHECK(f.valuation(f.mul(x, y)) == f.valuation(x) + f.valuation(y));
        CHECK(f.valuation(f.inv(x)) == -f.valuation(x));
        CHECK(f.valuation(f.neg(x)) == f.valuation(x));
        // ultrametric law; equality when the absolute values differ
        auto s = f.add(x, y);
        if (!f.is_zero(s)) {
            CHECK(f.valuation(s) >= std::min(f.valuation(x), f.valuation(y)));
            if (f.valuation(x) != f.valuation(y))
                CHECK(f.valuation(s) == std::min(f.valuation(x), f.valuation(y)));
        }
        // x - x cancels exactly
        CHECK(f.is_zero(f.sub(x, x)));
        // x * x^{-1} = 1
        CHECK(f.eq(f.mul(x, f.inv(x)), f.one()));
    }
}

TEST_CASE("p-adic field laws are exact") { nonarchimedean_laws(q5(), 300); }

TEST_CASE("Laurent field laws are exact") {
    nonarchimedean_laws(lq(16), 150);
    nonarchimedean_laws(lf7(), 200);
}

TEST_CASE("p-adic rational round trip") {
    PadicField Q5 = q5();
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long long> num(-50, 50), den(1, 30);
    for (int t = 0; t < 100; ++t) {
        Rational r(num(rng), den(rng));
        auto v = Q5.from_rational(r);
        auto back = Q5.from_rational(Q5.to_rational(v));
        CHECK(Q5.eq(v, back));
    }
    // digit round trip: 1/3 = 2 + 3*5 + 1*5^2 + 3*5^3 + ... in Q_5
    auto third = Q5.from_rational(Rational(1, 3));
    auto d = Q5.digits(third);
    REQUIRE(d.size() >= 4);
    CHECK(d[0] == 2);
    CHECK(d[1] == 3);
    CHECK(d[2] == 1);
    CHECK(d[3] == 3);
    CHECK(Q5.eq(Q5.from_digits(0, d), third));
}

TEST_CASE("p-adic digit normalization") {
    PadicField Q5 = q5();
    // leading zeros shift the valuation
    auto v = Q5.from_digits(0, {0, 0, 3, 1});
    CHECK(Q5.valuation(v) == 2);
    CHECK(Q5.digits(v)[0] == 3);
    CHECK(Q5.is_zero(Q5.from_digits(4, {0, 0})));
    CHECK_THROWS_AS(Q5.from_digits(0, {5}), SpecError);
}

TEST_CASE("Laurent term handling") {
    LaurentRationalField L = lq(8);
    auto v = L.from_terms(-2, {Rational(0), Rational(7), Rational(1)});
    CHECK(L.valuation(v) == -1);
    auto w = L.mul(v, L.inv(v));
    CHECK(L.eq(w, L.one()));
    // truncation: terms beyond the precision window are dropped
    std::vector<Rational> long_tail(20, Rational(1));
    auto u = L.from_terms(0, long_tail);
    CHECK(u.coeffs.size() == 8);
}

TEST_CASE("division by zero and validation") {
    ComplexField C;
    CHECK_THROWS_AS(C.inv(C.zero()), DivisionByZero);
    PadicField Q5 = q5();
    CHECK_THROWS_AS(Q5.inv(Q5.zero()), DivisionByZero);
    CHECK_THROWS_AS(PadicField(4, 64), SpecError);
    CHECK_THROWS_AS(PadicField(5, 0), SpecError);
    LaurentRationalField L = lq();
    CHECK_THROWS_AS(L.inv(L.zero()), DivisionByZero);
    CHECK_THROWS_AS(PrimeFieldCoeffs(6), SpecError);
    // 1/7 has no image in F_7
    LaurentPrimeField L7 = lf7();
    CHECK_THROWS_AS(L7.from_rational(Rational(1, 7)), DivisionByZero);
    CHECK(L7.is_zero(L7.from_rational(Rational(7))));
}

TEST_CASE("parse_rational") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-12") == Rational(-12));
    CHECK(parse_rational("-3/6") == Rational(-1, 2));
    CHECK_THROWS_AS(parse_rational("1.5"), SpecError);
    CHECK_THROWS_AS(parse_rational("x"), SpecError);
    CHECK_THROWS_AS(parse_rational("1/0"), SpecError);
}
