#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace miniversal;
using testsupport::charpoly_minor_oracle;
using testsupport::lf7;
using testsupport::lq;
using testsupport::mat;
using testsupport::q2;
using testsupport::q5;

TEST_CASE("matrix norm examples") {
    ComplexField C;
    CHECK(Matrix<ComplexField>::identity(C, 2).norm() == Catch::Approx(std::sqrt(2.0)));
    CHECK(mat(C, {{0, 1}, {0, 0}}).norm() == Catch::Approx(1.0));
    CHECK(mat(C, {{3, 4}, {0, 0}}).norm() == Catch::Approx(5.0));
}

TEST_CASE("gauss_rank basics") {
    ComplexField C;
    CHECK(gauss_rank(Matrix<ComplexField>(C, 3, 3)) == 0);
    CHECK(gauss_rank(Matrix<ComplexField>::identity(C, 4)) == 4);
    auto j2 = mat(C, {{0, 1}, {0, 0}});
    CHECK(gauss_rank(commutator_operator(j2)) == 2);

    PadicField Q5 = q5();
    CHECK(gauss_rank(Matrix<PadicField>::identity(Q5, 4)) == 4);
    CHECK(gauss_rank(commutator_operator(mat(Q5, {{0, 1}, {0, 0}}))) == 2);
}

TEST_CASE("rank is invariant under permutations") {
    std::mt19937_64 rng(3);
    PadicField Q5 = q5();
    LaurentRationalField L = lq();
    auto check = [&](auto f) {
        for (int t = 0; t < 10; ++t) {
            auto m = random_matrix(f, 4, 4, rng);
            std::size_t r = gauss_rank(m);
            auto p = m;
            for (std::size_t j = 0; j < 4; ++j) {
                std::swap(p.at(0, j), p.at(2, j));
            }
            auto q = p.transposed();
            CHECK(gauss_rank(p) == r);
            CHECK(gauss_rank(q) == r);
        }
    };
    check(Q5);
    check(L);
}

TEST_CASE("solve_linear") {
    ComplexField C;
    SECTION("identity") {
        auto m = Matrix<ComplexField>::identity(C, 3);
        std::vector<std::complex<double>> b{{1, 0}, {2, 0}, {3, 0}};
        auto x = solve_linear(m, b);
        for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i] - b[i]) < 1e-14);
    }
    SECTION("underdetermined [1 1] x = 2") {
        Matrix<ComplexField> m(C, 1, 2);
        m.at(0, 0) = C.one();
        m.at(0, 1) = C.one();
        std::vector<std::complex<double>> b{{2, 0}};
        auto mn = solve_linear(m, b, SolveMode::min_norm, C.default_tol());
        CHECK(std::abs(mn[0] - std::complex<double>(1, 0)) < 1e-14);
        CHECK(std::abs(mn[1] - std::complex<double>(1, 0)) < 1e-14);
        auto pt = solve_linear(m, b, SolveMode::particular, C.default_tol());
        CHECK(std::abs(pt[0] - std::complex<double>(2, 0)) < 1e-14);
        CHECK(std::abs(pt[1]) < 1e-14);
    }
    SECTION("inconsistent") {
        auto m = mat(C, {{1, 1}, {1, 1}});
        std::vector<std::complex<double>> b{{1, 0}, {2, 0}};
        CHECK_THROWS_AS(solve_linear(m, b), InconsistentSystem);
    }
    SECTION("min_norm is complex only") {
        PadicField Q5 = q5();
        auto m = Matrix<PadicField>::identity(Q5, 2);
        std::vector<PadicValue> b{Q5.one(), Q5.one()};
        CHECK_THROWS_AS(solve_linear(m, b, SolveMode::min_norm, 0.0), UnsupportedMode);
    }
}

TEST_CASE("invert") {
    ComplexField C;
    SECTION("identity and singular") {
        auto i3 = Matrix<ComplexField>::identity(C, 3);
        CHECK(max_abs_diff(invert(i3), i3) == 0.0);
        CHECK_THROWS_AS(invert(mat(C, {{1, 2}, {2, 4}})), SingularMatrix);
    }
    SECTION("diag(2,4) over Q_2 with exact |det|") {
        PadicField Q2 = q2();
        auto d = mat(Q2, {{2, 0}, {0, 4}});
        auto inv = invert(d);
        CHECK(Q2.eq(inv.at(0, 0), Q2.from_rational(Rational(1, 2))));
        CHECK(Q2.eq(inv.at(1, 1), Q2.from_rational(Rational(1, 4))));
        CHECK(Q2.is_zero(inv.at(0, 1)));
        CHECK(Q2.valuation(determinant(d)) == 3);  // |det|_2 = 2^-3
    }
    SECTION("Neumann-bound post check for ||C|| = 0.3") {
        std::mt19937_64 rng(5);
        for (int t = 0; t < 10; ++t) {
            std::size_t n = 3;
            auto c = random_matrix(ComplexField{}, n, n, rng, EntryStyle::generic);
            c = c.scaled(C.from_parts(0.3 / c.norm(), 0));
            auto inv = invert(Matrix<ComplexField>::identity(C, n) - c);
            CHECK(inv.norm() <= std::sqrt(double(n)) / (1.0 - 0.3) + 1e-9);
        }
    }
    SECTION("two-sided inverse on exact backends") {
        std::mt19937_64 rng(6);
        PadicField Q5 = q5();
        for (int t = 0; t < 5; ++t) {
            auto m = random_matrix(Q5, 4, 4, rng);
            if (Q5.is_zero(determinant(m))) continue;
            auto inv = invert(m);
            auto i4 = Matrix<PadicField>::identity(Q5, 4);
            CHECK((m * inv - i4).all_zero());
            CHECK((inv * m - i4).all_zero());
        }
    }
}

TEST_CASE("similarity expansion identity") {
    // (I-X)^{-1} A (I-X) = A + (XA-AX) + X (I-X)^{-1} (XA-AX)
    ComplexField C;
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        auto a = random_matrix(C, 3, 3, rng, EntryStyle::generic);
        auto x = random_matrix(C, 3, 3, rng, EntryStyle::generic);
        x = x.scaled(C.from_parts(0.05 / x.norm(), 0));
        auto i3 = Matrix<ComplexField>::identity(C, 3);
        auto lhs = invert(i3 - x) * a * (i3 - x);
        auto comm = x * a - a * x;
        auto rhs = a + comm + x * (invert(i3 - x) * comm);
        CHECK((lhs - rhs).norm() < 1e-10 * (1 + a.norm()));
    }
    // exact equality on constant Laurent series
    LaurentRationalField L = lq(8);
    std::mt19937_64 rng2(9);
    for (int t = 0; t < 5; ++t) {
        auto a = random_matrix(L, 3, 3, rng2);
        auto x = random_matrix(L, 3, 3, rng2);
        auto i3 = Matrix<LaurentRationalField>::identity(L, 3);
        if (L.is_zero(determinant(i3 - x))) continue;
        auto lhs = invert(i3 - x) * a * (i3 - x);
        auto comm = x * a - a * x;
        auto rhs = a + comm + x * (invert(i3 - x) * comm);
        CHECK((lhs - rhs).all_zero());
    }
}

TEST_CASE("norm submultiplicativity") {
    std::mt19937_64 rng(10);
    auto check = [&](auto f) {
        for (int t = 0; t < 15; ++t) {
            auto a = random_matrix(f, 3, 4, rng, EntryStyle::generic);
            auto b = random_matrix(f, 4, 2, rng, EntryStyle::generic);
            CHECK((a * b).norm() <= a.norm() * b.norm() * (1 + 1e-12));
        }
    };
    check(ComplexField{});
    check(q5());
    check(lq(8));
}

TEST_CASE("characteristic polynomial against the minors oracle") {
    ComplexField C;
    auto j2 = mat(C, {{0, 1}, {0, 0}});
    auto cp = characteristic_polynomial(j2);
    REQUIRE(cp.size() == 3);
    CHECK(C.abs(cp[0]) == 0.0);
    CHECK(C.abs(cp[1]) == 0.0);
    CHECK(C.abs(C.sub(cp[2], C.one())) == 0.0);

    std::mt19937_64 rng(12);
    for (int t = 0; t < 10; ++t) {
        auto m = random_matrix(C, 5, 5, rng, EntryStyle::generic);
        auto fast = characteristic_polynomial(m);
        auto slow = charpoly_minor_oracle(m);
        for (std::size_t i = 0; i <= 5; ++i) CHECK(C.abs(C.sub(fast[i], slow[i])) < 1e-10 * (1 + m.norm()));
    }
    PadicField Q5 = q5();
    for (int t = 0; t < 5; ++t) {
        auto m = random_matrix(Q5, 4, 4, rng);
        auto fast = characteristic_polynomial(m);
        auto slow = charpoly_minor_oracle(m);
        for (std::size_t i = 0; i <= 4; ++i) CHECK(Q5.eq(fast[i], slow[i]));
    }
    LaurentPrimeField L7 = lf7();
    for (int t = 0; t < 5; ++t) {
        auto m = random_matrix(L7, 3, 3, rng, EntryStyle::generic);
        auto fast = characteristic_polynomial(m);
        auto slow = charpoly_minor_oracle(m);
        for (std::size_t i = 0; i <= 3; ++i) CHECK(L7.eq(fast[i], slow[i]));
    }
}

TEST_CASE("commutator operator matches direct images") {
    PadicField Q5 = q5();
    std::mt19937_64 rng(13);
    auto p = random_matrix(Q5, 3, 3, rng);
    auto q = random_matrix(Q5, 2, 2, rng);
    auto op = commutator_operator(p, q);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 2; ++l) {
            auto e = Matrix<PadicField>::unit(Q5, 3, 2, k, l);
            auto img = (e * q - p * e).row_major();
            auto fast = commutator_unit_image(p, q, k, l);
            for (std::size_t i = 0; i < img.size(); ++i) {
                CHECK(Q5.eq(op.at(i, k * 2 + l), img[i]));
                CHECK(Q5.eq(fast[i], img[i]));
            }
        }
}
