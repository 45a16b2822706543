#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crgn/field.hpp"
#include "crgn/matrix.hpp"

using namespace crgn;

TEST_CASE("prime field construction") {
    CHECK_NOTHROW(PrimeField(2));
    CHECK_NOTHROW(PrimeField(7));
    CHECK_NOTHROW(PrimeField(257));
    CHECK_THROWS_AS(PrimeField(1), NotPrimeError);
    CHECK_THROWS_AS(PrimeField(8), NotPrimeError);
    CHECK_THROWS_AS(PrimeField(100), NotPrimeError);
}

TEST_CASE("element reduction and negatives") {
    PrimeField f7(7);
    CHECK(f7.element(10).value() == 3);
    CHECK(f7.element(-1).value() == 6);
    CHECK(f7.element(-15).value() == 6);
    CHECK(f7.element(0).is_zero());
}

TEST_CASE("field arithmetic basics") {
    PrimeField f7(7);
    Fp a = f7.element(3), b = f7.element(5);
    CHECK((a + b).value() == 1);
    CHECK((a - b).value() == 5);
    CHECK((a * b).value() == 1);
    CHECK((-a).value() == 4);
    CHECK(a.inv().value() == 5);
    CHECK((a / b).value() == (a * b.inv()).value());
    CHECK_THROWS_AS(f7.zero().inv(), DivisionByZeroError);
    CHECK_THROWS_AS(a / f7.zero(), DivisionByZeroError);

    PrimeField f11(11);
    CHECK(f11.element(3).inv().value() == 4);
    CHECK_THROWS_AS(a + f11.element(3), FieldMismatchError);
}

TEST_CASE("inverse round trip over several fields") {
    for (std::uint32_t q : {2u, 7u, 11u, 13u, 257u}) {
        PrimeField f(q);
        for (std::uint32_t v = 1; v < q; ++v) {
            Fp x = f.element(v);
            CHECK((x * x.inv()).value() == 1);
        }
    }
}

TEST_CASE("dot product") {
    PrimeField f7(7);
    auto u = f7.elements({1, 2, 3});
    auto v = f7.elements({4, 5, 6});
    CHECK(dot(u, v).value() == (4 + 10 + 18) % 7);
    auto w = f7.elements({1, 2});
    CHECK_THROWS_AS(dot(u, w), DimensionMismatchError);
}

TEST_CASE("matrix multiply and inverse round trip") {
    PrimeField f11(11);
    Matrix m = Matrix::from_rows(f11, {{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
    Matrix mi = inverse(m);
    CHECK(m * mi == Matrix::identity(f11, 3));
    CHECK(mi * m == Matrix::identity(f11, 3));
    CHECK(rank(m) == 3);
    CHECK(is_nonsingular(m));

    Matrix s = Matrix::from_rows(f11, {{1, 1}, {1, 1}});
    CHECK(rank(s) == 1);
    CHECK_FALSE(is_nonsingular(s));
    CHECK_THROWS_AS(inverse(s), SingularMatrixError);
}

TEST_CASE("solve_left and solve_right") {
    PrimeField f13(13);
    Matrix a = Matrix::from_rows(f13, {{3, 1}, {5, 2}});
    Matrix x = Matrix::from_rows(f13, {{7, 4}, {2, 9}});
    Matrix b = a * x;
    CHECK(solve_left(a, b) == x);
    Matrix b2 = x * a;
    CHECK(solve_right(a, b2) == x);
}

TEST_CASE("vandermonde structure and duplicate detection") {
    PrimeField f7(7);
    Matrix v = vandermonde(f7, 3, f7.elements({1, 2, 3}));
    CHECK(v == Matrix::from_rows(f7, {{1, 1, 1}, {1, 2, 3}, {1, 4, 2}}));
    CHECK_THROWS_AS(vandermonde(f7, 3, f7.elements({1, 2, 1})), DuplicatePointError);
}

TEST_CASE("cauchy structure and collision detection") {
    PrimeField f11(11);
    Matrix c = cauchy(f11, f11.elements({2, 4}), f11.elements({1, 3}));
    CHECK(c.at(0, 0) == f11.element(1).inv());
    CHECK(c.at(0, 1) == f11.element(-1).inv());
    CHECK(c.at(1, 0) == f11.element(3).inv());
    CHECK_THROWS_AS(cauchy(f11, f11.elements({2, 2}), f11.elements({1, 3})), CollidingPointsError);
    CHECK_THROWS_AS(cauchy(f11, f11.elements({2, 4}), f11.elements({1, 2})), CollidingPointsError);
}

TEST_CASE("super-regularity") {
    PrimeField f11(11);
    CHECK_FALSE(is_superregular(Matrix::identity(f11, 2)));
    CHECK(is_superregular(Matrix::from_rows(f11, {{2, 1}, {1, 2}})));
    Matrix c = cauchy(f11, f11.elements({2, 4, 6, 8}), f11.elements({1, 3, 5, 7}));
    CHECK(is_superregular(c));
    PrimeField f257(257);
    Matrix big = cauchy(f257, f257.elements({1, 2, 3, 4, 5, 6, 7, 8, 9}),
                        f257.elements({10, 20, 30, 40, 50, 60, 70, 80, 90}));
    CHECK_THROWS_AS(is_superregular(big), SizeCapError);
}

TEST_CASE("combination enumeration") {
    std::size_t count = 0;
    for_each_combination(5, 3, [&](std::span<const std::size_t>) {
        ++count;
        return true;
    });
    CHECK(count == 10);
    CHECK(binomial(5, 3) == 10);
    CHECK(binomial(52, 5) == 2598960);
    CHECK(binomial(70, 35) == UINT64_MAX); // saturates
}

TEST_CASE("generator matrix family conditions over F_7") {
    PrimeField f7(7);
    std::vector<Fp> pts;
    for (int i = 1; i <= 7; ++i) pts.push_back(f7.element(i));
    Matrix u = vandermonde(f7, 4, pts);
    Matrix v = vandermonde(f7, 7, pts);
    auto rep = check_mbcr_conditions(u, v, 3);
    CHECK(rep.u_full.ok);
    CHECK(rep.v_full.ok);
    CHECK(rep.u_top.ok);
    CHECK(rep.v_top.ok);
    CHECK(rep.all_ok());
    CHECK(rep.u_full.exhaustive);
    CHECK(rep.u_full.checked == binomial(7, 4));
    CHECK(rep.v_full.checked == 1);
}

TEST_CASE("condition scan falls back to sampling above the cap") {
    PrimeField f257(257);
    std::vector<Fp> pts;
    for (int i = 1; i <= 40; ++i) pts.push_back(f257.element(i));
    Matrix u = vandermonde(f257, 20, pts);
    Matrix v = vandermonde(f257, 21, pts);
    SubsetScanOptions opts;
    opts.samples = 25;
    auto rep = check_mbcr_conditions(u, v, 10, opts);
    CHECK_FALSE(rep.u_full.exhaustive); // C(40,20) is astronomically large
    CHECK(rep.u_full.checked == 25);
    CHECK(rep.u_full.ok);
    CHECK(rep.all_ok());
}

TEST_CASE("condition scan detects a violating family") {
    PrimeField f7(7);
    // repeat a column: no full-size column subset containing both can be nonsingular
    Matrix u = Matrix::from_rows(f7, {{1, 1, 1, 1}, {1, 1, 2, 3}});
    Matrix v = Matrix::from_rows(f7, {{1, 1, 1, 1}, {1, 1, 2, 3}, {1, 1, 4, 2}});
    auto rep = check_mbcr_conditions(u, v, 1);
    CHECK_FALSE(rep.u_full.ok);
    CHECK_FALSE(rep.all_ok());
}
