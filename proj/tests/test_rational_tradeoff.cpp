#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "crgn/tradeoff.hpp"

using namespace crgn;

namespace {

Rational frac(long long n, long long d) { return Rational(Rational::Int(n), Rational::Int(d)); }

// Independent evaluation of the repair-capacity sum, written differently from
// the library (accumulates over a descending helper count).
Rational capacity_sum(std::uint64_t k, std::uint64_t d, const Rational& alpha, const Rational& beta) {
    Rational total = 0;
    for (std::uint64_t helpers = d; helpers + k > d + 0 && helpers > d - k; --helpers) {
        Rational term = Rational(helpers) * beta;
        if (alpha < term) term = alpha;
        total += term;
    }
    return total;
}

} // namespace

TEST_CASE("rational arithmetic and normalization") {
    CHECK(frac(2, 4) == frac(1, 2));
    CHECK(frac(1, -2) == frac(-1, 2));
    CHECK(frac(1, 3) + frac(1, 6) == frac(1, 2));
    CHECK(frac(1, 2) - frac(1, 3) == frac(1, 6));
    CHECK(frac(2, 3) * frac(3, 4) == frac(1, 2));
    CHECK(frac(1, 2) / frac(1, 4) == Rational(2));
    CHECK(-frac(1, 2) == frac(-1, 2));
    CHECK(frac(1, 3) < frac(1, 2));
    CHECK(frac(-1, 2) < Rational(0));
    CHECK(Rational(0).is_zero());
    CHECK_THROWS_AS(frac(1, 0), DivisionByZeroError);
    CHECK_THROWS_AS(frac(1, 2) / Rational(0), DivisionByZeroError);
}

TEST_CASE("fraction and decimal rendering") {
    CHECK(frac(9, 35).to_fraction_string() == "9/35");
    CHECK(Rational(12).to_fraction_string() == "12");
    CHECK(Rational(0).to_decimal_string() == "0");
    CHECK(Rational(12).to_decimal_string() == "12");
    CHECK(frac(1, 5).to_decimal_string() == "0.2");
    CHECK(frac(9, 35).to_decimal_string() == "0.257143");
    CHECK(frac(1, 3).to_decimal_string() == "0.333333");
    CHECK(frac(2, 3).to_decimal_string() == "0.666667");
    CHECK(frac(4, 15).to_decimal_string() == "0.266667");
    CHECK(frac(-7, 2).to_decimal_string() == "-3.5");
    CHECK(frac(1, 1000).to_decimal_string() == "0.001");
    CHECK(frac(1000000, 7).to_decimal_string() == "142857");
    CHECK(frac(10000000, 7).to_decimal_string() == "1428570");
    CHECK(frac(999999999, 1000000).to_decimal_string() == "1000");
}

TEST_CASE("code parameter validation") {
    CHECK_NOTHROW(CodeParams(9, 7, 3, 4, 3));
    CHECK_THROWS_AS(CodeParams(0, 7, 3, 4, 3), InvalidParamsError);
    CHECK_THROWS_AS(CodeParams(9, 7, 3, 4, 0), InvalidParamsError);
    CHECK_THROWS_AS(CodeParams(9, 7, 5, 4, 3), InvalidParamsError); // k > d
    CHECK_THROWS_AS(CodeParams(9, 6, 3, 4, 3), InvalidParamsError); // d > n - t
}

TEST_CASE("single-failure feasibility predicate") {
    CHECK(feasible_single(1, 5, 8, frac(1, 5), frac(1, 20)));
    CHECK(capacity_sum(5, 8, frac(1, 5), frac(1, 20)) == Rational(1));
    CHECK_FALSE(feasible_single(1, 5, 8, frac(1, 5), frac(1, 21)));
    CHECK(feasible_single(0, 5, 8, frac(1, 5), frac(1, 21)));
    CHECK(feasible_single(0, 5, 8, Rational(0), Rational(0)));
    CHECK_THROWS_AS(feasible_single(1, 10, 8, frac(1, 5), frac(1, 20)), InvalidParamsError);
    CHECK_THROWS_AS(feasible_single(1, 5, 8, frac(-1, 5), frac(1, 20)), InvalidParamsError);
}

TEST_CASE("four named operating points") {
    OperatingPoint msr = msr_point(1, 5, 8);
    CHECK(msr.alpha == frac(1, 5));
    CHECK(msr.gamma == frac(2, 5));
    CHECK(msr.beta1 == frac(1, 20));
    CHECK(msr.beta2 == Rational(0));
    CHECK(msr.label == "MSR");

    OperatingPoint mbr = mbr_point(1, 5, 8);
    CHECK(mbr.alpha == frac(4, 15));
    CHECK(mbr.gamma == frac(4, 15));
    CHECK(mbr.label == "MBR");

    OperatingPoint mscr = mscr_point(1, 5, 8, 3);
    CHECK(mscr.alpha == frac(1, 5));
    CHECK(mscr.gamma == frac(1, 3));
    CHECK(mscr.beta1 == frac(1, 30));
    CHECK(mscr.beta2 == frac(1, 30));
    CHECK(mscr.label == "MSCR");

    OperatingPoint mbcr = mbcr_point(1, 5, 8, 3);
    CHECK(mbcr.alpha == frac(9, 35));
    CHECK(mbcr.gamma == frac(9, 35));
    CHECK(mbcr.beta1 == frac(1, 35));
    CHECK(mbcr.beta2 == frac(1, 70));
    CHECK(mbcr.label == "MBCR");

    CHECK(mbcr_point(24, 3, 4, 3).alpha == Rational(10));
    CHECK(mbcr_point(24, 3, 4, 3).gamma == Rational(10));
    CHECK(mbcr_point(36, 4, 5, 3).alpha == Rational(12));
    CHECK(mscr_point(16, 4, 5, 3).alpha == Rational(4));
    CHECK(mscr_point(16, 4, 5, 3).gamma == Rational(7));
    CHECK(msr_point(5, 5, 5).alpha == Rational(1));
    CHECK(msr_point(5, 5, 5).gamma == Rational(5));
    CHECK(mbr_point(3, 1, 1).alpha == Rational(3));

    CHECK_THROWS_AS(msr_point(1, 5, 4), InvalidParamsError);
    CHECK_THROWS_AS(mscr_point(1, 5, 4, 3), InvalidParamsError);
    CHECK_THROWS_AS(mscr_point(1, 5, 8, 0), InvalidParamsError);
}

TEST_CASE("gamma decomposes into per-phase message sizes") {
    for (std::uint64_t k = 2; k <= 5; ++k) {
        for (std::uint64_t d = k; d <= k + 4; ++d) {
            for (std::uint64_t t = 1; t <= 4; ++t) {
                for (const OperatingPoint& p : {mscr_point(7, k, d, t), mbcr_point(7, k, d, t)}) {
                    CHECK(p.gamma == Rational(p.d) * p.beta1 + Rational(p.t - 1) * p.beta2);
                }
            }
        }
    }
}

TEST_CASE("feasibility is tight at the extreme points") {
    for (std::uint64_t k = 1; k <= 6; ++k) {
        for (std::uint64_t d = k; d <= k + 5; ++d) {
            for (std::uint64_t B : {1ull, 7ull, 30ull}) {
                for (const OperatingPoint& p : {msr_point(B, k, d), mbr_point(B, k, d)}) {
                    Rational beta = p.gamma / Rational(d);
                    CHECK(capacity_sum(k, d, p.alpha, beta) == Rational(Rational::Int(B)));
                    CHECK(feasible_single(B, k, d, p.alpha, beta));
                }
            }
        }
    }
}

TEST_CASE("cooperative points with t=1 reduce to the single-failure points") {
    for (std::uint64_t k = 1; k <= 6; ++k) {
        for (std::uint64_t d = k; d <= k + 5; ++d) {
            for (std::uint64_t B : {1ull, 16ull, 23ull}) {
                OperatingPoint a = mscr_point(B, k, d, 1);
                OperatingPoint b = msr_point(B, k, d);
                CHECK(a.alpha == b.alpha);
                CHECK(a.gamma == b.gamma);
                CHECK(a.beta1 == b.beta1);
                CHECK(a.beta2 == b.beta2);
                CHECK(a.d == b.d);
                CHECK(a.t == b.t);
                CHECK(a.label == b.label);

                OperatingPoint c = mbcr_point(B, k, d, 1);
                OperatingPoint e = mbr_point(B, k, d);
                CHECK(c.alpha == e.alpha);
                CHECK(c.gamma == e.gamma);
                CHECK(c.beta1 == e.beta1);
                CHECK(c.beta2 == e.beta2);
                CHECK(c.d == e.d);
                CHECK(c.t == e.t);
                CHECK(c.label == e.label);
            }
        }
    }
}

TEST_CASE("cooperative repair beats t independent single repairs") {
    for (std::uint64_t k = 2; k <= 6; ++k) {
        for (std::uint64_t d = k; d <= k + 5; ++d) {
            for (std::uint64_t t = 2; t <= 5; ++t) {
                CHECK(mscr_point(12, k, d, t).gamma < msr_point(12, k, d).gamma);
            }
        }
    }
}

TEST_CASE("tradeoff table sweeps the single-failure curve") {
    TradeoffTable two = tradeoff_table(1, 5, 8, 1, 2);
    REQUIRE(two.rows.size() == 2);
    CHECK(two.interior_available);
    CHECK(two.rows[0].alpha == frac(1, 5));
    CHECK(two.rows[0].gamma == frac(2, 5));
    CHECK(two.rows[0].label == "MSR");
    CHECK(two.rows[1].alpha == frac(4, 15));
    CHECK(two.rows[1].gamma == frac(4, 15));
    CHECK(two.rows[1].label == "MBR");

    TradeoffTable sweep = tradeoff_table(30, 5, 8, 1, 9);
    REQUIRE(sweep.rows.size() == 9);
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const TradeoffRow& row = sweep.rows[i];
        Rational beta = row.gamma / Rational(8);
        // each row must sit exactly on the boundary: capacity == B, and any
        // smaller alpha is infeasible
        CHECK(capacity_sum(5, 8, row.alpha, beta) == Rational(30));
        Rational shaved = row.alpha * frac(999999, 1000000);
        CHECK_FALSE(feasible_single(30, 5, 8, shaved, beta));
        if (i > 0) {
            CHECK(row.gamma < sweep.rows[i - 1].gamma);
            CHECK(row.alpha > sweep.rows[i - 1].alpha);
        }
    }
    CHECK(sweep.rows[4].label == "single");
}

TEST_CASE("tradeoff table for t >= 2 exposes only the endpoints") {
    TradeoffTable table = tradeoff_table(1, 5, 8, 3, 20);
    REQUIRE(table.rows.size() == 2);
    CHECK_FALSE(table.interior_available);
    CHECK(table.rows[0].label == "MSCR");
    CHECK(table.rows[0].alpha == frac(1, 5));
    CHECK(table.rows[0].gamma == frac(1, 3));
    CHECK(table.rows[1].label == "MBCR");
    CHECK(table.rows[1].alpha == frac(9, 35));
    CHECK(table.rows[1].gamma == frac(9, 35));
    CHECK_THROWS_AS(tradeoff_table(1, 5, 8, 3, 1), InvalidParamsError);
}

TEST_CASE("csv rendering") {
    CHECK(csv_header() == "alpha_num,alpha_den,gamma_num,gamma_den,alpha_dec,gamma_dec,label");
    CHECK(csv_row(frac(9, 35), frac(1, 3), "MBCR") == "9,35,1,3,0.257143,0.333333,MBCR");
}
