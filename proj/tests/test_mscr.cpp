#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "crgn/errors.hpp"
#include "crgn/mscr.hpp"

using namespace crgn;

namespace {

std::vector<Fp> random_source(const PrimeField& field, std::size_t len, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> dist(0, field.modulus() - 1);
    std::vector<Fp> out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) out.push_back(field.element(dist(rng)));
    return out;
}

std::vector<Fp> flatten_columns(const Matrix& x) {
    std::vector<Fp> out;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        std::vector<Fp> col = x.col(c);
        out.insert(out.end(), col.begin(), col.end());
    }
    return out;
}

// expected column of node `node` (1..2k) for a given source
std::vector<Fp> node_column(const MscrState& state, std::size_t k, std::size_t node) {
    return node <= k ? state.x.col(node - 1) : state.y.col(node - k - 1);
}

// all-survivor repair of `failed`, checked against the encoder's columns
void check_repair(const MscrCodebook& cb, const MscrState& state, const std::set<std::size_t>& failed) {
    std::size_t k = cb.k();
    std::size_t t = failed.size();
    std::size_t d = 2 * k - t;
    auto [rebuilt, transcript] = mscr_repair(cb, failed, mscr_survivors(state, failed));
    REQUIRE(rebuilt.size() == t);
    for (std::size_t node : failed) {
        CHECK(rebuilt.at(node) == node_column(state, k, node));
    }
    CHECK(transcript.grand_total() == t * d + t * (t - 1));
    for (const auto& [node, total] : transcript.per_node_totals()) {
        CHECK(failed.count(node) == 1);
        CHECK(total == d + t - 1);
    }
}

} // namespace

TEST_CASE("build reproduces the published rate-1/2 instance over F_11") {
    PrimeField f11(11);
    MscrCodebook cb = mscr_build(f11, 4, 3);

    CHECK(cb.params.B == 16);
    CHECK(cb.params.n == 8);
    CHECK(cb.params.k == 4);
    CHECK(cb.params.d == 5);
    CHECK(cb.params.t == 3);

    Matrix p_printed = Matrix::from_rows(f11, {{1, 4, 9, 8}, {10, 1, 4, 9}, {7, 10, 1, 4}, {2, 7, 10, 1}});
    CHECK(cb.p == p_printed);
    CHECK(cb.u == Matrix::identity(f11, 4));
    CHECK(cb.v == cb.p); // V = U*P with U = I
    CHECK(cb.p * cb.q == Matrix::identity(f11, 4));

    CHECK(cb.a == f11.element(2));
    CHECK(cb.e == f11.element(1));
    CHECK(cb.b == f11.element(8));
    CHECK(cb.f == f11.element(7));
    // [[a,e],[e,a]] * [[b,f],[f,b]] = I
    CHECK(cb.a * cb.b + cb.e * cb.f == f11.one());
    CHECK(cb.a * cb.f + cb.e * cb.b == f11.zero());

    // dual bases: Uhat^T * U = I, Vhat^T * V = I
    CHECK(transpose(cb.uhat) * cb.u == Matrix::identity(f11, 4));
    CHECK(transpose(cb.vhat) * cb.v == Matrix::identity(f11, 4));
}

TEST_CASE("default P is the Cauchy matrix on even/odd points") {
    PrimeField f7(7);
    MscrCodebook cb = mscr_build(f7, 3, 2);
    // 1/(a_i - b_j) for a = (2,4,6), b = (1,3,5), hand-reduced mod 7
    CHECK(cb.p == Matrix::from_rows(f7, {{1, 6, 2}, {5, 1, 6}, {3, 5, 1}}));
}

TEST_CASE("build rejects bad parameters and matrices") {
    PrimeField f11(11);
    CHECK_THROWS_AS(mscr_build(f11, 4, 0), ParamsOutOfRangeError);
    CHECK_THROWS_AS(mscr_build(f11, 4, 5), ParamsOutOfRangeError);
    CHECK_THROWS_AS(mscr_build(f11, 0, 1), ParamsOutOfRangeError);

    // a = e makes a^2 - e^2 vanish
    CHECK_THROWS_AS(mscr_build(f11, 4, 3, std::nullopt, std::nullopt, f11.element(1), f11.element(1)),
                    BadScalarsError);
    CHECK_THROWS_AS(mscr_build(f11, 4, 3, std::nullopt, std::nullopt, f11.element(0), f11.element(1)),
                    BadScalarsError);
    CHECK_THROWS_AS(mscr_build(f11, 4, 3, std::nullopt, std::nullopt, f11.element(2), f11.element(9)),
                    BadScalarsError); // 9 = -2

    Matrix singular_u = Matrix::from_rows(f11, {{1, 2}, {2, 4}});
    CHECK_THROWS_AS(mscr_build(f11, 2, 2, singular_u), SingularUError);

    // identity has zero off-diagonal 1x1 minors, so it is not super-regular
    CHECK_THROWS_AS(mscr_build(f11, 2, 2, std::nullopt, Matrix::identity(f11, 2)), NotSuperRegularError);

    // default Cauchy construction needs 2k distinct points
    PrimeField f7(7);
    CHECK_THROWS_AS(mscr_build(f7, 4, 2), FieldTooSmallError);

    CHECK_THROWS_AS(mscr_build(f11, 4, 3, Matrix::identity(f11, 3)), DimensionMismatchError);
    PrimeField f13(13);
    CHECK_THROWS_AS(mscr_build(f11, 4, 3, Matrix::identity(f13, 4)), FieldMismatchError);
}

TEST_CASE("parity columns match the published encoding table") {
    PrimeField f11(11);
    MscrCodebook cb = mscr_build(f11, 4, 3);

    std::vector<std::vector<Fp>> sources;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) sources.push_back(random_source(f11, 16, seed));
    for (std::size_t unit = 0; unit < 16; ++unit) {
        std::vector<Fp> src(16, f11.zero());
        src[unit] = f11.one();
        sources.push_back(src);
    }

    for (const std::vector<Fp>& src : sources) {
        MscrState state = mscr_encode(cb, src);
        // node i stores (x_i1..x_i4) as column i of X
        auto x = [&](std::size_t i, std::size_t s) { return src[(i - 1) * 4 + (s - 1)]; };
        for (std::size_t i = 1; i <= 4; ++i) {
            for (std::size_t s = 1; s <= 4; ++s) CHECK(state.x.at(s - 1, i - 1) == x(i, s));
        }
        // parity node 4+j, row r holds (2x_{r l} + x_{l r})_{l=1..4} . p_j
        for (std::size_t j = 1; j <= 4; ++j) {
            for (std::size_t r = 1; r <= 4; ++r) {
                Fp want = f11.zero();
                for (std::size_t l = 1; l <= 4; ++l) {
                    want = want + (f11.element(2) * x(r, l) + x(l, r)) * cb.p.at(l - 1, j - 1);
                }
                CHECK(state.y.at(r - 1, j - 1) == want);
            }
        }
    }
}

TEST_CASE("per-column encoding form agrees with the matrix form") {
    PrimeField f13(13);
    Matrix u = Matrix::from_rows(f13, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    MscrCodebook cb = mscr_build(f13, 3, 2, u);
    REQUIRE(cb.v == u * cb.p);

    std::vector<Fp> src = random_source(f13, 9, 77);
    MscrState state = mscr_encode(cb, src);
    // y_j = sum_l (a * uhat_l * v_j^T + e * p_{lj} * I) x_l
    for (std::size_t j = 1; j <= 3; ++j) {
        std::vector<Fp> v_j = cb.v_col(j);
        Matrix want(f13, 3, 1);
        for (std::size_t l = 1; l <= 3; ++l) {
            Matrix x_l = Matrix::column_vector(state.x.col(l - 1));
            Matrix uhat_l = Matrix::column_vector(cb.uhat.col(l - 1));
            Fp proj = dot(v_j, state.x.col(l - 1));
            want = (j == 1 && l == 1) ? (cb.a * proj) * uhat_l + (cb.e * cb.p.at(l - 1, j - 1)) * x_l
                                      : want + (cb.a * proj) * uhat_l + (cb.e * cb.p.at(l - 1, j - 1)) * x_l;
        }
        CHECK(state.y.col(j - 1) == want.col(0));
    }

    std::vector<Fp> zero(9, f13.zero());
    MscrState z = mscr_encode(cb, zero);
    CHECK(z.x.is_zero());
    CHECK(z.y.is_zero());
}

TEST_CASE("dual encoding inverts the primary encoding") {
    std::size_t round_trips = 0;
    for (std::uint32_t q : {7u, 11u, 13u, 257u}) {
        PrimeField field(q);
        for (std::size_t k = 2; k <= 5; ++k) {
            if (q < 2 * k + 1) continue; // no default Cauchy P at this size
            MscrCodebook cb = mscr_build(field, k, 2);
            for (std::uint64_t seed = 0; seed < 15; ++seed) {
                std::vector<Fp> src = random_source(field, k * k, 1000 * q + 10 * k + seed);
                MscrState state = mscr_encode(cb, src);

                // X -> Y -> X
                CHECK(mscr_encode_dual(cb, state.y) == state.x);

                // Y -> X -> Y: treat the same matrix as a parity state
                Matrix y0(field, k, k);
                for (std::size_t r = 0; r < k; ++r) {
                    for (std::size_t c = 0; c < k; ++c) y0.set(r, c, src[c * k + r]);
                }
                Matrix x0 = mscr_encode_dual(cb, y0);
                CHECK(mscr_encode(cb, flatten_columns(x0)).y == y0);

                // (ab+ef) X + (be+af) Uhat X^T U = X
                Fp s1 = cb.a * cb.b + cb.e * cb.f;
                Fp s2 = cb.b * cb.e + cb.a * cb.f;
                CHECK(s1 == field.one());
                CHECK(s2 == field.zero());
                CHECK(s1 * state.x + s2 * (cb.uhat * transpose(state.x) * cb.u) == state.x);
                ++round_trips;
            }
        }
    }
    CHECK(round_trips >= 200);

    PrimeField f11(11);
    MscrCodebook cb = mscr_build(f11, 4, 3);
    Matrix zero_y(f11, 4, 4);
    CHECK(mscr_encode_dual(cb, zero_y).is_zero());
    CHECK_THROWS_AS(mscr_encode_dual(cb, Matrix::identity(f11, 3)), DimensionMismatchError);
}

TEST_CASE("systematic repair reproduces the published walkthrough") {
    PrimeField f11(11);
    MscrCodebook cb = mscr_build(f11, 4, 3);
    std::vector<Fp> src = random_source(f11, 16, 404);
    MscrState state = mscr_encode(cb, src);
    auto x = [&](std::size_t i, std::size_t s) { return src[(i - 1) * 4 + (s - 1)]; };

    std::set<std::size_t> failed = {1, 2, 3};
    auto [rebuilt, transcript] = mscr_repair_systematic(cb, failed, mscr_survivors(state, failed));
    for (std::size_t node : failed) CHECK(rebuilt.at(node) == state.x.col(node - 1));

    CHECK(transcript.grand_total() == 21); // 7 per new node
    std::map<std::size_t, std::size_t> per_node = transcript.per_node_totals();
    REQUIRE(per_node.size() == 3);
    for (std::size_t node : failed) CHECK(per_node.at(node) == 7);

    std::size_t phase1 = 0, phase2 = 0;
    for (const TranscriptEntry& entry : transcript.entries) {
        REQUIRE(entry.symbols.size() == 1);
        if (entry.phase == 1) {
            ++phase1;
            // with U = I every first-phase message is a raw read of the
            // receiver's row in the sender's column
            CHECK(entry.symbols[0] == node_column(state, 4, entry.from)[entry.to - 1]);
        } else {
            ++phase2;
        }
    }
    CHECK(phase1 == 15);
    CHECK(phase2 == 6);

    // second phase: nodes 1/2 exchange 2x12+x21 and 2x21+x12, and so on
    Fp two = f11.element(2);
    std::map<std::pair<std::size_t, std::size_t>, Fp> want;
    want.emplace(std::make_pair(1, 2), two * x(1, 2) + x(2, 1));
    want.emplace(std::make_pair(2, 1), two * x(2, 1) + x(1, 2));
    want.emplace(std::make_pair(1, 3), two * x(1, 3) + x(3, 1));
    want.emplace(std::make_pair(3, 1), two * x(3, 1) + x(1, 3));
    want.emplace(std::make_pair(2, 3), two * x(2, 3) + x(3, 2));
    want.emplace(std::make_pair(3, 2), two * x(3, 2) + x(2, 3));
    for (const TranscriptEntry& entry : transcript.entries) {
        if (entry.phase != 2) continue;
        CHECK(entry.symbols[0] == want.at({entry.from, entry.to}));
    }
}

TEST_CASE("phase-one knowledge matches the published per-node lists") {
    PrimeField f11(11);
    MscrCodebook cb = mscr_build(f11, 4, 3);
    std::set<std::size_t> failed = {1, 2, 3};

    // functional of the 16 source symbols, index (i-1)*4 + (s-1) <-> x_{is}
    using Func = std::vector<Fp>;
    auto functional = [&](std::vector<std::pair<std::size_t, Fp>> terms) {
        Func f(16, f11.zero());
        for (auto& [idx, coeff] : terms) f[idx] = coeff;
        return f;
    };
    auto idx = [](std::size_t i, std::size_t s) { return (i - 1) * 4 + (s - 1); };

    // probe with unit sources: entry value under unit source u is the
    // coefficient of source symbol u in that message
    std::map<std::size_t, Func> sys_func;                // new node -> functional of the node-4 message
    std::map<std::size_t, std::vector<Func>> par_funcs;  // new node -> functionals of the parity messages
    for (std::size_t unit = 0; unit < 16; ++unit) {
        std::vector<Fp> src(16, f11.zero());
        src[unit] = f11.one();
        MscrState state = mscr_encode(cb, src);
        auto [rebuilt, transcript] = mscr_repair_systematic(cb, failed, mscr_survivors(state, failed));
        for (const TranscriptEntry& entry : transcript.entries) {
            if (entry.phase != 1) continue;
            if (entry.from == 4) {
                sys_func.emplace(entry.to, Func(16, f11.zero())).first->second[unit] = entry.symbols[0];
            } else {
                auto [it, inserted] = par_funcs.emplace(entry.to, std::vector<Func>());
                if (inserted) it->second.assign(4, Func(16, f11.zero()));
                it->second[entry.from - 5][unit] = entry.symbols[0];
            }
        }
    }

    Fp one = f11.one(), two = f11.element(2), three = f11.element(3);
    for (std::size_t i : failed) {
        // node 4's message is the raw symbol x_{4i}
        CHECK(sys_func.at(i) == functional({{idx(4, i), one}}));

        // applying Q to the parity row yields the aligned vector
        // (2x_{i nu} + x_{nu i})_nu: e.g. node 1 computes x41, 3x11,
        // 2x12+x21, 2x13+x31, 2x14+x41
        const std::vector<Func>& pf = par_funcs.at(i);
        for (std::size_t nu = 1; nu <= 4; ++nu) {
            Func w_nu(16, f11.zero());
            for (std::size_t j = 0; j < 4; ++j) {
                for (std::size_t s = 0; s < 16; ++s) w_nu[s] = w_nu[s] + pf[j][s] * cb.q.at(j, nu - 1);
            }
            Func want = nu == i ? functional({{idx(i, i), three}})
                                : functional({{idx(i, nu), two}, {idx(nu, i), one}});
            CHECK(w_nu == want);
        }
    }
}

TEST_CASE("every failure pattern repairs exactly") {
    struct Instance {
        std::uint32_t q;
        std::size_t k;
    };
    for (Instance inst : {Instance{11, 4}, Instance{7, 2}, Instance{7, 3}, Instance{11, 2}, Instance{11, 3}}) {
        PrimeField field(inst.q);
        for (std::size_t t = 1; t <= inst.k; ++t) {
            MscrCodebook cb = mscr_build(field, inst.k, t);
            std::vector<Fp> src = random_source(field, inst.k * inst.k, 31 * inst.q + 7 * inst.k + t);
            MscrState state = mscr_encode(cb, src);
            for_each_combination(inst.k, t, [&](std::span<const std::size_t> combo) {
                std::set<std::size_t> sys_failed, par_failed;
                for (std::size_t c : combo) {
                    sys_failed.insert(c + 1);
                    par_failed.insert(inst.k + c + 1);
                }
                check_repair(cb, state, sys_failed);
                check_repair(cb, state, par_failed);
                return true;
            });
        }
    }
}

TEST_CASE("repair works with a non-identity projection basis") {
    PrimeField f13(13);
    Matrix u = Matrix::from_rows(f13, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    MscrCodebook cb = mscr_build(f13, 3, 2, u);
    std::vector<Fp> src = random_source(f13, 9, 555);
    MscrState state = mscr_encode(cb, src);
    for_each_combination(3, 2, [&](std::span<const std::size_t> combo) {
        check_repair(cb, state, {combo[0] + 1, combo[1] + 1});
        check_repair(cb, state, {combo[0] + 4, combo[1] + 4});
        return true;
    });
}

TEST_CASE("single-failure repair skips the exchange phase") {
    PrimeField f11(11);
    MscrCodebook cb = mscr_build(f11, 3, 1);
    std::vector<Fp> src = random_source(f11, 9, 99);
    MscrState state = mscr_encode(cb, src);
    for (std::size_t node = 1; node <= 6; ++node) {
        auto [rebuilt, transcript] = mscr_repair(cb, {node}, mscr_survivors(state, {node}));
        CHECK(rebuilt.at(node) == node_column(state, 3, node));
        CHECK(transcript.grand_total() == 5); // d = 2k - 1
        for (const TranscriptEntry& entry : transcript.entries) CHECK(entry.phase == 1);
    }
}

TEST_CASE("repair sees only surviving columns") {
    PrimeField f11(11);
    MscrCodebook cb = mscr_build(f11, 4, 3);
    std::vector<Fp> src = random_source(f11, 16, 2024);
    MscrState state = mscr_encode(cb, src);

    std::set<std::size_t> failed = {2, 3, 4};
    MscrState corrupted = state;
    for (std::size_t node : failed) {
        for (std::size_t r = 0; r < 4; ++r) corrupted.x.set(r, node - 1, f11.element(6));
    }
    MscrSurvivors survivors = mscr_survivors(corrupted, failed);
    for (std::size_t node : failed) CHECK(survivors.columns.count(node) == 0);

    auto [rebuilt, transcript] = mscr_repair(cb, failed, survivors);
    for (std::size_t node : failed) CHECK(rebuilt.at(node) == state.x.col(node - 1));
}

TEST_CASE("decode recovers the file from every node subset") {
    PrimeField f11(11);
    MscrCodebook cb = mscr_build(f11, 4, 3);
    std::vector<Fp> src = random_source(f11, 16, 808);
    MscrState state = mscr_encode(cb, src);

    std::size_t subsets = 0;
    for_each_combination(8, 4, [&](std::span<const std::size_t> combo) {
        std::vector<MscrShardColumn> shards;
        for (std::size_t c : combo) shards.push_back({c + 1, node_column(state, 4, c + 1)});
        CHECK(mscr_decode(cb, shards) == src);
        ++subsets;
        return true;
    });
    CHECK(subsets == 70);
}

TEST_CASE("decode with nodes 3,4,5,6 pivots on the published corner of P") {
    PrimeField f11(11);
    MscrCodebook cb = mscr_build(f11, 4, 3);

    // missing systematic {1,2}, parity columns {1,2}: the linchpin submatrix
    // is the top-left 2x2 corner of P, nonsingular by super-regularity
    std::vector<std::size_t> rows = {0, 1};
    Matrix pi1 = cb.p.select_cols(rows).select_rows(rows);
    CHECK(pi1 == Matrix::from_rows(f11, {{1, 4}, {10, 1}}));
    CHECK(is_nonsingular(pi1));

    std::vector<Fp> src = random_source(f11, 16, 303);
    MscrState state = mscr_encode(cb, src);
    std::vector<MscrShardColumn> shards;
    for (std::size_t node : {3, 4, 5, 6}) shards.push_back({node, node_column(state, 4, node)});
    CHECK(mscr_decode(cb, shards) == src);

    // all-systematic subset needs no algebra at all
    std::vector<MscrShardColumn> plain;
    for (std::size_t node : {1, 2, 3, 4}) plain.push_back({node, state.x.col(node - 1)});
    CHECK(mscr_decode(cb, plain) == src);
}

TEST_CASE("repair and decode reject malformed requests") {
    PrimeField f11(11);
    MscrCodebook cb = mscr_build(f11, 4, 3);
    std::vector<Fp> src = random_source(f11, 16, 111);
    MscrState state = mscr_encode(cb, src);

    CHECK_THROWS_AS(mscr_encode(cb, random_source(f11, 15, 1)), WrongLengthError);

    MscrSurvivors all = mscr_survivors(state, {});
    CHECK_THROWS_AS(mscr_repair_systematic(cb, {}, all), BadFailureSetError);
    CHECK_THROWS_AS(mscr_repair_systematic(cb, {5}, mscr_survivors(state, {5})), BadFailureSetError);
    CHECK_THROWS_AS(mscr_repair_parity(cb, {1}, mscr_survivors(state, {1})), BadFailureSetError);
    CHECK_THROWS_AS(mscr_repair_systematic(cb, {1, 2, 3, 4, 5}, mscr_survivors(state, {1, 2, 3, 4, 5})),
                    TooManyFailuresError);
    CHECK_THROWS_AS(mscr_repair(cb, {1, 5}, mscr_survivors(state, {1, 5})), MixedFailureUnsupportedError);

    // dispatcher routes pure sets to the right algorithm
    auto [sys_rebuilt, t1] = mscr_repair(cb, {2}, mscr_survivors(state, {2}));
    CHECK(sys_rebuilt.at(2) == state.x.col(1));
    auto [par_rebuilt, t2] = mscr_repair(cb, {6}, mscr_survivors(state, {6}));
    CHECK(par_rebuilt.at(6) == state.y.col(1));

    // survivor set must cover all non-failed nodes with well-formed columns
    MscrSurvivors missing = mscr_survivors(state, {1, 2});
    missing.columns.erase(7);
    CHECK_THROWS_AS(mscr_repair_systematic(cb, {1, 2}, missing), BadFailureSetError);
    MscrSurvivors short_col = mscr_survivors(state, {1, 2});
    short_col.columns.at(5).pop_back();
    CHECK_THROWS_AS(mscr_repair_systematic(cb, {1, 2}, short_col), InconsistentShardError);

    std::vector<MscrShardColumn> shards;
    for (std::size_t node : {1, 2, 3}) shards.push_back({node, state.x.col(node - 1)});
    CHECK_THROWS_AS(mscr_decode(cb, shards), NotEnoughShardsError);
    shards.push_back({3, state.x.col(2)});
    CHECK_THROWS_AS(mscr_decode(cb, shards), DuplicateShardError);
    shards.back() = {9, state.x.col(2)};
    CHECK_THROWS_AS(mscr_decode(cb, shards), InconsistentShardError);
}
