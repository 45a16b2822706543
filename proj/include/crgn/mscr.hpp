#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "crgn/field.hpp"
#include "crgn/matrix.hpp"
#include "crgn/tradeoff.hpp"
#include "crgn/transcript.hpp"

namespace crgn {

// Minimum-storage cooperative regenerating code with n = 2k nodes: k
// systematic nodes hold the source columns x_1..x_k of X, k parity nodes
// hold columns y_1..y_k of Y = a*Uhat*X^T*V + e*X*P. Any t <= k failed
// nodes, all systematic or all parity, are rebuilt from the d = n - t
// survivors plus an exchange among the new nodes; any k nodes decode.
struct MscrCodebook {
    CodeParams params; // B = k*k, n = 2k, d = 2k - t
    PrimeField field;
    Matrix u;    // k x k, nonsingular
    Matrix p;    // k x k, super-regular
    Matrix q;    // P^-1
    Matrix v;    // U * P
    Matrix uhat; // (U^-1)^T: dual basis of the columns of U
    Matrix vhat; // (V^-1)^T
    Fp a, e;     // encoding scalars
    Fp b, f;     // dual scalars: [[a,e],[e,a]] * [[b,f],[f,b]] = I

    std::size_t k() const { return params.k; }
    std::vector<Fp> u_col(std::size_t i) const { return u.col(i - 1); } // 1-based
    std::vector<Fp> v_col(std::size_t i) const { return v.col(i - 1); }
};

struct MscrState {
    Matrix x; // k x k, column i-1 = content of systematic node i
    Matrix y; // k x k, column j-1 = content of parity node k+j
};

// Surviving node contents handed to a repair run, keyed by node index in
// [1..2k]. Building this from a cluster (rather than passing full state)
// keeps failed data out of reach of the protocol.
struct MscrSurvivors {
    std::map<std::size_t, std::vector<Fp>> columns;
};

MscrSurvivors mscr_survivors(const MscrState& state, const std::set<std::size_t>& failed);

struct MscrShardColumn {
    std::size_t node_index; // 1..2k
    std::vector<Fp> column; // k symbols
};

MscrCodebook mscr_build(const PrimeField& field, std::size_t k, std::size_t t,
                        std::optional<Matrix> u = std::nullopt, std::optional<Matrix> p = std::nullopt,
                        std::optional<Fp> a = std::nullopt, std::optional<Fp> e = std::nullopt);

// source laid out node by node: symbols (i-1)*k .. i*k-1 become column i of X
MscrState mscr_encode(const MscrCodebook& cb, const std::vector<Fp>& source);

// Inverse encoding map: X = b*Vhat*Y^T*U + f*Y*Q.
Matrix mscr_encode_dual(const MscrCodebook& cb, const Matrix& y);

// Cooperative repair of t failed systematic nodes (indices in [1..k]).
// Returns rebuilt columns keyed by node index plus the message transcript.
std::pair<std::map<std::size_t, std::vector<Fp>>, RepairTranscript> mscr_repair_systematic(
    const MscrCodebook& cb, const std::set<std::size_t>& failed, const MscrSurvivors& survivors);

// Cooperative repair of t failed parity nodes (indices in [k+1..2k]).
std::pair<std::map<std::size_t, std::vector<Fp>>, RepairTranscript> mscr_repair_parity(
    const MscrCodebook& cb, const std::set<std::size_t>& failed, const MscrSurvivors& survivors);

// Dispatch on the failed set; mixed systematic/parity sets are rejected.
std::pair<std::map<std::size_t, std::vector<Fp>>, RepairTranscript> mscr_repair(
    const MscrCodebook& cb, const std::set<std::size_t>& failed, const MscrSurvivors& survivors);

// Recovers the k*k source symbols from any k distinct node columns.
std::vector<Fp> mscr_decode(const MscrCodebook& cb, const std::vector<MscrShardColumn>& shards);

} // namespace crgn
