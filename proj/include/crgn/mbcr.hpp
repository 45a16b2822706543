#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "crgn/field.hpp"
#include "crgn/matrix.hpp"
#include "crgn/tradeoff.hpp"
#include "crgn/transcript.hpp"

namespace crgn {

// Minimum-bandwidth cooperative regenerating code. A file of B = k(2d+t-k)
// symbols is arranged into a d x (d+t) source matrix M with block structure
// [[A, Bblk], [C, 0]]; node i stores the row vector u_i^T M together with
// M v_i (one redundant component dropped), for columns u_i of U and v_i of V.
// Any t lost nodes are rebuilt from d helpers each plus an exchange among the
// new nodes; any k nodes recover the file.
struct MbcrCodebook {
    CodeParams params; // B, n, k, d, t with B = k(2d+t-k)
    PrimeField field;
    Matrix u; // d x n
    Matrix v; // (d+t) x n
    std::vector<std::size_t> drop_index; // per node: component of M v_i not stored
    MbcrConditionReport conditions;

    std::size_t alpha() const { return 2 * params.d + params.t - 1; }
    std::vector<Fp> u_col(std::size_t node) const; // 1-based node index
    std::vector<Fp> v_col(std::size_t node) const;
};

struct MbcrShard {
    std::size_t node_index; // 1-based
    std::vector<Fp> row_part; // d+t symbols: u_i^T M
    std::vector<Fp> col_part; // d-1 symbols: M v_i with entry drop_index omitted
    std::size_t drop_index;

    // canonical storage order: col_part then row_part (2d+t-1 symbols)
    std::vector<Fp> symbols() const;
};

// Source symbols live in M as A (k x k), then Bblk (k x (d+t-k)), then
// C ((d-k) x k), each row-major.
struct MbcrSource {
    Matrix m; // d x (d+t), bottom-right (d-k) x (d+t-k) block zero
};

MbcrSource mbcr_pack_source(const PrimeField& field, std::size_t k, std::size_t d, std::size_t t,
                            const std::vector<Fp>& symbols);
std::vector<Fp> mbcr_unpack_source(const MbcrSource& source, std::size_t k);

// points: one evaluation point per node for the Vandermonde U and V; defaults
// to 1, 2, ..., n-1, 0.
MbcrCodebook mbcr_build(const PrimeField& field, std::size_t n, std::size_t k, std::size_t d, std::size_t t,
                        const std::vector<Fp>& points = {});

std::vector<MbcrShard> mbcr_encode(const MbcrCodebook& cb, const std::vector<Fp>& source);

// Rebuilds a shard from its canonical symbol order (col_part then row_part).
MbcrShard mbcr_shard_from_symbols(const MbcrCodebook& cb, std::size_t node,
                                  const std::vector<Fp>& symbols);

// The component of M v_i left out of the shard, recovered from the identity
// u_i^T (M v_i) = (u_i^T M) v_i.
Fp mbcr_missing_component(const MbcrShard& shard, const MbcrCodebook& cb);

// M v_i with the dropped component filled back in.
std::vector<Fp> mbcr_full_column(const MbcrShard& shard, const MbcrCodebook& cb);

// Phase-1 message from a helper to a new node: (u_new^T M v_helper,
// u_helper^T M v_new), both computable from the helper's shard alone.
std::pair<Fp, Fp> mbcr_helper_message(const MbcrCodebook& cb, const MbcrShard& helper_shard, std::size_t new_node);

// Cooperative repair of exactly t failed nodes. helper_sets maps each failed
// node to its d helpers (all surviving). Returns the rebuilt shards in
// ascending node order plus the full message transcript.
std::pair<std::vector<MbcrShard>, RepairTranscript> mbcr_repair(
    const MbcrCodebook& cb, const std::set<std::size_t>& failed,
    const std::map<std::size_t, std::vector<std::size_t>>& helper_sets,
    const std::map<std::size_t, MbcrShard>& shards);

// Recovers the B source symbols from any k distinct shards.
std::vector<Fp> mbcr_decode(const MbcrCodebook& cb, const std::vector<MbcrShard>& shards);

} // namespace crgn
