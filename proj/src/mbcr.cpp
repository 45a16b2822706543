#include "crgn/mbcr.hpp"

#include <algorithm>
#include <string>

#include "crgn/errors.hpp"

namespace crgn {

namespace {

void check_symbol_field(const PrimeField& field, const std::vector<Fp>& symbols, const char* what) {
    for (const Fp& s : symbols) {
        if (s.modulus() != field.modulus()) {
            throw FieldMismatchError(std::string(what) + ": symbol field differs from codebook field");
        }
    }
}

void check_shard_shape(const MbcrCodebook& cb, const MbcrShard& shard) {
    const CodeParams& p = cb.params;
    if (shard.node_index < 1 || shard.node_index > p.n) {
        throw InconsistentShardError("shard node index " + std::to_string(shard.node_index) + " out of 1.." +
                                     std::to_string(p.n));
    }
    if (shard.row_part.size() != p.d + p.t || shard.col_part.size() != p.d - 1 ||
        shard.drop_index != cb.drop_index[shard.node_index - 1]) {
        throw InconsistentShardError("shard layout does not match codebook for node " +
                                     std::to_string(shard.node_index));
    }
    check_symbol_field(cb.field, shard.row_part, "shard");
    check_symbol_field(cb.field, shard.col_part, "shard");
}

} // namespace

std::vector<Fp> MbcrCodebook::u_col(std::size_t node) const { return u.col(node - 1); }

std::vector<Fp> MbcrCodebook::v_col(std::size_t node) const { return v.col(node - 1); }

std::vector<Fp> MbcrShard::symbols() const {
    std::vector<Fp> out = col_part;
    out.insert(out.end(), row_part.begin(), row_part.end());
    return out;
}

MbcrSource mbcr_pack_source(const PrimeField& field, std::size_t k, std::size_t d, std::size_t t,
                            const std::vector<Fp>& symbols) {
    std::size_t B = k * (2 * d + t - k);
    if (symbols.size() != B) {
        throw WrongLengthError("source has " + std::to_string(symbols.size()) + " symbols, expected " +
                               std::to_string(B));
    }
    check_symbol_field(field, symbols, "source");
    Matrix m(field, d, d + t);
    std::size_t pos = 0;
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) m.set(r, c, symbols[pos++]);
    }
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = k; c < d + t; ++c) m.set(r, c, symbols[pos++]);
    }
    for (std::size_t r = k; r < d; ++r) {
        for (std::size_t c = 0; c < k; ++c) m.set(r, c, symbols[pos++]);
    }
    return MbcrSource{m};
}

std::vector<Fp> mbcr_unpack_source(const MbcrSource& source, std::size_t k) {
    const Matrix& m = source.m;
    std::size_t d = m.rows();
    std::size_t dt = m.cols();
    std::vector<Fp> out;
    out.reserve(k * (d + dt - k));
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = 0; c < k; ++c) out.push_back(m.at(r, c));
    }
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t c = k; c < dt; ++c) out.push_back(m.at(r, c));
    }
    for (std::size_t r = k; r < d; ++r) {
        for (std::size_t c = 0; c < k; ++c) out.push_back(m.at(r, c));
    }
    return out;
}

MbcrCodebook mbcr_build(const PrimeField& field, std::size_t n, std::size_t k, std::size_t d, std::size_t t,
                        const std::vector<Fp>& points) {
    if (k < 1 || d < k || t < 1 || n < d + t) {
        throw ParamsOutOfRangeError("need n - t >= d >= k >= 1 and t >= 1, got n=" + std::to_string(n) +
                                    " k=" + std::to_string(k) + " d=" + std::to_string(d) + " t=" + std::to_string(t));
    }
    std::vector<Fp> pts = points;
    if (pts.empty()) {
        if (field.modulus() < n) {
            throw FieldTooSmallError("field size " + std::to_string(field.modulus()) + " below node count " +
                                     std::to_string(n));
        }
        for (std::size_t i = 1; i < n; ++i) pts.push_back(field.element(static_cast<std::int64_t>(i)));
        pts.push_back(field.zero());
    }
    if (pts.size() != n) {
        throw InvalidParamsError("need one evaluation point per node, got " + std::to_string(pts.size()));
    }
    check_symbol_field(field, pts, "points");

    Matrix u = vandermonde(field, d, pts);
    Matrix v = vandermonde(field, d + t, pts);
    MbcrConditionReport conditions = check_mbcr_conditions(u, v, k);
    if (!conditions.all_ok()) throw ConditionsFailedError("generator matrices fail a column-subset rank condition");

    std::vector<std::size_t> drops;
    drops.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        while (r < d && u.at(r, i).is_zero()) ++r;
        if (r == d) throw ConditionsFailedError("zero column in U");
        drops.push_back(r);
    }

    CodeParams params(k * (2 * d + t - k), n, k, d, t);
    return MbcrCodebook{params, field, std::move(u), std::move(v), std::move(drops), conditions};
}

std::vector<MbcrShard> mbcr_encode(const MbcrCodebook& cb, const std::vector<Fp>& source) {
    const CodeParams& p = cb.params;
    Matrix m = mbcr_pack_source(cb.field, p.k, p.d, p.t, source).m;
    std::vector<MbcrShard> shards;
    shards.reserve(p.n);
    for (std::size_t node = 1; node <= p.n; ++node) {
        std::vector<Fp> u_i = cb.u_col(node);
        std::vector<Fp> v_i = cb.v_col(node);
        MbcrShard shard{node, {}, {}, cb.drop_index[node - 1]};
        shard.row_part.reserve(p.d + p.t);
        for (std::size_t c = 0; c < p.d + p.t; ++c) shard.row_part.push_back(dot(u_i, m.col(c)));
        shard.col_part.reserve(p.d - 1);
        for (std::size_t r = 0; r < p.d; ++r) {
            if (r == shard.drop_index) continue;
            shard.col_part.push_back(dot(m.row(r), v_i));
        }
        shards.push_back(std::move(shard));
    }
    return shards;
}

MbcrShard mbcr_shard_from_symbols(const MbcrCodebook& cb, std::size_t node,
                                  const std::vector<Fp>& symbols) {
    std::size_t d = cb.params.d, t = cb.params.t;
    if (node < 1 || node > cb.params.n) {
        throw InconsistentShardError("node " + std::to_string(node) + " out of 1.." +
                                     std::to_string(cb.params.n));
    }
    if (symbols.size() != 2 * d + t - 1) {
        throw InconsistentShardError("node " + std::to_string(node) + " holds " +
                                     std::to_string(symbols.size()) + " symbols, expected " +
                                     std::to_string(2 * d + t - 1));
    }
    return MbcrShard{node,
                     std::vector<Fp>(symbols.begin() + (d - 1), symbols.end()),
                     std::vector<Fp>(symbols.begin(), symbols.begin() + (d - 1)),
                     cb.drop_index[node - 1]};
}

Fp mbcr_missing_component(const MbcrShard& shard, const MbcrCodebook& cb) {
    check_shard_shape(cb, shard);
    std::vector<Fp> u_i = cb.u_col(shard.node_index);
    std::vector<Fp> v_i = cb.v_col(shard.node_index);
    Fp total = dot(shard.row_part, v_i); // u_i^T (M v_i)
    Fp partial = cb.field.zero();
    std::size_t pos = 0;
    for (std::size_t r = 0; r < cb.params.d; ++r) {
        if (r == shard.drop_index) continue;
        partial += u_i[r] * shard.col_part[pos++];
    }
    return (total - partial) / u_i[shard.drop_index];
}

std::vector<Fp> mbcr_full_column(const MbcrShard& shard, const MbcrCodebook& cb) {
    Fp dropped = mbcr_missing_component(shard, cb);
    std::vector<Fp> column;
    column.reserve(cb.params.d);
    std::size_t pos = 0;
    for (std::size_t r = 0; r < cb.params.d; ++r) {
        column.push_back(r == shard.drop_index ? dropped : shard.col_part[pos++]);
    }
    return column;
}

std::pair<Fp, Fp> mbcr_helper_message(const MbcrCodebook& cb, const MbcrShard& helper_shard, std::size_t new_node) {
    check_shard_shape(cb, helper_shard);
    if (new_node < 1 || new_node > cb.params.n || new_node == helper_shard.node_index) {
        throw BadHelperSetError("helper " + std::to_string(helper_shard.node_index) +
                                " cannot serve new node " + std::to_string(new_node));
    }
    std::vector<Fp> column = mbcr_full_column(helper_shard, cb); // M v_helper
    Fp first = dot(cb.u_col(new_node), column);                  // u_new^T M v_helper
    Fp second = dot(helper_shard.row_part, cb.v_col(new_node));  // u_helper^T M v_new
    return {first, second};
}

std::pair<std::vector<MbcrShard>, RepairTranscript> mbcr_repair(
    const MbcrCodebook& cb, const std::set<std::size_t>& failed,
    const std::map<std::size_t, std::vector<std::size_t>>& helper_sets,
    const std::map<std::size_t, MbcrShard>& shards) {
    const CodeParams& p = cb.params;
    if (failed.size() != p.t) {
        throw BadFailureSetError("repair rebuilds exactly t=" + std::to_string(p.t) + " nodes, got " +
                                 std::to_string(failed.size()));
    }
    for (std::size_t node : failed) {
        if (node < 1 || node > p.n) throw BadFailureSetError("failed node " + std::to_string(node) + " out of range");
    }
    for (std::size_t node : failed) {
        auto it = helper_sets.find(node);
        if (it == helper_sets.end() || it->second.size() != p.d) {
            throw BadHelperSetError("new node " + std::to_string(node) + " needs exactly d=" + std::to_string(p.d) +
                                    " helpers");
        }
        std::set<std::size_t> uniq(it->second.begin(), it->second.end());
        if (uniq.size() != p.d) throw BadHelperSetError("duplicate helper for node " + std::to_string(node));
        for (std::size_t h : it->second) {
            if (h < 1 || h > p.n || failed.count(h)) {
                throw BadHelperSetError("helper " + std::to_string(h) + " is not a surviving node");
            }
            auto sh = shards.find(h);
            if (sh == shards.end()) throw BadHelperSetError("no shard supplied for helper " + std::to_string(h));
            if (sh->second.node_index != h) {
                throw InconsistentShardError("shard keyed " + std::to_string(h) + " labels itself " +
                                             std::to_string(sh->second.node_index));
            }
        }
    }

    RepairTranscript transcript;
    std::vector<std::size_t> new_nodes(failed.begin(), failed.end());

    // phase 1: every helper sends its message pair; each new node solves the
    // stacked helper system for M v_i
    std::map<std::size_t, std::vector<Fp>> column_of;          // new node -> M v_i
    std::map<std::size_t, std::map<std::size_t, Fp>> row_val;  // new node -> {peer s -> u_i^T M v_s}
    for (std::size_t i : new_nodes) {
        const std::vector<std::size_t>& helpers = helper_sets.at(i);
        Matrix coeff(cb.field, p.d, p.d);
        Matrix rhs(cb.field, p.d, 1);
        for (std::size_t row = 0; row < helpers.size(); ++row) {
            std::size_t j = helpers[row];
            auto [to_row, to_col] = mbcr_helper_message(cb, shards.at(j), i);
            transcript.entries.push_back({1, j, i, {to_row, to_col}, {}});
            coeff.set_row(row, cb.u_col(j));
            rhs.set(row, 0, to_col);
            row_val[i].emplace(j, to_row);
        }
        column_of[i] = solve_left(coeff, rhs).col(0);
    }

    // phase 2: new nodes exchange one symbol per ordered pair
    for (std::size_t i : new_nodes) {
        for (std::size_t other : new_nodes) {
            if (other == i) continue;
            Fp symbol = dot(cb.u_col(other), column_of.at(i)); // u_other^T M v_i
            transcript.entries.push_back({2, i, other, {symbol}, {}});
            row_val[other].emplace(i, symbol);
        }
    }

    // each new node now holds u_i^T M v_s for the d + t nodes s it heard
    // from (helpers, peers, and itself); invert the stacked columns of V
    std::vector<MbcrShard> rebuilt;
    for (std::size_t i : new_nodes) {
        row_val[i].emplace(i, dot(cb.u_col(i), column_of.at(i)));
        std::vector<std::size_t> sources;
        for (const auto& [s, val] : row_val.at(i)) sources.push_back(s);
        Matrix v_sub(cb.field, p.d + p.t, p.d + p.t);
        Matrix rhs(cb.field, 1, p.d + p.t);
        for (std::size_t c = 0; c < sources.size(); ++c) {
            v_sub.set_col(c, cb.v_col(sources[c]));
            rhs.set(0, c, row_val.at(i).at(sources[c]));
        }
        std::vector<Fp> row_part = solve_right(v_sub, rhs).row(0); // u_i^T M

        MbcrShard shard{i, std::move(row_part), {}, cb.drop_index[i - 1]};
        const std::vector<Fp>& column = column_of.at(i);
        for (std::size_t r = 0; r < p.d; ++r) {
            if (r != shard.drop_index) shard.col_part.push_back(column[r]);
        }
        rebuilt.push_back(std::move(shard));
    }
    return {std::move(rebuilt), std::move(transcript)};
}

std::vector<Fp> mbcr_decode(const MbcrCodebook& cb, const std::vector<MbcrShard>& shards) {
    const CodeParams& p = cb.params;
    if (shards.size() < p.k) {
        throw NotEnoughShardsError("decode needs k=" + std::to_string(p.k) + " shards, got " +
                                   std::to_string(shards.size()));
    }
    std::set<std::size_t> seen;
    for (const MbcrShard& s : shards) {
        check_shard_shape(cb, s);
        if (!seen.insert(s.node_index).second) {
            throw DuplicateShardError("duplicate shard for node " + std::to_string(s.node_index));
        }
    }

    std::vector<const MbcrShard*> picked;
    for (std::size_t i = 0; i < p.k; ++i) picked.push_back(&shards[i]);

    // stacked per-shard data: full M v_i and the stored u_i^T M
    Matrix v1(cb.field, p.k, p.k);                 // first k entries of each v_i, as columns
    std::vector<std::vector<Fp>> columns;          // M v_i per shard
    for (std::size_t idx = 0; idx < p.k; ++idx) {
        const MbcrShard& s = *picked[idx];
        columns.push_back(mbcr_full_column(s, cb));
        std::vector<Fp> v_i = cb.v_col(s.node_index);
        for (std::size_t r = 0; r < p.k; ++r) v1.set(r, idx, v_i[r]);
    }

    // bottom d-k rows of M v_i depend on C alone: C * v1 = stacked bottoms
    Matrix m(cb.field, p.d, p.d + p.t);
    if (p.d > p.k) {
        Matrix bottoms(cb.field, p.d - p.k, p.k);
        for (std::size_t idx = 0; idx < p.k; ++idx) {
            for (std::size_t r = p.k; r < p.d; ++r) bottoms.set(r - p.k, idx, columns[idx][r]);
        }
        Matrix c_blk = solve_right(v1, bottoms);
        for (std::size_t r = 0; r < p.d - p.k; ++r) {
            for (std::size_t c = 0; c < p.k; ++c) m.set(p.k + r, c, c_blk.at(r, c));
        }
    }

    // trailing d+t-k entries of u_i^T M depend on Bblk alone
    Matrix u_top(cb.field, p.k, p.k);
    Matrix tails(cb.field, p.k, p.d + p.t - p.k);
    for (std::size_t idx = 0; idx < p.k; ++idx) {
        const MbcrShard& s = *picked[idx];
        std::vector<Fp> u_i = cb.u_col(s.node_index);
        for (std::size_t c = 0; c < p.k; ++c) u_top.set(idx, c, u_i[c]);
        for (std::size_t c = p.k; c < p.d + p.t; ++c) tails.set(idx, c - p.k, s.row_part[c]);
    }
    Matrix b_blk = solve_left(u_top, tails);
    for (std::size_t r = 0; r < p.k; ++r) {
        for (std::size_t c = 0; c < p.d + p.t - p.k; ++c) m.set(r, p.k + c, b_blk.at(r, c));
    }

    // top k rows of M v_i: A v_i' + Bblk v_i''; strip the Bblk part, solve A
    Matrix tops(cb.field, p.k, p.k);
    for (std::size_t idx = 0; idx < p.k; ++idx) {
        std::vector<Fp> v_i = cb.v_col(picked[idx]->node_index);
        for (std::size_t r = 0; r < p.k; ++r) {
            Fp rest = cb.field.zero();
            for (std::size_t c = p.k; c < p.d + p.t; ++c) rest += b_blk.at(r, c - p.k) * v_i[c];
            tops.set(r, idx, columns[idx][r] - rest);
        }
    }
    Matrix a_blk = solve_right(v1, tops);
    for (std::size_t r = 0; r < p.k; ++r) {
        for (std::size_t c = 0; c < p.k; ++c) m.set(r, c, a_blk.at(r, c));
    }

    return mbcr_unpack_source(MbcrSource{std::move(m)}, p.k);
}

} // namespace crgn
