#include "crgn/simulator.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "crgn/errors.hpp"
#include "crgn/tradeoff.hpp"

namespace crgn {

namespace {

std::vector<Fp> node_symbols(const MscrState& state, std::size_t k, std::size_t node) {
    return node <= k ? state.x.col(node - 1) : state.y.col(node - k - 1);
}

std::vector<Fp> unit_source(const PrimeField& field, std::size_t len, std::size_t hot) {
    std::vector<Fp> src(len, field.zero());
    src[hot] = field.one();
    return src;
}

// stacks encoding vectors into a matrix; nullptr when the list is empty
// (a Matrix cannot have zero rows)
std::optional<Matrix> stack_rows(const PrimeField& field, const std::vector<std::vector<Fp>>& rows) {
    if (rows.empty()) return std::nullopt;
    Matrix out(field, rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) out.set_row(r, rows[r]);
    return out;
}

Matrix append_rows(const Matrix& base, const Matrix& extra) {
    Matrix out(base.field(), base.rows() + extra.rows(), base.cols());
    for (std::size_t r = 0; r < base.rows(); ++r) out.set_row(r, base.row(r));
    for (std::size_t r = 0; r < extra.rows(); ++r) out.set_row(base.rows() + r, extra.row(r));
    return out;
}

// every row of `vectors` lies in the row space of `base`
bool in_row_space(const std::optional<Matrix>& base, const Matrix& vectors) {
    if (!base) return vectors.is_zero();
    return rank(append_rows(*base, vectors)) == rank(*base);
}

bool all_zero(const std::vector<Fp>& v) {
    return std::all_of(v.begin(), v.end(), [](const Fp& s) { return s.is_zero(); });
}

struct EntryShape {
    int phase;
    std::size_t from, to, count;

    bool operator==(const EntryShape&) const = default;
};

std::vector<EntryShape> transcript_shape(const RepairTranscript& tr) {
    std::vector<EntryShape> out;
    for (const TranscriptEntry& e : tr.entries) out.push_back({e.phase, e.from, e.to, e.symbols.size()});
    return out;
}

// runs `probe` once per unit source and installs per-symbol encoding vectors
// into `transcript`; all probe transcripts must share its shape
void annotate_with(RepairTranscript& transcript, const PrimeField& field, std::size_t b,
                   const std::function<RepairTranscript(const std::vector<Fp>&)>& probe) {
    std::vector<EntryShape> shape = transcript_shape(transcript);
    for (TranscriptEntry& entry : transcript.entries) {
        entry.encodings.assign(entry.symbols.size(), std::vector<Fp>(b, field.zero()));
    }
    for (std::size_t j = 0; j < b; ++j) {
        RepairTranscript probed = probe(unit_source(field, b, j));
        if (transcript_shape(probed) != shape) {
            throw Error("probe transcript shape diverged; repair is not data-independent");
        }
        for (std::size_t e = 0; e < probed.entries.size(); ++e) {
            for (std::size_t s = 0; s < probed.entries[e].symbols.size(); ++s) {
                transcript.entries[e].encodings[s][j] = probed.entries[e].symbols[s];
            }
        }
    }
}

} // namespace

const CodeParams& codebook_params(const Codebook& cb) {
    return std::visit([](const auto& c) -> const CodeParams& { return c.params; }, cb);
}

const PrimeField& codebook_field(const Codebook& cb) {
    return std::visit([](const auto& c) -> const PrimeField& { return c.field; }, cb);
}

std::size_t codebook_alpha(const Codebook& cb) {
    if (const auto* mbcr = std::get_if<MbcrCodebook>(&cb)) return mbcr->alpha();
    return std::get<MscrCodebook>(cb).k();
}

StorageCluster make_cluster(Codebook codebook, const std::vector<Fp>& source) {
    StorageCluster cluster{std::move(codebook), {}, {}, {}};
    if (const auto* mbcr = std::get_if<MbcrCodebook>(&cluster.codebook)) {
        for (const MbcrShard& shard : mbcr_encode(*mbcr, source)) {
            cluster.shards.emplace(shard.node_index, shard.symbols());
        }
    } else {
        const auto& mscr = std::get<MscrCodebook>(cluster.codebook);
        MscrState state = mscr_encode(mscr, source);
        for (std::size_t node = 1; node <= 2 * mscr.k(); ++node) {
            cluster.shards.emplace(node, node_symbols(state, mscr.k(), node));
        }
    }
    return cluster;
}

Matrix EncodingMatrix::node_rows(std::size_t node) const {
    return matrix.block((node - 1) * slots, 0, slots, matrix.cols());
}

EncodingMatrix extract_encoding_matrix(const MbcrCodebook& cb) {
    std::size_t n = cb.params.n, alpha = cb.alpha(), b = cb.params.B;
    EncodingMatrix em{Matrix(cb.field, n * alpha, b), n, alpha, {}};
    for (std::size_t node = 1; node <= n; ++node) {
        for (std::size_t slot = 0; slot < alpha; ++slot) {
            em.row_index.emplace(std::make_pair(node, slot), (node - 1) * alpha + slot);
        }
    }
    for (std::size_t j = 0; j < b; ++j) {
        std::vector<MbcrShard> shards = mbcr_encode(cb, unit_source(cb.field, b, j));
        for (const MbcrShard& shard : shards) {
            std::vector<Fp> symbols = shard.symbols();
            for (std::size_t slot = 0; slot < alpha; ++slot) {
                em.matrix.set((shard.node_index - 1) * alpha + slot, j, symbols[slot]);
            }
        }
    }
    return em;
}

EncodingMatrix extract_encoding_matrix(const MscrCodebook& cb) {
    std::size_t k = cb.k(), n = 2 * k, b = k * k;
    EncodingMatrix em{Matrix(cb.field, n * k, b), n, k, {}};
    for (std::size_t node = 1; node <= n; ++node) {
        for (std::size_t slot = 0; slot < k; ++slot) {
            em.row_index.emplace(std::make_pair(node, slot), (node - 1) * k + slot);
        }
    }
    for (std::size_t j = 0; j < b; ++j) {
        MscrState state = mscr_encode(cb, unit_source(cb.field, b, j));
        for (std::size_t node = 1; node <= n; ++node) {
            std::vector<Fp> symbols = node_symbols(state, k, node);
            for (std::size_t slot = 0; slot < k; ++slot) {
                em.matrix.set((node - 1) * k + slot, j, symbols[slot]);
            }
        }
    }
    return em;
}

EncodingMatrix extract_encoding_matrix(const Codebook& cb) {
    if (const auto* mbcr = std::get_if<MbcrCodebook>(&cb)) return extract_encoding_matrix(*mbcr);
    return extract_encoding_matrix(std::get<MscrCodebook>(cb));
}

ReconstructionReport verify_reconstruction(const EncodingMatrix& em, std::size_t k,
                                           const SubsetScanOptions& opts) {
    std::size_t b = em.matrix.cols();
    ReconstructionReport report{true, true, 0, {}};
    auto check = [&](std::span<const std::size_t> sel) {
        std::vector<std::size_t> rows;
        for (std::size_t node0 : sel) {
            for (std::size_t slot = 0; slot < em.slots; ++slot) rows.push_back(node0 * em.slots + slot);
        }
        ++report.checked;
        if (rank(em.matrix.select_rows(rows)) != b) {
            report.all_ok = false;
            std::vector<std::size_t> subset;
            for (std::size_t node0 : sel) subset.push_back(node0 + 1);
            report.failing_subsets.push_back(std::move(subset));
        }
    };
    if (binomial(em.nodes, k) <= opts.enumeration_cap) {
        for_each_combination(em.nodes, k, [&](std::span<const std::size_t> sel) {
            check(sel);
            return true;
        });
    } else {
        report.exhaustive = false;
        std::mt19937_64 rng(opts.seed);
        std::vector<std::size_t> all(em.nodes);
        std::iota(all.begin(), all.end(), 0u);
        for (std::uint64_t trial = 0; trial < opts.samples; ++trial) {
            std::shuffle(all.begin(), all.end(), rng);
            std::vector<std::size_t> sel(all.begin(), all.begin() + k);
            std::sort(sel.begin(), sel.end());
            check(sel);
        }
    }
    return report;
}

void annotate_mbcr_transcript(const MbcrCodebook& cb, const std::set<std::size_t>& failed,
                              const std::map<std::size_t, std::vector<std::size_t>>& helper_sets,
                              RepairTranscript& transcript) {
    annotate_with(transcript, cb.field, cb.params.B, [&](const std::vector<Fp>& src) {
        std::vector<MbcrShard> shards = mbcr_encode(cb, src);
        std::map<std::size_t, MbcrShard> survivors;
        for (const MbcrShard& s : shards) {
            if (!failed.count(s.node_index)) survivors.emplace(s.node_index, s);
        }
        return mbcr_repair(cb, failed, helper_sets, survivors).second;
    });
}

void annotate_mscr_transcript(const MscrCodebook& cb, const std::set<std::size_t>& failed,
                              RepairTranscript& transcript) {
    annotate_with(transcript, cb.field, cb.params.B, [&](const std::vector<Fp>& src) {
        MscrState state = mscr_encode(cb, src);
        return mscr_repair(cb, failed, mscr_survivors(state, failed)).second;
    });
}

TranscriptReport verify_transcript(const RepairTranscript& tr, const EncodingMatrix& em,
                                   const std::set<std::size_t>& failed,
                                   std::size_t beta1, std::size_t beta2) {
    TranscriptReport report{true, {}};
    auto flag = [&](std::string msg) {
        report.ok = false;
        report.violations.push_back(std::move(msg));
    };
    const PrimeField& field = em.matrix.field();
    std::size_t b = em.matrix.cols();

    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Fp>>> phase1, phase2;
    std::map<std::size_t, std::vector<std::vector<Fp>>> received; // everything sent to a new node
    for (std::size_t e = 0; e < tr.entries.size(); ++e) {
        const TranscriptEntry& entry = tr.entries[e];
        if (entry.encodings.size() != entry.symbols.size()) {
            flag("entry " + std::to_string(e) + ": missing encoding vectors (annotate first)");
            continue;
        }
        for (const std::vector<Fp>& vec : entry.encodings) {
            if (vec.size() != b) {
                flag("entry " + std::to_string(e) + ": encoding vector has wrong length");
                return report;
            }
        }
        if (entry.phase == 1) {
            if (failed.count(entry.from) || !failed.count(entry.to)) {
                flag("entry " + std::to_string(e) + ": first-phase message must go survivor -> new node");
                continue;
            }
            auto& vecs = phase1[{entry.to, entry.from}];
            vecs.insert(vecs.end(), entry.encodings.begin(), entry.encodings.end());
        } else if (entry.phase == 2) {
            if (!failed.count(entry.from) || !failed.count(entry.to) || entry.from == entry.to) {
                flag("entry " + std::to_string(e) + ": second-phase message must join two distinct new nodes");
                continue;
            }
            auto& vecs = phase2[{entry.from, entry.to}];
            vecs.insert(vecs.end(), entry.encodings.begin(), entry.encodings.end());
        } else {
            flag("entry " + std::to_string(e) + ": unknown phase " + std::to_string(entry.phase));
            continue;
        }
        auto& got = received[entry.to];
        got.insert(got.end(), entry.encodings.begin(), entry.encodings.end());
    }

    // per (new node, helper): at most beta1 symbols, all functions of the
    // helper's stored content
    std::map<std::size_t, std::vector<std::vector<Fp>>> phase1_by_receiver;
    for (const auto& [key, vecs] : phase1) {
        auto [to, from] = key;
        if (vecs.size() > beta1) {
            flag("helper " + std::to_string(from) + " sent " + std::to_string(vecs.size()) +
                 " first-phase symbols to node " + std::to_string(to) + " (beta1 = " +
                 std::to_string(beta1) + ")");
        }
        std::optional<Matrix> w_j(em.node_rows(from));
        if (auto stacked = stack_rows(field, vecs)) {
            if (!in_row_space(w_j, *stacked)) {
                flag("first-phase symbols from helper " + std::to_string(from) + " to node " +
                     std::to_string(to) + " are not functions of the helper's content");
            }
        }
        auto& pool = phase1_by_receiver[to];
        pool.insert(pool.end(), vecs.begin(), vecs.end());
    }

    // per ordered new-node pair: at most beta2 symbols, all functions of the
    // sender's first-phase receipts
    for (const auto& [key, vecs] : phase2) {
        auto [from, to] = key;
        if (vecs.size() > beta2) {
            flag("new node " + std::to_string(from) + " sent " + std::to_string(vecs.size()) +
                 " second-phase symbols to node " + std::to_string(to) + " (beta2 = " +
                 std::to_string(beta2) + ")");
        }
        auto it = phase1_by_receiver.find(from);
        std::optional<Matrix> basis;
        if (it != phase1_by_receiver.end()) basis = stack_rows(field, it->second);
        if (auto stacked = stack_rows(field, vecs)) {
            if (!in_row_space(basis, *stacked)) {
                flag("second-phase symbols from node " + std::to_string(from) + " to node " +
                     std::to_string(to) + " exceed what the sender learned in the first phase");
            }
        }
    }

    // coverage: each new node's stored functionals lie in the span of its
    // receipts
    for (std::size_t node : failed) {
        auto it = received.find(node);
        std::optional<Matrix> basis;
        if (it != received.end()) basis = stack_rows(field, it->second);
        if (!in_row_space(basis, em.node_rows(node))) {
            flag("node " + std::to_string(node) + " cannot rebuild its content from what it received");
        }
    }
    return report;
}

std::string BandwidthReport::to_string() const {
    return "total=" + std::to_string(total) + ", per_node=" + std::to_string(per_node) +
           ", predicted=" + predicted.to_fraction_string() + ", optimal=" + (optimal ? "true" : "false");
}

ScenarioResult run_scenario(StorageCluster& cluster, const std::set<std::size_t>& failures,
                            const HelperPolicy& policy) {
    std::size_t n = cluster.n();
    if (failures.empty()) throw BadFailureSetError("empty failure set");
    for (std::size_t node : failures) {
        if (node < 1 || node > n) {
            throw BadFailureSetError("node " + std::to_string(node) + " is not in 1.." + std::to_string(n));
        }
    }

    cluster.failed = failures;
    for (std::size_t node : failures) cluster.shards.erase(node);
    std::vector<std::size_t> survivors;
    for (const auto& [node, symbols] : cluster.shards) survivors.push_back(node);

    RepairTranscript transcript;
    CodeParams point_params = codebook_params(cluster.codebook);
    if (const auto* mbcr = std::get_if<MbcrCodebook>(&cluster.codebook)) {
        std::size_t d = mbcr->params.d;
        std::map<std::size_t, std::vector<std::size_t>> helper_sets;
        switch (policy.kind) {
        case HelperPolicy::Kind::lowest_index:
            if (survivors.size() < d) throw BadFailureSetError("fewer than d survivors");
            for (std::size_t node : failures) {
                helper_sets[node] = std::vector<std::size_t>(survivors.begin(), survivors.begin() + d);
            }
            break;
        case HelperPolicy::Kind::random_choice: {
            if (survivors.size() < d) throw BadFailureSetError("fewer than d survivors");
            std::mt19937_64 rng(policy.seed);
            for (std::size_t node : failures) {
                std::vector<std::size_t> pick = survivors;
                std::shuffle(pick.begin(), pick.end(), rng);
                pick.resize(d);
                std::sort(pick.begin(), pick.end());
                helper_sets[node] = std::move(pick);
            }
            break;
        }
        case HelperPolicy::Kind::explicit_sets:
            helper_sets = policy.sets;
            break;
        }
        std::map<std::size_t, MbcrShard> survivor_shards;
        for (const auto& [node, symbols] : cluster.shards) {
            survivor_shards.emplace(node, mbcr_shard_from_symbols(*mbcr, node, symbols));
        }
        auto [rebuilt, tr] = mbcr_repair(*mbcr, failures, helper_sets, survivor_shards);
        for (const MbcrShard& shard : rebuilt) cluster.shards[shard.node_index] = shard.symbols();
        transcript = std::move(tr);
    } else {
        const auto& mscr = std::get<MscrCodebook>(cluster.codebook);
        MscrSurvivors survivor_cols;
        for (const auto& [node, symbols] : cluster.shards) survivor_cols.columns.emplace(node, symbols);
        auto [rebuilt, tr] = mscr_repair(mscr, failures, survivor_cols);
        for (const auto& [node, column] : rebuilt) cluster.shards[node] = column;
        transcript = std::move(tr);
        // the protocol adapts d to the actual failure count
        std::size_t t = failures.size(), k = mscr.k();
        point_params = CodeParams(k * k, 2 * k, k, 2 * k - t, t);
    }
    cluster.failed.clear();

    BandwidthReport report{transcript.grand_total(), 0, Rational(0), false};
    std::map<std::size_t, std::size_t> per_node = transcript.per_node_totals();
    for (const auto& [node, total] : per_node) report.per_node = std::max(report.per_node, total);
    report.predicted =
        std::holds_alternative<MbcrCodebook>(cluster.codebook)
            ? mbcr_point(point_params.B, point_params.k, point_params.d, point_params.t).gamma
            : mscr_point(point_params.B, point_params.k, point_params.d, point_params.t).gamma;
    bool uniform = std::all_of(per_node.begin(), per_node.end(),
                               [&](const auto& kv) { return kv.second == report.per_node; });
    report.optimal = uniform && Rational(static_cast<std::int64_t>(report.per_node)) == report.predicted;
    return {std::move(transcript), report};
}

} // namespace crgn
