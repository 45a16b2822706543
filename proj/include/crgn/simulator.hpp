#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "crgn/matrix.hpp"
#include "crgn/mbcr.hpp"
#include "crgn/mscr.hpp"
#include "crgn/rational.hpp"
#include "crgn/transcript.hpp"

namespace crgn {

using Codebook = std::variant<MbcrCodebook, MscrCodebook>;

const CodeParams& codebook_params(const Codebook& cb);
const PrimeField& codebook_field(const Codebook& cb);
std::size_t codebook_alpha(const Codebook& cb);

// Byte-level bookkeeping carried alongside a cluster when it backs a file.
struct StripeMeta {
    std::uint64_t original_length_bytes = 0;
    std::size_t padding_symbols = 0;
};

// One simulated storage system: a codebook, the live shard contents in
// canonical symbol order, and the currently failed node set.
struct StorageCluster {
    Codebook codebook;
    std::map<std::size_t, std::vector<Fp>> shards; // live nodes only
    std::set<std::size_t> failed;
    StripeMeta stripe_meta;

    std::size_t n() const { return codebook_params(codebook).n; }
    std::size_t alpha() const { return codebook_alpha(codebook); }
};

// Encodes `source` and installs every node's shard.
StorageCluster make_cluster(Codebook codebook, const std::vector<Fp>& source);

// Row (node, slot) is the linear functional that stored symbol applies to
// the source vector; node i's rows span its subspace W_i.
struct EncodingMatrix {
    Matrix matrix;     // (n * alpha) x B
    std::size_t nodes;
    std::size_t slots; // alpha
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> row_index;

    Matrix node_rows(std::size_t node) const; // alpha x B block, 1-based
};

// Built by probing: encode each unit source vector and read all shards.
EncodingMatrix extract_encoding_matrix(const MbcrCodebook& cb);
EncodingMatrix extract_encoding_matrix(const MscrCodebook& cb);
EncodingMatrix extract_encoding_matrix(const Codebook& cb);

struct ReconstructionReport {
    bool all_ok;
    bool exhaustive; // enumerated every subset vs. seeded sampling
    std::size_t checked;
    std::vector<std::vector<std::size_t>> failing_subsets; // 1-based node lists
};

// Checks that every k-subset of nodes spans the full B-dimensional source
// space (stacked rows have rank B), enumerating up to opts.enumeration_cap
// subsets and sampling beyond that.
ReconstructionReport verify_reconstruction(const EncodingMatrix& em, std::size_t k,
                                           const SubsetScanOptions& opts = {});

// Fill entry.encodings by re-running the same repair under each unit source;
// the transcript shape is data-independent, only the symbol values change.
void annotate_mbcr_transcript(const MbcrCodebook& cb, const std::set<std::size_t>& failed,
                              const std::map<std::size_t, std::vector<std::size_t>>& helper_sets,
                              RepairTranscript& transcript);
void annotate_mscr_transcript(const MscrCodebook& cb, const std::set<std::size_t>& failed,
                              RepairTranscript& transcript);

struct TranscriptReport {
    bool ok;
    std::vector<std::string> violations;
};

// Replays the linear-model constraints against an annotated transcript:
// per (new node, helper) at most beta1 first-phase symbols, each a function
// of the helper's stored content; per ordered new-node pair at most beta2
// second-phase symbols, each a function of what the sender received in the
// first phase; and every failed node's stored functionals must lie in the
// span of everything it received.
TranscriptReport verify_transcript(const RepairTranscript& tr, const EncodingMatrix& em,
                                   const std::set<std::size_t>& failed,
                                   std::size_t beta1, std::size_t beta2);

// How a scenario picks each new node's d helpers (MBCR only; MSCR always
// uses every survivor).
struct HelperPolicy {
    enum class Kind { lowest_index, random_choice, explicit_sets };
    Kind kind = Kind::lowest_index;
    std::uint64_t seed = 0;
    std::map<std::size_t, std::vector<std::size_t>> sets;

    static HelperPolicy lowest_index() { return {}; }
    static HelperPolicy random_choice(std::uint64_t seed) {
        return {Kind::random_choice, seed, {}};
    }
    static HelperPolicy explicit_sets(std::map<std::size_t, std::vector<std::size_t>> sets) {
        return {Kind::explicit_sets, 0, std::move(sets)};
    }
};

struct BandwidthReport {
    std::size_t total;    // symbols moved in the whole session
    std::size_t per_node; // symbols received per new node
    Rational predicted;   // gamma at this (B, k, d, t) operating point
    bool optimal;         // per_node == predicted

    std::string to_string() const;
};

struct ScenarioResult {
    RepairTranscript transcript;
    BandwidthReport report;
};

// Marks `failures` failed, runs the matching repair protocol, reinstalls the
// rebuilt shards, and reports measured vs. predicted bandwidth.
ScenarioResult run_scenario(StorageCluster& cluster, const std::set<std::size_t>& failures,
                            const HelperPolicy& policy = HelperPolicy::lowest_index());

} // namespace crgn
