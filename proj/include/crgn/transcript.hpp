#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "crgn/field.hpp"

namespace crgn {

// One message of a repair session. Phase 1 flows helper -> new node, phase 2
// new node -> new node. `encodings` is filled in by the simulator's
// annotation pass: one length-B vector per symbol giving the linear
// functional the symbol applies to the source.
struct TranscriptEntry {
    int phase;
    std::size_t from;
    std::size_t to;
    std::vector<Fp> symbols;
    std::vector<std::vector<Fp>> encodings;
};

struct RepairTranscript {
    std::vector<TranscriptEntry> entries;

    std::size_t grand_total() const {
        std::size_t total = 0;
        for (const TranscriptEntry& e : entries) total += e.symbols.size();
        return total;
    }

    // symbols received, keyed by new node
    std::map<std::size_t, std::size_t> per_node_totals() const {
        std::map<std::size_t, std::size_t> totals;
        for (const TranscriptEntry& e : entries) totals[e.to] += e.symbols.size();
        return totals;
    }
};

} // namespace crgn
