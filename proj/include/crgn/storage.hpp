#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "crgn/simulator.hpp"

namespace crgn {

inline constexpr std::uint32_t kFormatVersion = 1;
inline constexpr std::uint32_t kMbcrFamilyCode = 1;
inline constexpr std::uint32_t kMscrFamilyCode = 2;

// smallest w with 256^w > q - 1, so every symbol value fits in w bytes
std::uint32_t symbol_width_bytes(std::uint32_t q);

// Sidecar description of an encoded directory; serialized as UTF-8 JSON with
// exactly these field names.
struct Manifest {
    std::string code_family; // "mbcr" | "mscr"
    std::uint32_t q = 0;
    std::size_t n = 0, k = 0, d = 0, t = 0, B = 0;
    std::uint64_t original_length_bytes = 0;
    std::size_t stripe_count = 0;
    nlohmann::json matrix_seed_or_literal;
    std::uint32_t format_version = kFormatVersion;
};

nlohmann::ordered_json manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const nlohmann::json& j);
void save_manifest(const std::filesystem::path& path, const Manifest& m);
Manifest load_manifest(const std::filesystem::path& path);

// Rebuilds the codebook a manifest describes, including the exact matrices.
Codebook codebook_from_manifest(const Manifest& m);
// Captures a codebook's matrices into the manifest literal.
nlohmann::json matrix_literal(const Codebook& cb);

// Fixed-layout binary shard: magic "CRGN", then little-endian u32
// format_version, code_family, node_index, q, symbol_width_bytes, then
// little-endian u64 symbol_count, then the symbols (symbol_width_bytes each).
struct ShardData {
    std::uint32_t format_version = kFormatVersion;
    std::uint32_t code_family = 0;
    std::uint32_t node_index = 0;
    std::uint32_t q = 0;
    std::uint32_t symbol_width = 0;
    std::vector<std::uint32_t> values;
};

void write_shard_file(const std::filesystem::path& path, std::uint32_t code_family,
                      std::uint32_t node_index, std::uint32_t q, const std::vector<Fp>& symbols);
ShardData read_shard_file(const std::filesystem::path& path);

std::filesystem::path shard_path(const std::filesystem::path& dir, std::size_t node);
std::filesystem::path manifest_path(const std::filesystem::path& dir);

// One byte per symbol, zero-padded to `stripes` * B where stripes =
// max(1, ceil(len / B)).
std::vector<Fp> bytes_to_symbols(const PrimeField& field, const std::vector<std::uint8_t>& bytes,
                                 std::size_t b);
// Inverse mapping, truncated to the original byte length.
std::vector<std::uint8_t> symbols_to_bytes(const std::vector<Fp>& symbols, std::uint64_t length);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

} // namespace crgn
