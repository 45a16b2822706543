#include "crgn/storage.hpp"

#include <fstream>

#include "crgn/errors.hpp"

namespace crgn {

namespace {

void append_le(std::vector<std::uint8_t>& out, std::uint64_t value, std::size_t width) {
    for (std::size_t i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

std::uint64_t read_le(const std::vector<std::uint8_t>& in, std::size_t offset, std::size_t width) {
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < width; ++i) value |= std::uint64_t{in[offset + i]} << (8 * i);
    return value;
}

std::vector<std::vector<std::int64_t>> json_matrix(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw FormatError("matrix literal is missing array \"" + key + "\"");
    }
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& row : j.at(key)) rows.push_back(row.get<std::vector<std::int64_t>>());
    return rows;
}

nlohmann::json matrix_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).value());
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

std::uint32_t symbol_width_bytes(std::uint32_t q) {
    std::uint32_t width = 1;
    std::uint64_t reach = 256;
    while (reach <= q - 1) {
        reach *= 256;
        ++width;
    }
    return width;
}

nlohmann::ordered_json manifest_to_json(const Manifest& m) {
    nlohmann::ordered_json j;
    j["code_family"] = m.code_family;
    j["q"] = m.q;
    j["n"] = m.n;
    j["k"] = m.k;
    j["d"] = m.d;
    j["t"] = m.t;
    j["B"] = m.B;
    j["original_length_bytes"] = m.original_length_bytes;
    j["stripe_count"] = m.stripe_count;
    j["matrix_seed_or_literal"] = m.matrix_seed_or_literal;
    j["format_version"] = m.format_version;
    return j;
}

Manifest manifest_from_json(const nlohmann::json& j) {
    Manifest m;
    try {
        m.code_family = j.at("code_family").get<std::string>();
        m.q = j.at("q").get<std::uint32_t>();
        m.n = j.at("n").get<std::size_t>();
        m.k = j.at("k").get<std::size_t>();
        m.d = j.at("d").get<std::size_t>();
        m.t = j.at("t").get<std::size_t>();
        m.B = j.at("B").get<std::size_t>();
        m.original_length_bytes = j.at("original_length_bytes").get<std::uint64_t>();
        m.stripe_count = j.at("stripe_count").get<std::size_t>();
        m.matrix_seed_or_literal = j.at("matrix_seed_or_literal");
        m.format_version = j.at("format_version").get<std::uint32_t>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("manifest field error: ") + e.what());
    }
    if (m.code_family != "mbcr" && m.code_family != "mscr") {
        throw FormatError("unknown code_family \"" + m.code_family + "\"");
    }
    if (m.format_version != kFormatVersion) {
        throw FormatError("unsupported manifest format_version " + std::to_string(m.format_version));
    }
    if (m.stripe_count == 0) throw FormatError("stripe_count must be positive");
    return m;
}

void save_manifest(const std::filesystem::path& path, const Manifest& m) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << manifest_to_json(m).dump(2) << "\n";
    if (!out) throw IoError("write failed for " + path.string());
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("manifest is not valid JSON: " + std::string(e.what()));
    }
    return manifest_from_json(j);
}

Codebook codebook_from_manifest(const Manifest& m) {
    PrimeField field(m.q);
    const nlohmann::json& lit = m.matrix_seed_or_literal;
    if (m.code_family == "mbcr") {
        if (lit.value("kind", "") != "vandermonde_points") {
            throw FormatError("mbcr manifest needs a vandermonde_points literal");
        }
        std::vector<std::int64_t> points = lit.at("points").get<std::vector<std::int64_t>>();
        MbcrCodebook cb = mbcr_build(field, m.n, m.k, m.d, m.t, field.elements(points));
        if (cb.params.B != m.B) throw FormatError("manifest B does not match the code parameters");
        return cb;
    }
    if (lit.value("kind", "") != "mscr_matrices") {
        throw FormatError("mscr manifest needs an mscr_matrices literal");
    }
    Matrix u = Matrix::from_rows(field, json_matrix(lit, "u"));
    Matrix p = Matrix::from_rows(field, json_matrix(lit, "p"));
    Fp a = field.element(lit.at("a").get<std::int64_t>());
    Fp e = field.element(lit.at("e").get<std::int64_t>());
    MscrCodebook cb = mscr_build(field, m.k, m.t, u, p, a, e);
    if (cb.params.B != m.B || cb.params.n != m.n || cb.params.d != m.d) {
        throw FormatError("manifest parameters do not match the code family formulas");
    }
    return cb;
}

nlohmann::json matrix_literal(const Codebook& cb) {
    nlohmann::json j;
    if (const auto* mbcr = std::get_if<MbcrCodebook>(&cb)) {
        j["kind"] = "vandermonde_points";
        nlohmann::json points = nlohmann::json::array();
        for (std::size_t node = 1; node <= mbcr->params.n; ++node) {
            // row 1 of a Vandermonde holds the points; V always has >= 2 rows
            points.push_back(mbcr->v.at(1, node - 1).value());
        }
        j["points"] = std::move(points);
    } else {
        const auto& mscr = std::get<MscrCodebook>(cb);
        j["kind"] = "mscr_matrices";
        j["a"] = mscr.a.value();
        j["e"] = mscr.e.value();
        j["u"] = matrix_json(mscr.u);
        j["p"] = matrix_json(mscr.p);
    }
    return j;
}

void write_shard_file(const std::filesystem::path& path, std::uint32_t code_family,
                      std::uint32_t node_index, std::uint32_t q, const std::vector<Fp>& symbols) {
    std::uint32_t width = symbol_width_bytes(q);
    std::vector<std::uint8_t> bytes;
    bytes.reserve(32 + symbols.size() * width);
    bytes.insert(bytes.end(), {'C', 'R', 'G', 'N'});
    append_le(bytes, kFormatVersion, 4);
    append_le(bytes, code_family, 4);
    append_le(bytes, node_index, 4);
    append_le(bytes, q, 4);
    append_le(bytes, width, 4);
    append_le(bytes, symbols.size(), 8);
    for (const Fp& s : symbols) append_le(bytes, s.value(), width);
    write_file_bytes(path, bytes);
}

ShardData read_shard_file(const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes = read_file_bytes(path);
    if (bytes.size() < 32 || bytes[0] != 'C' || bytes[1] != 'R' || bytes[2] != 'G' || bytes[3] != 'N') {
        throw FormatError(path.string() + ": not a shard file");
    }
    ShardData shard;
    shard.format_version = static_cast<std::uint32_t>(read_le(bytes, 4, 4));
    shard.code_family = static_cast<std::uint32_t>(read_le(bytes, 8, 4));
    shard.node_index = static_cast<std::uint32_t>(read_le(bytes, 12, 4));
    shard.q = static_cast<std::uint32_t>(read_le(bytes, 16, 4));
    shard.symbol_width = static_cast<std::uint32_t>(read_le(bytes, 20, 4));
    std::uint64_t count = read_le(bytes, 24, 8);
    if (shard.format_version != kFormatVersion) {
        throw FormatError(path.string() + ": unsupported format_version");
    }
    if (shard.symbol_width == 0 || shard.symbol_width > 8) {
        throw FormatError(path.string() + ": bad symbol width");
    }
    if (bytes.size() != 32 + count * shard.symbol_width) {
        throw FormatError(path.string() + ": truncated or oversized payload");
    }
    shard.values.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t v = read_le(bytes, 32 + i * shard.symbol_width, shard.symbol_width);
        if (shard.q != 0 && v >= shard.q) {
            throw FormatError(path.string() + ": symbol value " + std::to_string(v) + " outside the field");
        }
        shard.values.push_back(static_cast<std::uint32_t>(v));
    }
    return shard;
}

std::filesystem::path shard_path(const std::filesystem::path& dir, std::size_t node) {
    return dir / ("shard_" + std::to_string(node) + ".crgn");
}

std::filesystem::path manifest_path(const std::filesystem::path& dir) {
    return dir / "manifest.json";
}

std::vector<Fp> bytes_to_symbols(const PrimeField& field, const std::vector<std::uint8_t>& bytes,
                                 std::size_t b) {
    std::size_t stripes = bytes.empty() ? 1 : (bytes.size() + b - 1) / b;
    std::vector<Fp> symbols;
    symbols.reserve(stripes * b);
    for (std::uint8_t byte : bytes) symbols.push_back(field.element(byte));
    while (symbols.size() < stripes * b) symbols.push_back(field.zero());
    return symbols;
}

std::vector<std::uint8_t> symbols_to_bytes(const std::vector<Fp>& symbols, std::uint64_t length) {
    if (length > symbols.size()) throw WrongLengthError("fewer symbols than the recorded byte length");
    std::vector<std::uint8_t> bytes;
    bytes.reserve(length);
    for (std::uint64_t i = 0; i < length; ++i) {
        std::uint32_t v = symbols[i].value();
        if (v > 255) throw FormatError("decoded symbol " + std::to_string(v) + " is not a byte");
        bytes.push_back(static_cast<std::uint8_t>(v));
    }
    return bytes;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed for " + path.string());
    return bytes;
}

void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace crgn
