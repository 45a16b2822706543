#include "crgn/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "crgn/errors.hpp"
#include "crgn/mbcr.hpp"
#include "crgn/mscr.hpp"
#include "crgn/simulator.hpp"
#include "crgn/storage.hpp"
#include "crgn/tradeoff.hpp"

namespace crgn::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Internal escape hatch for failures whose exit code is not determined by the
// exception type alone (e.g. an unsupported failure pattern detected up front).
struct ExitWith {
    int code;
    std::string message;
};

std::string one_line(std::string msg) {
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    return msg;
}

int fail(std::ostream& err, int code, const std::string& msg) {
    err << "error: " << one_line(msg) << '\n';
    return code;
}

// Maps library exceptions onto the CLI exit-code contract; every error path
// prints a single `error:` line.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const ExitWith& e) {
        return fail(err, e.code, e.message);
    } catch (const MixedFailureUnsupportedError& e) {
        return fail(err, kExitUnsupportedFailure, e.what());
    } catch (const TooManyFailuresError& e) {
        return fail(err, kExitUnsupportedFailure, e.what());
    } catch (const NotEnoughShardsError& e) {
        return fail(err, kExitInsufficientShards, e.what());
    } catch (const IoError& e) {
        return fail(err, kExitIo, e.what());
    } catch (const FormatError& e) {
        return fail(err, kExitIo, e.what());
    } catch (const Error& e) {
        return fail(err, kExitParams, e.what());
    } catch (const std::exception& e) {
        return fail(err, kExitParams, e.what());
    }
}

template <typename Container>
std::string join(const Container& xs) {
    std::string out;
    for (std::size_t x : xs) {
        if (!out.empty()) out += ",";
        out += std::to_string(x);
    }
    return out;
}

std::uint32_t family_code_of(const Manifest& m) {
    return m.code_family == "mbcr" ? kMbcrFamilyCode : kMscrFamilyCode;
}

std::vector<Fp> stripe_slice(const std::vector<Fp>& all, std::size_t stripe, std::size_t alpha) {
    return std::vector<Fp>(all.begin() + stripe * alpha, all.begin() + (stripe + 1) * alpha);
}

// Reads one node's shard file and cross-checks its header against the
// manifest; returns the symbols as field elements.
std::vector<Fp> load_node_symbols(const fs::path& dir, const Manifest& m, const PrimeField& field,
                                  std::size_t alpha, std::size_t node) {
    fs::path path = shard_path(dir, node);
    ShardData sd = read_shard_file(path);
    if (sd.code_family != family_code_of(m)) {
        throw FormatError(path.string() + ": family code " + std::to_string(sd.code_family) +
                          " does not match the manifest (" + m.code_family + ")");
    }
    if (sd.node_index != node) {
        throw FormatError(path.string() + ": header names node " + std::to_string(sd.node_index) +
                          ", expected " + std::to_string(node));
    }
    if (sd.q != m.q) {
        throw FormatError(path.string() + ": field size " + std::to_string(sd.q) +
                          " does not match the manifest (q=" + std::to_string(m.q) + ")");
    }
    std::size_t expected = alpha * m.stripe_count;
    if (sd.values.size() != expected) {
        throw FormatError(path.string() + ": holds " + std::to_string(sd.values.size()) +
                          " symbols, expected " + std::to_string(expected));
    }
    std::vector<Fp> out;
    out.reserve(sd.values.size());
    for (std::uint32_t v : sd.values) out.push_back(field.element(v));
    return out;
}

// Decodes one stripe from the listed nodes' stored symbols.
std::vector<Fp> decode_stripe(const Codebook& cb, const std::map<std::size_t, std::vector<Fp>>& content,
                              const std::vector<std::size_t>& nodes, std::size_t stripe, std::size_t alpha) {
    if (const auto* mbcr = std::get_if<MbcrCodebook>(&cb)) {
        std::vector<MbcrShard> shards;
        shards.reserve(nodes.size());
        for (std::size_t node : nodes) {
            shards.push_back(mbcr_shard_from_symbols(*mbcr, node, stripe_slice(content.at(node), stripe, alpha)));
        }
        return mbcr_decode(*mbcr, shards);
    }
    const auto& mscr = std::get<MscrCodebook>(cb);
    std::vector<MscrShardColumn> cols;
    cols.reserve(nodes.size());
    for (std::size_t node : nodes) {
        cols.push_back({node, stripe_slice(content.at(node), stripe, alpha)});
    }
    return mscr_decode(mscr, cols);
}

// --- params ---------------------------------------------------------------

int do_params(const ParamsArgs& a, std::ostream& out) {
    std::vector<OperatingPoint> points;
    points.push_back(msr_point(a.B, a.k, a.d));
    points.push_back(mbr_point(a.B, a.k, a.d));
    points.push_back(mscr_point(a.B, a.k, a.d, a.t));
    points.push_back(mbcr_point(a.B, a.k, a.d, a.t));

    out << csv_header() << '\n';
    for (const OperatingPoint& p : points) out << csv_row(p.alpha, p.gamma, p.label) << '\n';
    if (a.t == 1) {
        TradeoffTable table = tradeoff_table(a.B, a.k, a.d, a.t, a.samples);
        for (const TradeoffRow& row : table.rows) out << csv_row(row.alpha, row.gamma, row.label) << '\n';
    }
    return kExitOk;
}

// --- encode ---------------------------------------------------------------

Codebook build_codebook_for_encode(const EncodeArgs& a, const PrimeField& field) {
    if (a.family == "mbcr") {
        if (a.n == 0 || a.k == 0 || a.d == 0 || a.t == 0) {
            throw InvalidParamsError("mbcr encoding needs -n, -k, -d and -t");
        }
        return mbcr_build(field, a.n, a.k, a.d, a.t);
    }
    if (a.family == "mscr") {
        if (a.k == 0 || a.t == 0) throw InvalidParamsError("mscr encoding needs -k and -t");
        if (a.n != 0 && a.n != 2 * a.k) {
            throw InvalidParamsError("mscr uses n = 2k nodes; got n=" + std::to_string(a.n) +
                                     " with k=" + std::to_string(a.k));
        }
        if (a.d != 0 && a.d != 2 * a.k - a.t) {
            throw InvalidParamsError("mscr uses d = 2k - t helpers; got d=" + std::to_string(a.d) +
                                     " with k=" + std::to_string(a.k) + ", t=" + std::to_string(a.t));
        }
        return mscr_build(field, a.k, a.t);
    }
    throw InvalidParamsError("unknown code family '" + a.family + "' (expected mbcr or mscr)");
}

int do_encode(const EncodeArgs& a, std::ostream& out) {
    if (a.q < 257) {
        throw InvalidParamsError("q must be at least 257 so every byte value maps to a distinct symbol (got q=" +
                                 std::to_string(a.q) + ")");
    }
    PrimeField field(a.q);
    Codebook cb = build_codebook_for_encode(a, field);
    const CodeParams& p = codebook_params(cb);
    std::size_t alpha = codebook_alpha(cb);

    std::vector<std::uint8_t> bytes = read_file_bytes(a.file);
    std::vector<Fp> symbols = bytes_to_symbols(field, bytes, p.B);
    std::size_t stripes = symbols.size() / p.B;

    std::map<std::size_t, std::vector<Fp>> node_symbols;
    for (std::size_t node = 1; node <= p.n; ++node) {
        node_symbols[node].reserve(alpha * stripes);
    }
    for (std::size_t s = 0; s < stripes; ++s) {
        std::vector<Fp> stripe(symbols.begin() + s * p.B, symbols.begin() + (s + 1) * p.B);
        StorageCluster cluster = make_cluster(cb, stripe);
        for (auto& [node, shard] : cluster.shards) {
            auto& dest = node_symbols[node];
            dest.insert(dest.end(), shard.begin(), shard.end());
        }
    }

    fs::path dir(a.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

    std::uint32_t family_code = a.family == "mbcr" ? kMbcrFamilyCode : kMscrFamilyCode;
    for (std::size_t node = 1; node <= p.n; ++node) {
        write_shard_file(shard_path(dir, node), family_code, node, a.q, node_symbols[node]);
    }

    Manifest m;
    m.code_family = a.family;
    m.q = a.q;
    m.n = p.n;
    m.k = p.k;
    m.d = p.d;
    m.t = p.t;
    m.B = p.B;
    m.original_length_bytes = bytes.size();
    m.stripe_count = stripes;
    m.matrix_seed_or_literal = matrix_literal(cb);
    save_manifest(manifest_path(dir), m);

    out << "encoded " << bytes.size() << " bytes into " << stripes << " stripe(s) of B=" << p.B
        << "; wrote " << p.n << " shard files and manifest.json to " << dir.string() << '\n';
    return kExitOk;
}

// --- repair ---------------------------------------------------------------

int do_repair(const RepairArgs& a, std::ostream& out) {
    fs::path dir(a.dir);
    Manifest m = load_manifest(manifest_path(dir));
    Codebook cb = codebook_from_manifest(m);
    const CodeParams& p = codebook_params(cb);
    const PrimeField& field = codebook_field(cb);
    std::size_t alpha = codebook_alpha(cb);
    bool is_mbcr = std::holds_alternative<MbcrCodebook>(cb);

    if (a.failed.empty()) throw BadFailureSetError("no failed nodes given");
    std::set<std::size_t> failed;
    for (std::size_t node : a.failed) {
        if (node < 1 || node > p.n) {
            throw BadFailureSetError("failed node " + std::to_string(node) + " out of 1.." + std::to_string(p.n));
        }
        if (!failed.insert(node).second) {
            throw BadFailureSetError("failed node " + std::to_string(node) + " listed twice");
        }
    }
    if (is_mbcr && failed.size() != p.t) {
        throw ExitWith{kExitUnsupportedFailure,
                       "this mbcr code repairs exactly t=" + std::to_string(p.t) +
                           " nodes together, got " + std::to_string(failed.size())};
    }

    HelperPolicy policy = HelperPolicy::lowest_index();
    std::set<std::size_t> to_load;
    if (is_mbcr && !a.helpers.empty()) {
        for (std::size_t node : a.helpers) {
            if (node < 1 || node > p.n || failed.count(node)) {
                throw BadHelperSetError("helper " + std::to_string(node) + " is not a surviving node");
            }
            if (!fs::exists(shard_path(dir, node))) {
                throw BadHelperSetError("helper " + std::to_string(node) + " has no shard file");
            }
            to_load.insert(node);
        }
        std::map<std::size_t, std::vector<std::size_t>> sets;
        for (std::size_t node : failed) sets[node] = a.helpers;
        policy = HelperPolicy::explicit_sets(std::move(sets));
    } else if (is_mbcr) {
        for (std::size_t node = 1; node <= p.n && to_load.size() < p.d; ++node) {
            if (!failed.count(node) && fs::exists(shard_path(dir, node))) to_load.insert(node);
        }
        if (to_load.size() < p.d) {
            throw NotEnoughShardsError("repair needs d=" + std::to_string(p.d) +
                                       " surviving shard files, found " + std::to_string(to_load.size()));
        }
    } else {
        if (!a.helpers.empty()) {
            throw InvalidParamsError("mscr repair always reads every surviving node; --helpers is not accepted");
        }
        for (std::size_t node = 1; node <= p.n; ++node) {
            if (failed.count(node)) continue;
            if (!fs::exists(shard_path(dir, node))) {
                throw NotEnoughShardsError("mscr repair needs every surviving shard; node " +
                                           std::to_string(node) + " has no shard file");
            }
            to_load.insert(node);
        }
    }

    std::map<std::size_t, std::vector<Fp>> content;
    for (std::size_t node : to_load) {
        content.emplace(node, load_node_symbols(dir, m, field, alpha, node));
    }

    std::map<std::size_t, std::vector<Fp>> rebuilt;
    for (std::size_t node : failed) rebuilt[node].reserve(alpha * m.stripe_count);
    std::optional<BandwidthReport> report;
    for (std::size_t s = 0; s < m.stripe_count; ++s) {
        StorageCluster cluster{cb, {}, {}, {}};
        for (const auto& [node, syms] : content) {
            cluster.shards.emplace(node, stripe_slice(syms, s, alpha));
        }
        ScenarioResult res = run_scenario(cluster, failed, policy);
        for (std::size_t node : failed) {
            const std::vector<Fp>& got = cluster.shards.at(node);
            auto& dest = rebuilt[node];
            dest.insert(dest.end(), got.begin(), got.end());
        }
        if (!report) report = res.report; // counts are data independent: every stripe matches
    }

    std::uint32_t family_code = family_code_of(m);
    for (std::size_t node : failed) {
        write_shard_file(shard_path(dir, node), family_code, node, m.q, rebuilt[node]);
    }

    ordered_json j;
    j["family"] = m.code_family;
    j["failed"] = std::vector<std::size_t>(failed.begin(), failed.end());
    j["stripes"] = m.stripe_count;
    j["per_stripe"] = {{"total", report->total},
                       {"per_node", report->per_node},
                       {"predicted", report->predicted.to_fraction_string()},
                       {"optimal", report->optimal}};
    j["summed_total"] = report->total * m.stripe_count;
    out << j.dump() << '\n';
    return kExitOk;
}

// --- decode ---------------------------------------------------------------

int do_decode(const DecodeArgs& a, std::ostream& out) {
    fs::path dir(a.dir);
    Manifest m = load_manifest(manifest_path(dir));
    Codebook cb = codebook_from_manifest(m);
    const CodeParams& p = codebook_params(cb);
    const PrimeField& field = codebook_field(cb);
    std::size_t alpha = codebook_alpha(cb);

    std::vector<std::size_t> nodes;
    if (!a.use_nodes.empty()) {
        std::set<std::size_t> seen;
        for (std::size_t node : a.use_nodes) {
            if (node < 1 || node > p.n) {
                throw InvalidParamsError("node " + std::to_string(node) + " out of 1.." + std::to_string(p.n));
            }
            if (!seen.insert(node).second) {
                throw InvalidParamsError("node " + std::to_string(node) + " listed twice");
            }
            nodes.push_back(node);
        }
        for (std::size_t node : nodes) {
            if (!fs::exists(shard_path(dir, node))) {
                throw NotEnoughShardsError("shard file for node " + std::to_string(node) + " is missing");
            }
        }
    } else {
        for (std::size_t node = 1; node <= p.n && nodes.size() < p.k; ++node) {
            if (fs::exists(shard_path(dir, node))) nodes.push_back(node);
        }
    }
    if (nodes.size() > p.k) nodes.resize(p.k); // decoding reads the first k listed
    if (nodes.size() < p.k) {
        throw NotEnoughShardsError("decoding needs k=" + std::to_string(p.k) + " shards, got " +
                                   std::to_string(nodes.size()));
    }

    std::map<std::size_t, std::vector<Fp>> content;
    for (std::size_t node : nodes) {
        content.emplace(node, load_node_symbols(dir, m, field, alpha, node));
    }

    std::vector<Fp> source;
    source.reserve(p.B * m.stripe_count);
    for (std::size_t s = 0; s < m.stripe_count; ++s) {
        std::vector<Fp> stripe = decode_stripe(cb, content, nodes, s, alpha);
        source.insert(source.end(), stripe.begin(), stripe.end());
    }

    std::vector<std::uint8_t> bytes = symbols_to_bytes(source, m.original_length_bytes);
    write_file_bytes(a.out, bytes);
    out << "decoded " << bytes.size() << " bytes to " << a.out << " using nodes " << join(nodes) << '\n';
    return kExitOk;
}

// --- verify ---------------------------------------------------------------

// Lowest-index helper choice: the first d survivors, shared by every new node.
std::map<std::size_t, std::vector<std::size_t>> lowest_index_helpers(const CodeParams& p,
                                                                     const std::set<std::size_t>& failed) {
    std::vector<std::size_t> helpers;
    for (std::size_t node = 1; node <= p.n && helpers.size() < p.d; ++node) {
        if (!failed.count(node)) helpers.push_back(node);
    }
    std::map<std::size_t, std::vector<std::size_t>> sets;
    for (std::size_t node : failed) sets[node] = helpers;
    return sets;
}

std::vector<std::set<std::size_t>> audit_patterns(const Codebook& cb) {
    const CodeParams& p = codebook_params(cb);
    std::vector<std::set<std::size_t>> patterns;
    if (std::holds_alternative<MbcrCodebook>(cb)) {
        for_each_combination(p.n, p.t, [&](std::span<const std::size_t> sel) {
            std::set<std::size_t> failed;
            for (std::size_t i : sel) failed.insert(i + 1);
            patterns.push_back(std::move(failed));
            return true;
        });
    } else {
        std::size_t k = p.k;
        for (std::size_t offset : {std::size_t{0}, k}) { // systematic block, then parity block
            for_each_combination(k, p.t, [&](std::span<const std::size_t> sel) {
                std::set<std::size_t> failed;
                for (std::size_t i : sel) failed.insert(offset + i + 1);
                patterns.push_back(std::move(failed));
                return true;
            });
        }
    }
    return patterns;
}

int do_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    fs::path dir(a.dir);
    Manifest m = load_manifest(manifest_path(dir)); // missing/corrupt manifest is an I/O error

    std::size_t failures = 0;
    auto record = [&](bool ok, const std::string& label) {
        out << (ok ? "ok: " : "fail: ") << label << '\n';
        if (!ok) ++failures;
    };
    auto finish = [&]() {
        if (failures == 0) {
            out << "verify: PASS\n";
            return kExitOk;
        }
        return fail(err, kExitVerifyFailed,
                    "verification failed: " + std::to_string(failures) + " check(s) failed");
    };

    std::optional<Codebook> cb;
    try {
        cb = codebook_from_manifest(m);
        record(true, "manifest describes a valid " + m.code_family + " code (q=" + std::to_string(m.q) +
                         ", n=" + std::to_string(m.n) + ", k=" + std::to_string(m.k) +
                         ", d=" + std::to_string(m.d) + ", t=" + std::to_string(m.t) +
                         ", B=" + std::to_string(m.B) + ")");
    } catch (const Error& e) {
        record(false, std::string("manifest rejected: ") + e.what());
    }
    if (!cb) return finish();

    const CodeParams& p = codebook_params(*cb);
    const PrimeField& field = codebook_field(*cb);
    std::size_t alpha = codebook_alpha(*cb);

    EncodingMatrix em = extract_encoding_matrix(*cb);
    ReconstructionReport rec = verify_reconstruction(em, p.k);
    std::string mode = rec.exhaustive ? "exhaustive" : "sampled";
    if (rec.all_ok) {
        record(true, "reconstruction: " + std::to_string(rec.checked) + "/" + std::to_string(rec.checked) +
                         " k-subsets recover the file (" + mode + ")");
    } else {
        record(false, "reconstruction: " + std::to_string(rec.failing_subsets.size()) + " of " +
                          std::to_string(rec.checked) + " k-subsets cannot recover the file (" + mode +
                          "); first bad subset {" + join(rec.failing_subsets.front()) + "}");
    }

    std::map<std::size_t, std::vector<Fp>> content;
    std::vector<std::string> shard_problems;
    for (std::size_t node = 1; node <= p.n; ++node) {
        try {
            content.emplace(node, load_node_symbols(dir, m, field, alpha, node));
        } catch (const Error& e) {
            shard_problems.push_back(e.what());
        }
    }
    if (shard_problems.empty()) {
        record(true, "shard files: " + std::to_string(p.n) + "/" + std::to_string(p.n) +
                         " present, well-formed and consistent with the manifest");
    } else {
        record(false, "shard files: " + std::to_string(content.size()) + "/" + std::to_string(p.n) +
                          " usable; first problem: " + shard_problems.front());
    }

    if (content.size() >= p.k) {
        try {
            std::vector<std::size_t> decode_nodes;
            for (const auto& [node, syms] : content) {
                if (decode_nodes.size() < p.k) decode_nodes.push_back(node);
            }
            bool all_match = true;
            std::string first_bad;
            for (std::size_t s = 0; s < m.stripe_count && all_match; ++s) {
                std::vector<Fp> stripe_source = decode_stripe(*cb, content, decode_nodes, s, alpha);
                StorageCluster cluster = make_cluster(*cb, stripe_source);
                for (const auto& [node, syms] : content) {
                    if (stripe_slice(syms, s, alpha) != cluster.shards.at(node)) {
                        all_match = false;
                        first_bad = "node " + std::to_string(node) + ", stripe " + std::to_string(s);
                        break;
                    }
                }
            }
            if (all_match) {
                record(true, "stored symbols match a fresh re-encoding on all " +
                                 std::to_string(m.stripe_count) + " stripe(s)");
            } else {
                record(false, "stored symbols diverge from a fresh re-encoding at " + first_bad);
            }
        } catch (const Error& e) {
            record(false, std::string("content check failed: ") + e.what());
        }
    } else {
        record(false, "content check skipped: fewer than k usable shards");
    }

    if (a.repair_audit) {
        if (content.size() == p.n) {
            std::map<std::size_t, std::vector<Fp>> stripe0;
            for (const auto& [node, syms] : content) stripe0.emplace(node, stripe_slice(syms, 0, alpha));

            std::vector<std::set<std::size_t>> patterns = audit_patterns(*cb);
            std::size_t pass = 0;
            std::string first_bad;
            for (const std::set<std::size_t>& failed : patterns) {
                bool ok = true;
                std::string reason;
                try {
                    StorageCluster cluster{*cb, stripe0, {}, {}};
                    ScenarioResult res = run_scenario(cluster, failed);
                    if (!res.report.optimal) {
                        ok = false;
                        reason = "bandwidth " + std::to_string(res.report.per_node) + " != predicted " +
                                 res.report.predicted.to_fraction_string();
                    }
                    for (std::size_t node : failed) {
                        if (cluster.shards.at(node) != stripe0.at(node)) {
                            ok = false;
                            reason = "node " + std::to_string(node) + " rebuilt incorrectly";
                        }
                    }
                    TranscriptReport tr;
                    if (const auto* mbcr = std::get_if<MbcrCodebook>(&*cb)) {
                        annotate_mbcr_transcript(*mbcr, failed, lowest_index_helpers(p, failed), res.transcript);
                        tr = verify_transcript(res.transcript, em, failed, 2, 1);
                    } else {
                        annotate_mscr_transcript(std::get<MscrCodebook>(*cb), failed, res.transcript);
                        tr = verify_transcript(res.transcript, em, failed, 1, 1);
                    }
                    if (!tr.ok) {
                        ok = false;
                        reason = tr.violations.empty() ? "transcript model violated" : tr.violations.front();
                    }
                } catch (const Error& e) {
                    ok = false;
                    reason = e.what();
                }
                if (ok) {
                    ++pass;
                } else if (first_bad.empty()) {
                    first_bad = "{" + join(failed) + "}: " + reason;
                }
            }
            if (pass == patterns.size()) {
                record(true, "repair audit: " + std::to_string(pass) + "/" + std::to_string(patterns.size()) +
                                 " failure patterns rebuild exactly with optimal bandwidth and a verified transcript");
            } else {
                record(false, "repair audit: " + std::to_string(pass) + "/" + std::to_string(patterns.size()) +
                                  " failure patterns pass; first failure " + first_bad);
            }
        } else {
            record(false, "repair audit skipped: not every shard file is usable");
        }
    }

    return finish();
}

} // namespace

int cmd_params(const ParamsArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return do_params(args, out); });
}

int cmd_encode(const EncodeArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return do_encode(args, out); });
}

int cmd_repair(const RepairArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return do_repair(args, out); });
}

int cmd_decode(const DecodeArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return do_decode(args, out); });
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] { return do_verify(args, out, err); });
}

} // namespace crgn::cli
