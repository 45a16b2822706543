#include <iostream>

#include <CLI11.hpp>

#include "crgn/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"finite-field cooperative regenerating codes: encode files into shards, "
                 "repair failed nodes, decode, verify"};
    app.require_subcommand(1);

    crgn::cli::ParamsArgs params_args;
    CLI::App* params = app.add_subcommand("params", "print storage/bandwidth operating points as CSV");
    params->add_option("-B", params_args.B, "file size in symbols")->required();
    params->add_option("-k", params_args.k, "nodes needed to reconstruct")->required();
    params->add_option("-d", params_args.d, "helpers contacted per repair")->required();
    params->add_option("-t", params_args.t, "nodes repaired together")->required();
    params->add_option("--samples", params_args.samples, "curve points printed for t=1 (default 20)");

    crgn::cli::EncodeArgs encode_args;
    CLI::App* encode = app.add_subcommand("encode", "encode a file into per-node shard files plus manifest.json");
    encode->add_option("file", encode_args.file, "input file")->required();
    encode->add_option("--family", encode_args.family, "code family: mbcr or mscr")->required();
    encode->add_option("-q", encode_args.q, "prime field size, at least 257 (default 257)");
    encode->add_option("-n", encode_args.n, "total nodes (mbcr; mscr derives n = 2k)");
    encode->add_option("-k", encode_args.k, "nodes needed to reconstruct");
    encode->add_option("-d", encode_args.d, "helpers per repair (mbcr; mscr derives d = 2k - t)");
    encode->add_option("-t", encode_args.t, "nodes repaired together");
    encode->add_option("--out", encode_args.out_dir, "output directory")->required();

    crgn::cli::RepairArgs repair_args;
    CLI::App* repair = app.add_subcommand("repair", "rebuild failed nodes' shard files and report bandwidth");
    repair->add_option("dir", repair_args.dir, "encoded directory")->required();
    repair->add_option("--failed", repair_args.failed, "failed node indices, e.g. 5,6,7")
        ->required()
        ->delimiter(',');
    repair->add_option("--helpers", repair_args.helpers, "helper node indices (mbcr only; default: lowest index)")
        ->delimiter(',');

    crgn::cli::DecodeArgs decode_args;
    CLI::App* decode = app.add_subcommand("decode", "reconstruct the original file from any k shards");
    decode->add_option("dir", decode_args.dir, "encoded directory")->required();
    decode->add_option("--out", decode_args.out, "output file")->required();
    decode->add_option("--use-nodes", decode_args.use_nodes, "node indices to read (default: first k present)")
        ->delimiter(',');

    crgn::cli::VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify", "check reconstruction, shard integrity and, optionally, repairs");
    verify->add_option("dir", verify_args.dir, "encoded directory")->required();
    verify->add_flag("--repair-audit", verify_args.repair_audit,
                     "also sweep every failure pattern and audit the repair transcripts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help and friends
        std::cerr << "error: " << e.what() << '\n';
        return crgn::cli::kExitParams;
    }

    if (params->parsed()) return crgn::cli::cmd_params(params_args, std::cout, std::cerr);
    if (encode->parsed()) return crgn::cli::cmd_encode(encode_args, std::cout, std::cerr);
    if (repair->parsed()) return crgn::cli::cmd_repair(repair_args, std::cout, std::cerr);
    if (decode->parsed()) return crgn::cli::cmd_decode(decode_args, std::cout, std::cerr);
    if (verify->parsed()) return crgn::cli::cmd_verify(verify_args, std::cout, std::cerr);
    return crgn::cli::kExitParams; // unreachable: a subcommand is required
}
