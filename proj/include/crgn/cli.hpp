#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace crgn::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitParams = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitUnsupportedFailure = 4;
inline constexpr int kExitInsufficientShards = 5;
inline constexpr int kExitVerifyFailed = 6;

struct ParamsArgs {
    std::uint64_t B = 0;
    std::uint64_t k = 0;
    std::uint64_t d = 0;
    std::uint64_t t = 0;
    std::uint64_t samples = 20;
};

struct EncodeArgs {
    std::string file;
    std::string family;       // "mbcr" | "mscr"
    std::uint32_t q = 257;
    std::size_t n = 0;        // 0 = not given (derived for mscr)
    std::size_t k = 0;
    std::size_t d = 0;        // 0 = not given (derived for mscr)
    std::size_t t = 0;
    std::string out_dir;
};

struct RepairArgs {
    std::string dir;
    std::vector<std::size_t> failed;
    std::vector<std::size_t> helpers; // optional; one set shared by all new nodes (mbcr only)
};

struct DecodeArgs {
    std::string dir;
    std::vector<std::size_t> use_nodes; // optional; decode reads the first k listed
    std::string out;
};

struct VerifyArgs {
    std::string dir;
    bool repair_audit = false;
};

// Each command prints its report to `out`, prints a single `error:` line to
// `err` on failure, and returns the exit code; nothing throws past these.
int cmd_params(const ParamsArgs& args, std::ostream& out, std::ostream& err);
int cmd_encode(const EncodeArgs& args, std::ostream& out, std::ostream& err);
int cmd_repair(const RepairArgs& args, std::ostream& out, std::ostream& err);
int cmd_decode(const DecodeArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

} // namespace crgn::cli
