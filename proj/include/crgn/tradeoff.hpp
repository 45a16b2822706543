#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crgn/rational.hpp"

namespace crgn {

// Parameters of a cooperative repair code: a file of B symbols is spread over
// n nodes so that any k recover it; repairs contact d helpers and rebuild t
// nodes at once.
struct CodeParams {
    std::uint64_t B;
    std::uint64_t n;
    std::uint64_t k;
    std::uint64_t d;
    std::uint64_t t;

    CodeParams(std::uint64_t B, std::uint64_t n, std::uint64_t k, std::uint64_t d, std::uint64_t t);
};

// One point on the storage-bandwidth plane. Per node: alpha symbols stored,
// gamma = d*beta1 + (t-1)*beta2 symbols downloaded during a repair.
struct OperatingPoint {
    Rational alpha;
    Rational gamma;
    Rational beta1;
    Rational beta2;
    std::uint64_t d;
    std::uint64_t t;
    std::string label;
};

// True iff a file of B symbols fits within the single-failure repair capacity:
// B <= sum_{i=0}^{k-1} min(alpha, (d-i)*beta).
bool feasible_single(std::uint64_t B, std::uint64_t k, std::uint64_t d, const Rational& alpha, const Rational& beta);

// Smallest alpha for which feasible_single holds at bandwidth gamma = d*beta.
Rational min_alpha_single(std::uint64_t B, std::uint64_t k, std::uint64_t d, const Rational& gamma);

OperatingPoint msr_point(std::uint64_t B, std::uint64_t k, std::uint64_t d);
OperatingPoint mbr_point(std::uint64_t B, std::uint64_t k, std::uint64_t d);
OperatingPoint mscr_point(std::uint64_t B, std::uint64_t k, std::uint64_t d, std::uint64_t t);
OperatingPoint mbcr_point(std::uint64_t B, std::uint64_t k, std::uint64_t d, std::uint64_t t);

struct TradeoffRow {
    Rational alpha;
    Rational gamma;
    std::string label;
};

struct TradeoffTable {
    std::vector<TradeoffRow> rows;
    // False when only the extreme points are known (t >= 2): the interior of
    // the cooperative curve is not computed by this library.
    bool interior_available;
};

// For t = 1: `samples` rows sweeping gamma from the MSR to the MBR endpoint,
// each with the minimal feasible alpha. For t >= 2: the MSCR and MBCR
// endpoints only.
TradeoffTable tradeoff_table(std::uint64_t B, std::uint64_t k, std::uint64_t d, std::uint64_t t,
                             std::uint64_t samples);

std::string csv_header();
std::string csv_row(const Rational& alpha, const Rational& gamma, const std::string& label);

} // namespace crgn
