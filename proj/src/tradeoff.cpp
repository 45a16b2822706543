#include "crgn/tradeoff.hpp"

#include <string>

#include "crgn/errors.hpp"

namespace crgn {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidParamsError(msg);
}

} // namespace

CodeParams::CodeParams(std::uint64_t B_, std::uint64_t n_, std::uint64_t k_, std::uint64_t d_, std::uint64_t t_)
    : B(B_), n(n_), k(k_), d(d_), t(t_) {
    require(B >= 1, "file size must be positive");
    require(t >= 1, "t must be at least 1");
    require(k >= 1, "k must be at least 1");
    require(k <= d, "need k <= d");
    require(d + t <= n, "need d <= n - t");
}

bool feasible_single(std::uint64_t B, std::uint64_t k, std::uint64_t d, const Rational& alpha, const Rational& beta) {
    if (B == 0) return true;
    require(k >= 1, "k must be at least 1");
    require(k <= d + 1, "need k <= d + 1");
    require(!alpha.is_negative() && !beta.is_negative(), "alpha and beta must be nonnegative");
    Rational sum = 0;
    for (std::uint64_t i = 0; i < k; ++i) {
        Rational cap = Rational(d - i) * beta;
        sum += (alpha < cap) ? alpha : cap;
    }
    return Rational(Rational::Int(B)) <= sum;
}

Rational min_alpha_single(std::uint64_t B, std::uint64_t k, std::uint64_t d, const Rational& gamma) {
    require(k >= 1, "k must be at least 1");
    require(k <= d + 1, "need k <= d + 1");
    require(!gamma.is_negative(), "gamma must be nonnegative");
    Rational beta = gamma / Rational(d);
    Rational file{Rational::Int(B)};
    // On the segment where the first j summands are clipped at alpha, the
    // capacity is j*alpha + beta * sum_{i=j}^{k-1} (d-i); solve for alpha and
    // keep the candidate that lands inside its own segment.
    for (std::uint64_t j = k; j >= 1; --j) {
        std::uint64_t tail = 0;
        for (std::uint64_t i = j; i < k; ++i) tail += d - i;
        Rational alpha = (file - beta * Rational(tail)) / Rational(j);
        if (alpha.is_negative()) continue;
        if (alpha > Rational(d - j + 1) * beta) continue;
        if (j < k && alpha < Rational(d - j) * beta) continue;
        return alpha;
    }
    throw InvalidParamsError("no storage level is feasible at gamma = " + gamma.to_fraction_string());
}

OperatingPoint msr_point(std::uint64_t B, std::uint64_t k, std::uint64_t d) {
    require(B >= 1, "file size must be positive");
    require(k >= 1, "k must be at least 1");
    require(d >= k, "need d >= k");
    OperatingPoint p;
    p.alpha = Rational(Rational::Int(B), Rational::Int(k));
    p.beta1 = Rational(Rational::Int(B), Rational::Int(k) * (d + 1 - k));
    p.beta2 = 0;
    p.gamma = Rational(d) * p.beta1;
    p.d = d;
    p.t = 1;
    p.label = "MSR";
    return p;
}

OperatingPoint mbr_point(std::uint64_t B, std::uint64_t k, std::uint64_t d) {
    require(B >= 1, "file size must be positive");
    require(k >= 1, "k must be at least 1");
    require(d >= k, "need d >= k");
    OperatingPoint p;
    p.beta1 = Rational(2 * Rational::Int(B), Rational::Int(k) * (2 * d + 1 - k));
    p.beta2 = 0;
    p.gamma = Rational(d) * p.beta1;
    p.alpha = p.gamma;
    p.d = d;
    p.t = 1;
    p.label = "MBR";
    return p;
}

OperatingPoint mscr_point(std::uint64_t B, std::uint64_t k, std::uint64_t d, std::uint64_t t) {
    require(B >= 1, "file size must be positive");
    require(t >= 1, "t must be at least 1");
    require(k >= 1, "k must be at least 1");
    require(d >= k, "need d >= k");
    if (t == 1) return msr_point(B, k, d);
    OperatingPoint p;
    p.alpha = Rational(Rational::Int(B), Rational::Int(k));
    p.beta1 = Rational(Rational::Int(B), Rational::Int(k) * (d + t - k));
    p.beta2 = p.beta1;
    p.gamma = Rational(d) * p.beta1 + Rational(t - 1) * p.beta2;
    p.d = d;
    p.t = t;
    p.label = "MSCR";
    return p;
}

OperatingPoint mbcr_point(std::uint64_t B, std::uint64_t k, std::uint64_t d, std::uint64_t t) {
    require(B >= 1, "file size must be positive");
    require(t >= 1, "t must be at least 1");
    require(k >= 1, "k must be at least 1");
    require(d >= k, "need d >= k");
    if (t == 1) return mbr_point(B, k, d);
    OperatingPoint p;
    p.beta2 = Rational(Rational::Int(B), Rational::Int(k) * (2 * d + t - k));
    p.beta1 = Rational(2) * p.beta2;
    p.gamma = Rational(d) * p.beta1 + Rational(t - 1) * p.beta2;
    p.alpha = p.gamma;
    p.d = d;
    p.t = t;
    p.label = "MBCR";
    return p;
}

TradeoffTable tradeoff_table(std::uint64_t B, std::uint64_t k, std::uint64_t d, std::uint64_t t,
                             std::uint64_t samples) {
    require(samples >= 2, "need at least 2 samples");
    require(B >= 1, "file size must be positive");
    require(t >= 1, "t must be at least 1");
    require(k >= 1, "k must be at least 1");
    require(d >= k, "need d >= k");

    TradeoffTable table;
    if (t == 1) {
        table.interior_available = true;
        OperatingPoint lo = msr_point(B, k, d);
        OperatingPoint hi = mbr_point(B, k, d);
        for (std::uint64_t i = 0; i < samples; ++i) {
            Rational frac(Rational::Int(i), Rational::Int(samples - 1));
            Rational gamma = lo.gamma + (hi.gamma - lo.gamma) * frac;
            TradeoffRow row;
            row.gamma = gamma;
            row.alpha = min_alpha_single(B, k, d, gamma);
            row.label = (i == 0) ? "MSR" : (i + 1 == samples) ? "MBR" : "single";
            table.rows.push_back(std::move(row));
        }
    } else {
        table.interior_available = false;
        OperatingPoint ms = mscr_point(B, k, d, t);
        OperatingPoint mb = mbcr_point(B, k, d, t);
        table.rows.push_back({ms.alpha, ms.gamma, ms.label});
        table.rows.push_back({mb.alpha, mb.gamma, mb.label});
    }
    return table;
}

std::string csv_header() { return "alpha_num,alpha_den,gamma_num,gamma_den,alpha_dec,gamma_dec,label"; }

std::string csv_row(const Rational& alpha, const Rational& gamma, const std::string& label) {
    return alpha.num().str() + "," + alpha.den().str() + "," + gamma.num().str() + "," + gamma.den().str() + "," +
           alpha.to_decimal_string() + "," + gamma.to_decimal_string() + "," + label;
}

} // namespace crgn
