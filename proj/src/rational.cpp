#include "crgn/rational.hpp"

#include <ostream>
#include <utility>

namespace crgn {

using Int = Rational::Int;

Rational::Rational(Int num, Int den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw DivisionByZeroError("rational with zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    Int g = boost::multiprecision::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
    if (num_ == 0) den_ = 1;
}

Rational& Rational::operator+=(const Rational& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw DivisionByZeroError("rational division by zero");
    num_ *= o.den_;
    den_ *= o.num_;
    normalize();
    return *this;
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    Int lhs = a.num_ * b.den_;
    Int rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string Rational::to_fraction_string() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
}

std::string Rational::to_decimal_string(int sig_digits) const {
    if (sig_digits < 1) sig_digits = 1;
    if (num_ == 0) return "0";
    Int an = num_ < 0 ? Int(-num_) : num_;

    // decimal exponent e: 10^e <= |value| < 10^(e+1)
    int e = 0;
    if (an >= den_) {
        Int ip = an / den_;
        e = static_cast<int>(ip.str().size()) - 1;
    } else {
        Int scaled = an;
        while (scaled * 10 < den_) {
            scaled *= 10;
            --e;
        }
        --e;
    }

    // scale so the rounded value has exactly sig_digits digits
    int shift = sig_digits - 1 - e;
    Int num_scaled = an;
    Int den_scaled = den_;
    if (shift >= 0) {
        num_scaled *= boost::multiprecision::pow(Int(10), static_cast<unsigned>(shift));
    } else {
        den_scaled *= boost::multiprecision::pow(Int(10), static_cast<unsigned>(-shift));
    }
    Int rounded = (2 * num_scaled + den_scaled) / (2 * den_scaled);
    Int limit = boost::multiprecision::pow(Int(10), static_cast<unsigned>(sig_digits));
    if (rounded >= limit) {
        rounded /= 10;
        ++e;
    }

    std::string digits = rounded.str();
    std::string out = num_ < 0 ? "-" : "";
    if (e >= sig_digits - 1) {
        out += digits + std::string(static_cast<std::size_t>(e - sig_digits + 1), '0');
    } else if (e >= 0) {
        std::string frac = digits.substr(static_cast<std::size_t>(e) + 1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        out += digits.substr(0, static_cast<std::size_t>(e) + 1);
        if (!frac.empty()) out += "." + frac;
    } else {
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        out += "0." + std::string(static_cast<std::size_t>(-e) - 1, '0') + digits;
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_fraction_string(); }

} // namespace crgn
