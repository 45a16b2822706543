#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <concepts>
#include <iosfwd>
#include <string>

#include "crgn/errors.hpp"

namespace crgn {

// Exact rational number, normalized (gcd 1, positive denominator).
class Rational {
  public:
    using Int = boost::multiprecision::cpp_int;

    Rational() : num_(0), den_(1) {}
    template <std::integral T>
    Rational(T v) : num_(v), den_(1) {}
    Rational(Int v) : num_(std::move(v)), den_(1) {}
    Rational(Int num, Int den);

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);
    Rational operator-() const;

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    // "9/35", or "12" when the denominator is 1.
    std::string to_fraction_string() const;
    // Decimal with at most `sig_digits` significant digits, trailing zeros stripped.
    std::string to_decimal_string(int sig_digits = 6) const;

  private:
    void normalize();

    Int num_;
    Int den_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace crgn
