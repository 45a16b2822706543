#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "crgn/errors.hpp"

namespace crgn {

class Fp;

/// Prime field context F_q. Primality is verified at construction by trial
/// division; all element values are canonical residues in [0, q).
class PrimeField {
  public:
    explicit PrimeField(std::uint32_t q);

    std::uint32_t modulus() const { return q_; }

    /// Maps an integer (of either sign) to its residue in [0, q).
    Fp element(std::int64_t v) const;

    Fp zero() const;
    Fp one() const;

    std::vector<Fp> elements(const std::vector<std::int64_t>& vs) const;

    friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.q_ == b.q_; }
    friend bool operator!=(const PrimeField& a, const PrimeField& b) { return a.q_ != b.q_; }

  private:
    std::uint32_t q_;
};

/// Element of a prime field: canonical value plus the modulus it lives under.
/// Arithmetic between elements of different fields throws FieldMismatchError.
class Fp {
  public:
    Fp(std::uint32_t value, const PrimeField& field);

    std::uint32_t value() const { return v_; }
    std::uint32_t modulus() const { return q_; }
    PrimeField field() const { return PrimeField(q_); }

    bool is_zero() const { return v_ == 0; }

    Fp operator-() const;
    Fp inv() const; // throws DivisionByZeroError on zero

    Fp& operator+=(const Fp& o);
    Fp& operator-=(const Fp& o);
    Fp& operator*=(const Fp& o);
    Fp& operator/=(const Fp& o);

    friend Fp operator+(Fp a, const Fp& b) { return a += b; }
    friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
    friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
    friend Fp operator/(Fp a, const Fp& b) { return a /= b; }

    friend bool operator==(const Fp& a, const Fp& b) { return a.q_ == b.q_ && a.v_ == b.v_; }
    friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  private:
    friend class PrimeField;
    Fp(std::uint32_t v, std::uint32_t q) : v_(v), q_(q) {}

    std::uint32_t v_;
    std::uint32_t q_;
};

std::ostream& operator<<(std::ostream& os, const Fp& x);

/// Inner product of two equally long element vectors.
Fp dot(const std::vector<Fp>& a, const std::vector<Fp>& b);

/// Modular inverse of v in [1, q): v * inv = 1 (mod q).
std::uint32_t mod_inverse(std::uint32_t v, std::uint32_t q);

} // namespace crgn
