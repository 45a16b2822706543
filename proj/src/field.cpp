#include "crgn/field.hpp"

#include <ostream>
#include <string>

namespace crgn {

namespace {

bool is_prime(std::uint32_t q) {
    if (q < 2) return false;
    if (q % 2 == 0) return q == 2;
    for (std::uint64_t p = 3; p * p <= q; p += 2) {
        if (q % p == 0) return false;
    }
    return true;
}

void require_same_field(const Fp& a, const Fp& b) {
    if (a.modulus() != b.modulus()) {
        throw FieldMismatchError("element from F_" + std::to_string(a.modulus()) +
                                 " combined with element from F_" + std::to_string(b.modulus()));
    }
}

} // namespace

PrimeField::PrimeField(std::uint32_t q) : q_(q) {
    if (!is_prime(q)) {
        throw NotPrimeError("modulus " + std::to_string(q) + " is not prime");
    }
}

Fp PrimeField::element(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(q_);
    if (r < 0) r += q_;
    return Fp(static_cast<std::uint32_t>(r), q_);
}

Fp PrimeField::zero() const { return Fp(0u, q_); }

Fp PrimeField::one() const { return Fp(1u % q_, q_); }

std::vector<Fp> PrimeField::elements(const std::vector<std::int64_t>& vs) const {
    std::vector<Fp> out;
    out.reserve(vs.size());
    for (std::int64_t v : vs) out.push_back(element(v));
    return out;
}

Fp::Fp(std::uint32_t value, const PrimeField& field) : v_(value % field.modulus()), q_(field.modulus()) {}

Fp Fp::operator-() const { return Fp(v_ == 0 ? 0u : q_ - v_, q_); }

Fp Fp::inv() const {
    if (v_ == 0) throw DivisionByZeroError("inverse of zero in F_" + std::to_string(q_));
    return Fp(mod_inverse(v_, q_), q_);
}

Fp& Fp::operator+=(const Fp& o) {
    require_same_field(*this, o);
    std::uint64_t s = static_cast<std::uint64_t>(v_) + o.v_;
    if (s >= q_) s -= q_;
    v_ = static_cast<std::uint32_t>(s);
    return *this;
}

Fp& Fp::operator-=(const Fp& o) {
    require_same_field(*this, o);
    v_ = (v_ >= o.v_) ? v_ - o.v_ : static_cast<std::uint32_t>(v_ + static_cast<std::uint64_t>(q_) - o.v_);
    return *this;
}

Fp& Fp::operator*=(const Fp& o) {
    require_same_field(*this, o);
    v_ = static_cast<std::uint32_t>((static_cast<std::uint64_t>(v_) * o.v_) % q_);
    return *this;
}

Fp& Fp::operator/=(const Fp& o) {
    require_same_field(*this, o);
    return *this *= o.inv();
}

std::ostream& operator<<(std::ostream& os, const Fp& x) { return os << x.value(); }

Fp dot(const std::vector<Fp>& a, const std::vector<Fp>& b) {
    if (a.size() != b.size() || a.empty()) {
        throw DimensionMismatchError("dot: vector lengths " + std::to_string(a.size()) + " vs " +
                                     std::to_string(b.size()));
    }
    Fp acc = a.front().field().zero();
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

std::uint32_t mod_inverse(std::uint32_t v, std::uint32_t q) {
    // Extended Euclid on (v, q); q prime and v nonzero, so gcd is 1.
    std::int64_t r0 = v, r1 = q, s0 = 1, s1 = 0;
    while (r1 != 0) {
        std::int64_t k = r0 / r1;
        std::int64_t r2 = r0 - k * r1;
        std::int64_t s2 = s0 - k * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    std::int64_t inv = s0 % static_cast<std::int64_t>(q);
    if (inv < 0) inv += q;
    return static_cast<std::uint32_t>(inv);
}

} // namespace crgn
