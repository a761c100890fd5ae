#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <string>

#include "polyqt/common.hpp"

namespace polyqt {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

enum class FieldKind { PrimeField, Rationals };

// The ambient field: GF(p) for a machine-word prime p, or the rationals.
class FieldSpec {
 public:
  static FieldSpec gf(std::uint64_t p) { return FieldSpec(FieldKind::PrimeField, p); }
  static FieldSpec rationals() { return FieldSpec(FieldKind::Rationals, 0); }

  FieldKind kind() const { return kind_; }
  std::uint64_t p() const { return p_; }
  bool is_prime_field() const { return kind_ == FieldKind::PrimeField; }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_;
  }
  friend bool operator!=(const FieldSpec& a, const FieldSpec& b) { return !(a == b); }

 private:
  FieldSpec(FieldKind k, std::uint64_t p) : kind_(k), p_(p) {
    if (k == FieldKind::PrimeField) {
      check(p >= 2 && p < (1ull << 31), Errc::Unsupported, "p must satisfy 2 <= p < 2^31");
      check(is_prime(p), Errc::Unsupported, "p = " + std::to_string(p) + " is not prime");
    }
  }

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

  FieldKind kind_;
  std::uint64_t p_;
};

// Canonical field element: residue in [0, p) or reduced fraction.
class FieldElement {
 public:
  FieldElement() : spec_(FieldSpec::gf(2)), res_(0) {}

  static FieldElement from_residue(const FieldSpec& s, std::uint64_t r) {
    check(s.is_prime_field(), Errc::FieldMismatch, "residue element needs a prime field");
    FieldElement e(s);
    e.res_ = r % s.p();
    return e;
  }
  static FieldElement from_rational(const BigRat& q) {
    FieldElement e(FieldSpec::rationals());
    e.rat_ = q;
    return e;
  }
  static FieldElement from_fraction(BigInt num, BigInt den) {
    check(den != 0, Errc::DivisionByZero, "zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return from_rational(BigRat(num, den));
  }
  // The canonical image of a signed integer.
  static FieldElement from_int(const FieldSpec& s, long long v) {
    if (s.is_prime_field()) {
      long long m = static_cast<long long>(s.p());
      long long r = v % m;
      if (r < 0) r += m;
      return from_residue(s, static_cast<std::uint64_t>(r));
    }
    return from_rational(BigRat(v));
  }
  static FieldElement zero(const FieldSpec& s) { return from_int(s, 0); }
  static FieldElement one(const FieldSpec& s) { return from_int(s, 1); }

  const FieldSpec& spec() const { return spec_; }
  bool is_zero() const { return spec_.is_prime_field() ? res_ == 0 : rat_.is_zero(); }
  bool is_one() const { return spec_.is_prime_field() ? res_ == 1 : rat_ == 1; }

  std::uint64_t residue() const {
    check(spec_.is_prime_field(), Errc::FieldMismatch, "not a prime-field element");
    return res_;
  }
  const BigRat& rational() const {
    check(!spec_.is_prime_field(), Errc::FieldMismatch, "not a rational element");
    return rat_;
  }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    a.same_field(b);
    if (a.spec_.is_prime_field())
      return from_residue(a.spec_, (a.res_ + b.res_) % a.spec_.p());
    return from_rational(a.rat_ + b.rat_);
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    a.same_field(b);
    if (a.spec_.is_prime_field()) {
      std::uint64_t p = a.spec_.p();
      return from_residue(a.spec_, (a.res_ + p - b.res_) % p);
    }
    return from_rational(a.rat_ - b.rat_);
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    a.same_field(b);
    if (a.spec_.is_prime_field())
      return from_residue(a.spec_, (a.res_ * b.res_) % a.spec_.p());  // p < 2^31, no overflow
    return from_rational(a.rat_ * b.rat_);
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inv(); }
  FieldElement operator-() const {
    if (spec_.is_prime_field()) return from_residue(spec_, res_ == 0 ? 0 : spec_.p() - res_);
    return from_rational(-rat_);
  }

  FieldElement inv() const {
    check(!is_zero(), Errc::DivisionByZero, "inverse of zero");
    if (!spec_.is_prime_field()) return from_rational(1 / rat_);
    // extended Euclid on (res, p)
    long long t = 0, nt = 1;
    long long r = static_cast<long long>(spec_.p()), nr = static_cast<long long>(res_);
    while (nr != 0) {
      long long q = r / nr;
      t -= q * nt; std::swap(t, nt);
      r -= q * nr; std::swap(r, nr);
    }
    if (t < 0) t += static_cast<long long>(spec_.p());
    return from_residue(spec_, static_cast<std::uint64_t>(t));
  }

  FieldElement pow(long long e) const {
    if (e < 0) return inv().pow(-e);
    FieldElement acc = one(spec_), base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    if (a.spec_ != b.spec_) return false;
    return a.spec_.is_prime_field() ? a.res_ == b.res_ : a.rat_ == b.rat_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  // Total order used only for deterministic tie-breaking.
  friend bool operator<(const FieldElement& a, const FieldElement& b) {
    a.same_field(b);
    return a.spec_.is_prime_field() ? a.res_ < b.res_ : a.rat_ < b.rat_;
  }

  std::string str() const {
    if (spec_.is_prime_field()) return std::to_string(res_);
    const BigInt num = boost::multiprecision::numerator(rat_);
    const BigInt den = boost::multiprecision::denominator(rat_);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
  }

 private:
  explicit FieldElement(const FieldSpec& s) : spec_(s), res_(0) {}
  void same_field(const FieldElement& o) const {
    check(spec_ == o.spec_, Errc::FieldMismatch, "operands from different fields");
  }

  FieldSpec spec_;
  std::uint64_t res_;
  BigRat rat_;
};

enum class ElementOp { Add, Sub, Mul, Div, Inv, Neg };

// Dispatcher form of the element arithmetic. Binary ops require b.
inline FieldElement element_arithmetic(ElementOp op, const FieldElement& a,
                                       const FieldElement* b = nullptr) {
  switch (op) {
    case ElementOp::Add: check(b, Errc::Unsupported, "add needs two operands"); return a + *b;
    case ElementOp::Sub: check(b, Errc::Unsupported, "sub needs two operands"); return a - *b;
    case ElementOp::Mul: check(b, Errc::Unsupported, "mul needs two operands"); return a * *b;
    case ElementOp::Div: check(b, Errc::Unsupported, "div needs two operands"); return a / *b;
    case ElementOp::Inv: return a.inv();
    case ElementOp::Neg: return -a;
  }
  fail(Errc::Unsupported, "bad element op");
}

// Ordered stream of field elements: 0..p-1 for GF(p); 0,1,-1,2,-2,... for Q.
class ElementStream {
 public:
  explicit ElementStream(const FieldSpec& s) : spec_(s) {}

  bool next(FieldElement& out) {
    if (spec_.is_prime_field()) {
      if (idx_ >= spec_.p()) return false;
      out = FieldElement::from_residue(spec_, idx_++);
      return true;
    }
    out = FieldElement::from_rational(BigRat(next_rat_));
    if (next_rat_ > 0)
      next_rat_ = -next_rat_;
    else
      next_rat_ = -next_rat_ + 1;
    return true;
  }

 private:
  FieldSpec spec_;
  std::uint64_t idx_ = 0;
  BigInt next_rat_ = 0;
};

}  // namespace polyqt
