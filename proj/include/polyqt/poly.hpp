#pragma once

#include <algorithm>
#include <cassert>
#include <utility>
#include <vector>

#include "polyqt/field.hpp"

namespace polyqt {

// Dense univariate polynomial over a field; coeffs[i] multiplies x^i and the
// last stored coefficient is nonzero. The zero polynomial stores no
// coefficients and has no degree (callers must branch on is_zero()).
class Poly {
 public:
  explicit Poly(const FieldSpec& s) : spec_(s) {}
  Poly(const FieldSpec& s, std::vector<FieldElement> coeffs) : spec_(s), c_(std::move(coeffs)) {
    for (const auto& c : c_) check(c.spec() == s, Errc::FieldMismatch, "coefficient field");
    trim();
  }

  static Poly zero(const FieldSpec& s) { return Poly(s); }
  static Poly constant(const FieldElement& c) { return Poly(c.spec(), {c}); }
  static Poly one(const FieldSpec& s) { return constant(FieldElement::one(s)); }
  // c * x^k
  static Poly monomial(const FieldElement& c, int k) {
    std::vector<FieldElement> v(static_cast<std::size_t>(k) + 1, FieldElement::zero(c.spec()));
    v.back() = c;
    return Poly(c.spec(), std::move(v));
  }
  static Poly x(const FieldSpec& s) { return monomial(FieldElement::one(s), 1); }
  // From small signed integer coefficients, index = power.
  static Poly from_ints(const FieldSpec& s, const std::vector<long long>& a) {
    std::vector<FieldElement> v;
    v.reserve(a.size());
    for (long long q : a) v.push_back(FieldElement::from_int(s, q));
    return Poly(s, std::move(v));
  }

  const FieldSpec& spec() const { return spec_; }
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  bool is_one() const { return c_.size() == 1 && c_[0].is_one(); }

  int degree() const {
    check(!is_zero(), Errc::DivisionByZero, "degree of the zero polynomial");
    return static_cast<int>(c_.size()) - 1;
  }
  // Degree with an explicit stand-in for the zero polynomial.
  int degree_or(int sentinel) const { return is_zero() ? sentinel : degree(); }

  FieldElement coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return FieldElement::zero(spec_);
    return c_[static_cast<std::size_t>(i)];
  }
  FieldElement lead() const {
    check(!is_zero(), Errc::DivisionByZero, "leading coefficient of zero");
    return c_.back();
  }
  const std::vector<FieldElement>& coeffs() const { return c_; }

  friend Poly operator+(const Poly& a, const Poly& b) {
    a.same_field(b);
    std::vector<FieldElement> v(std::max(a.c_.size(), b.c_.size()), FieldElement::zero(a.spec_));
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = a.coeff(static_cast<int>(i)) + b.coeff(static_cast<int>(i));
    return Poly(a.spec_, std::move(v));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  Poly operator-() const {
    std::vector<FieldElement> v = c_;
    for (auto& x : v) x = -x;
    return Poly(spec_, std::move(v));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.same_field(b);
    if (a.is_zero() || b.is_zero()) return zero(a.spec_);
    std::vector<FieldElement> v(a.c_.size() + b.c_.size() - 1, FieldElement::zero(a.spec_));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] = v[i + j] + a.c_[i] * b.c_[j];
    }
    return Poly(a.spec_, std::move(v));
  }
  friend Poly operator*(const FieldElement& c, const Poly& a) { return Poly::constant(c) * a; }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.spec_ != b.spec_ || a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly shifted(int k) const {  // multiply by x^k
    if (is_zero()) return *this;
    std::vector<FieldElement> v(c_.size() + static_cast<std::size_t>(k),
                                FieldElement::zero(spec_));
    for (std::size_t i = 0; i < c_.size(); ++i) v[i + static_cast<std::size_t>(k)] = c_[i];
    return Poly(spec_, std::move(v));
  }

  Poly monic() const {
    check(!is_zero(), Errc::DivisionByZero, "monic of zero");
    return lead().inv() * *this;
  }

  Poly pow(int e) const {
    Poly acc = one(spec_), base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  FieldElement eval(const FieldElement& x) const {
    FieldElement r = FieldElement::zero(spec_);
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return zero(spec_);
    std::vector<FieldElement> v(c_.size() - 1, FieldElement::zero(spec_));
    for (std::size_t i = 1; i < c_.size(); ++i)
      v[i - 1] = FieldElement::from_int(spec_, static_cast<long long>(i)) * c_[i];
    return Poly(spec_, std::move(v));
  }

  // Deterministic total order: degree, then coefficients from the top down.
  friend bool lex_less(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
    for (std::size_t i = a.c_.size(); i-- > 0;) {
      if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
    }
    return false;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  void same_field(const Poly& o) const {
    check(spec_ == o.spec_, Errc::FieldMismatch, "polynomials over different fields");
  }

  FieldSpec spec_;
  std::vector<FieldElement> c_;
};

// a = b*q + r with r == 0 or deg r < deg b.
inline std::pair<Poly, Poly> poly_divrem(const Poly& a, const Poly& b) {
  check(!b.is_zero(), Errc::DivisionByZero, "division by the zero polynomial");
  check(a.spec() == b.spec(), Errc::FieldMismatch, "divrem over different fields");
  Poly q = Poly::zero(a.spec()), r = a;
  const FieldElement binv = b.lead().inv();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    const int k = r.degree() - b.degree();
    const Poly t = Poly::monomial(r.lead() * binv, k);
    q = q + t;
    r = r - t * b;
  }
  return {q, r};
}

inline Poly poly_mod(const Poly& a, const Poly& b) { return poly_divrem(a, b).second; }
inline bool divides(const Poly& d, const Poly& a) {
  if (a.is_zero()) return true;
  if (d.is_zero()) return false;
  return poly_mod(a, d).is_zero();
}

// Monic gcd with Bezout coefficients: g = u*a + v*b.
struct XgcdResult {
  Poly g, u, v;
};

inline XgcdResult poly_xgcd(const Poly& a, const Poly& b) {
  check(!(a.is_zero() && b.is_zero()), Errc::BothZero, "gcd(0, 0)");
  const FieldSpec s = a.spec();
  Poly r0 = a, r1 = b;
  Poly u0 = Poly::one(s), u1 = Poly::zero(s);
  Poly v0 = Poly::zero(s), v1 = Poly::one(s);
  while (!r1.is_zero()) {
    auto [q, r] = poly_divrem(r0, r1);
    r0 = r1; r1 = r;
    Poly nu = u0 - q * u1, nv = v0 - q * v1;
    u0 = u1; u1 = nu;
    v0 = v1; v1 = nv;
  }
  const FieldElement c = r0.lead().inv();
  return {c * r0, c * u0, c * v0};
}

inline Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.is_zero() ? b : b.monic();
  if (b.is_zero()) return a.monic();
  return poly_xgcd(a, b).g;
}

// rev_g a: coefficient i of the result is coefficient (g - i) of a.
inline Poly poly_reverse(const Poly& a, int grade) {
  check(grade >= a.degree_or(0), Errc::GradeBelowDegree, "reversal grade below degree");
  if (a.is_zero()) return a;
  std::vector<FieldElement> v(static_cast<std::size_t>(grade) + 1, FieldElement::zero(a.spec()));
  for (int i = 0; i <= a.degree(); ++i) v[static_cast<std::size_t>(grade - i)] = a.coeff(i);
  return Poly(a.spec(), std::move(v));
}

// Nonsingular 2x2 scalar matrix [a b; c d] defining a Mobius transformation.
class MobiusMatrix {
 public:
  MobiusMatrix(FieldElement a, FieldElement b, FieldElement c, FieldElement d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    check(!(det().is_zero()), Errc::SingularMobiusMatrix, "ad - bc = 0");
  }
  static MobiusMatrix identity(const FieldSpec& s) {
    return MobiusMatrix(FieldElement::one(s), FieldElement::zero(s), FieldElement::zero(s),
                        FieldElement::one(s));
  }
  // R = [0 1; 1 0]; MT_R is the grade reversal.
  static MobiusMatrix reversal(const FieldSpec& s) {
    return MobiusMatrix(FieldElement::zero(s), FieldElement::one(s), FieldElement::one(s),
                        FieldElement::zero(s));
  }

  const FieldElement& a() const { return a_; }
  const FieldElement& b() const { return b_; }
  const FieldElement& c() const { return c_; }
  const FieldElement& d() const { return d_; }
  FieldElement det() const { return a_ * d_ - b_ * c_; }
  // The adjugate; a scalar multiple of the inverse, which is all MT needs.
  MobiusMatrix adjugate() const { return MobiusMatrix(d_, -b_, -c_, a_); }

 private:
  FieldElement a_, b_, c_, d_;
};

// (c x + d)^grade * a((a x + b)/(c x + d)), expanded exactly.
inline Poly poly_mobius(const Poly& a, int grade, const MobiusMatrix& A) {
  check(grade >= a.degree_or(0), Errc::GradeBelowDegree, "Mobius grade below degree");
  const FieldSpec s = a.spec();
  const Poly num = Poly(s, {A.b(), A.a()});  // a*x + b
  const Poly den = Poly(s, {A.d(), A.c()});  // c*x + d
  // powers of num and den up to grade
  std::vector<Poly> np(static_cast<std::size_t>(grade) + 1, Poly::one(s));
  std::vector<Poly> dp(static_cast<std::size_t>(grade) + 1, Poly::one(s));
  for (int i = 1; i <= grade; ++i) {
    np[static_cast<std::size_t>(i)] = np[static_cast<std::size_t>(i - 1)] * num;
    dp[static_cast<std::size_t>(i)] = dp[static_cast<std::size_t>(i - 1)] * den;
  }
  Poly out = Poly::zero(s);
  for (int i = 0; i <= grade; ++i) {
    const FieldElement ci = a.coeff(i);
    if (ci.is_zero()) continue;
    out = out + ci * (np[static_cast<std::size_t>(i)] * dp[static_cast<std::size_t>(grade - i)]);
  }
  return out;
}

}  // namespace polyqt
