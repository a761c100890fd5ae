#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "polyqt/poly.hpp"

namespace polyqt {

// unit * prod(factor^exp) reconstructs the input; factors monic, distinct,
// irreducible, sorted by degree then lexicographically.
struct Factorization {
  FieldElement unit;
  std::vector<std::pair<Poly, int>> factors;

  Poly reconstruct(const FieldSpec& s) const {
    Poly r = Poly::constant(unit);
    for (const auto& [f, e] : factors) r = r * f.pow(e);
    (void)s;
    return r;
  }
};

namespace detail {

inline Poly powmod(const Poly& base, BigInt e, const Poly& mod) {
  Poly acc = Poly::one(base.spec());
  Poly b = poly_mod(base, mod);
  while (e > 0) {
    if ((e & 1) != 0) acc = poly_mod(acc * b, mod);
    b = poly_mod(b * b, mod);
    e >>= 1;
  }
  return acc;
}

// x^(p^k) mod f via k-fold Frobenius, starting from `start`.
inline Poly frobenius_iterate(const Poly& start, int k, const Poly& f) {
  Poly r = start;
  const BigInt p = f.spec().p();
  for (int i = 0; i < k; ++i) r = powmod(r, p, f);
  return r;
}

// p-th root of a polynomial in x^p over GF(p) (Frobenius fixes the prime field).
inline Poly pth_root(const Poly& f) {
  const auto p = static_cast<int>(f.spec().p());
  std::vector<FieldElement> v;
  for (int i = 0; i <= f.degree_or(0); i += p) v.push_back(f.coeff(i));
  return Poly(f.spec(), std::move(v));
}

inline void sqfree_rec(const Poly& f, int mult, std::vector<std::pair<Poly, int>>& out) {
  if (f.is_constant()) return;
  const Poly d = f.derivative();
  if (d.is_zero()) {  // f = h(x^p)
    sqfree_rec(pth_root(f), mult * static_cast<int>(f.spec().p()), out);
    return;
  }
  Poly c = poly_gcd(f, d);
  Poly w = poly_divrem(f, c).first;
  int i = 1;
  while (!w.is_one()) {
    const Poly y = poly_gcd(w, c);
    const Poly z = poly_divrem(w, y).first;
    if (!z.is_one()) out.emplace_back(z.monic(), mult * i);
    w = y;
    c = poly_divrem(c, y).first;
    ++i;
  }
  if (!c.is_one()) sqfree_rec(c, mult, out);  // leftover multiplicities divisible by p
}

// Equal-degree splitting (Cantor-Zassenhaus) of a product of irreducibles of degree w.
inline void edf(const Poly& f, int w, std::mt19937_64& rng, std::vector<Poly>& out) {
  if (f.degree() == w) {
    out.push_back(f.monic());
    return;
  }
  const FieldSpec s = f.spec();
  const auto p = s.p();
  for (;;) {
    std::vector<FieldElement> rc(static_cast<std::size_t>(f.degree()), FieldElement::zero(s));
    for (auto& c : rc) c = FieldElement::from_residue(s, rng() % p);
    const Poly t(s, std::move(rc));
    if (t.is_zero() || t.is_constant()) continue;
    Poly g = Poly::zero(s);
    if (p == 2) {
      // trace map t + t^2 + ... + t^(2^(w-1))
      Poly tr = Poly::zero(s), cur = poly_mod(t, f);
      for (int i = 0; i < w; ++i) {
        tr = poly_mod(tr + cur, f);
        cur = poly_mod(cur * cur, f);
      }
      g = poly_gcd(tr, f);
    } else {
      BigInt e = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(w));
      e = (e - 1) / 2;
      const Poly u = powmod(t, e, f);
      g = poly_gcd(u - Poly::one(s), f);
    }
    if (!g.is_constant() && g.degree() < f.degree()) {
      edf(g, w, rng, out);
      edf(poly_divrem(f, g).first, w, rng, out);
      return;
    }
  }
}

}  // namespace detail

// Full factorization over GF(p); deterministic for a fixed seed.
inline Factorization poly_factor(const Poly& a, std::uint64_t seed = 0) {
  check(!a.is_zero(), Errc::DivisionByZero, "factor of zero");
  check(a.spec().is_prime_field(), Errc::UnsupportedFactorization,
        "factorization over the rationals is not provided; supply factors with the data");
  Factorization out{a.lead(), {}};
  if (a.is_constant()) return out;

  std::vector<std::pair<Poly, int>> sqf;
  detail::sqfree_rec(a.monic(), 1, sqf);

  std::mt19937_64 rng(seed);
  for (const auto& [part, mult] : sqf) {
    // distinct-degree splitting of the squarefree part
    Poly f = part;
    Poly r = Poly::x(f.spec());
    r = poly_mod(r, f);
    int w = 1;
    std::vector<std::pair<Poly, int>> pieces;  // (product of degree-w irreducibles, w)
    while (!f.is_constant() && f.degree() >= 2 * w) {
      r = detail::frobenius_iterate(r, 1, f);
      const Poly g = poly_gcd(r - Poly::x(f.spec()), f);
      if (!g.is_constant()) {
        pieces.emplace_back(g, w);
        f = poly_divrem(f, g).first;
        r = poly_mod(r, f);
      }
      ++w;
    }
    if (!f.is_constant()) pieces.emplace_back(f, f.degree());

    for (const auto& [piece, deg] : pieces) {
      std::vector<Poly> irred;
      detail::edf(piece, deg, rng, irred);
      for (const Poly& q : irred) out.factors.emplace_back(q, mult);
    }
  }

  std::sort(out.factors.begin(), out.factors.end(), [](const auto& x, const auto& y) {
    return lex_less(x.first, y.first);
  });
  // merge equal factors produced by different squarefree layers
  std::vector<std::pair<Poly, int>> merged;
  for (auto& fe : out.factors) {
    if (!merged.empty() && merged.back().first == fe.first)
      merged.back().second += fe.second;
    else
      merged.push_back(fe);
  }
  out.factors = std::move(merged);
  return out;
}

// Rabin irreducibility test over GF(p).
inline bool poly_is_irreducible(const Poly& a) {
  check(a.spec().is_prime_field(), Errc::UnsupportedFactorization,
        "irreducibility test needs a prime field");
  check(!a.is_zero() && a.degree() >= 1, Errc::Unsupported, "degree >= 1 required");
  const int n = a.degree();
  if (n == 1) return true;
  const Poly f = a.monic();
  const Poly x = Poly::x(a.spec());

  std::vector<int> prime_divs;
  int m = n;
  for (int q = 2; q * q <= m; ++q)
    if (m % q == 0) {
      prime_divs.push_back(q);
      while (m % q == 0) m /= q;
    }
  if (m > 1) prime_divs.push_back(m);

  for (int q : prime_divs) {
    const Poly r = detail::frobenius_iterate(poly_mod(x, f), n / q, f);
    if (!poly_gcd(r - x, f).is_one()) return false;
  }
  const Poly rn = detail::frobenius_iterate(poly_mod(x, f), n, f);
  return poly_mod(rn - x, f).is_zero();
}

}  // namespace polyqt
