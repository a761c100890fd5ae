#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "polyqt/factor.hpp"
#include "polyqt/matpoly.hpp"

namespace polyqt {

// U * P * V = S with S diagonal, monic, and s_i | s_{i+1}.
struct SmithDecomposition {
  MatPoly S, U, V;

  bool verify(const MatPoly& P) const {
    if (!(U * P * V).same_entries(S)) return false;
    if (!mp_is_unimodular(U) || !mp_is_unimodular(V)) return false;
    const int r = std::min(S.rows(), S.cols());
    for (int i = 0; i < S.rows(); ++i)
      for (int j = 0; j < S.cols(); ++j)
        if (i != j && !S.at(i, j).is_zero()) return false;
    Poly prev = Poly::zero(S.spec());
    for (int i = 0; i < r; ++i) {
      const Poly& si = S.at(i, i);
      if (!si.is_zero() && !si.lead().is_one()) return false;
      if (i > 0 && !si.is_zero() && prev.is_zero()) return false;  // zeros must trail
      if (i > 0 && !si.is_zero() && !divides(prev, si)) return false;
      prev = si;
    }
    return true;
  }

  // The nonzero diagonal entries.
  std::vector<Poly> invariants() const {
    std::vector<Poly> v;
    for (int i = 0; i < std::min(S.rows(), S.cols()); ++i)
      if (!S.at(i, i).is_zero()) v.push_back(S.at(i, i));
    return v;
  }
};

// Classical elimination: minimal-degree pivot, clear row/column with
// division-based elementary ops, absorb non-divisible trailing entries into
// the pivot row, recurse. U and V accumulate every elementary step.
inline SmithDecomposition smith_form(const MatPoly& P) {
  const FieldSpec s = P.spec();
  const int m = P.rows(), n = P.cols();
  MatPoly A = P;
  A.tighten_grade();
  MatPoly U = MatPoly::identity(s, m), V = MatPoly::identity(s, n);

  const int r = std::min(m, n);
  for (int t = 0; t < r; ++t) {
    for (;;) {
      // minimal-degree nonzero pivot in the trailing submatrix
      int pi = -1, pj = -1, best = -1;
      for (int i = t; i < m; ++i)
        for (int j = t; j < n; ++j) {
          const Poly& e = A.at(i, j);
          if (e.is_zero()) continue;
          if (best < 0 || e.degree() < best) {
            best = e.degree();
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) { t = r; break; }  // trailing submatrix is zero
      if (pi != t) { A.row_swap(t, pi); U.row_swap(t, pi); }
      if (pj != t) { A.col_swap(t, pj); V.col_swap(t, pj); }

      bool dirty = false;
      for (int i = t + 1; i < m; ++i) {
        if (A.at(i, t).is_zero()) continue;
        auto [q, rem] = poly_divrem(A.at(i, t), A.at(t, t));
        if (!q.is_zero()) { A.row_addmul(i, t, -q); U.row_addmul(i, t, -q); }
        if (!rem.is_zero()) dirty = true;
      }
      for (int j = t + 1; j < n; ++j) {
        if (A.at(t, j).is_zero()) continue;
        auto [q, rem] = poly_divrem(A.at(t, j), A.at(t, t));
        if (!q.is_zero()) { A.col_addmul(j, t, -q); V.col_addmul(j, t, -q); }
        if (!rem.is_zero()) dirty = true;
      }
      if (dirty) continue;  // smaller-degree entries appeared; re-pivot

      // pivot must divide the whole trailing submatrix for the chain property
      int bi = -1;
      for (int i = t + 1; i < m && bi < 0; ++i)
        for (int j = t + 1; j < n; ++j)
          if (!A.at(i, j).is_zero() && !divides(A.at(t, t), A.at(i, j))) {
            bi = i;
            break;
          }
      if (bi < 0) break;
      const Poly one = Poly::one(s);
      A.row_addmul(t, bi, one);
      U.row_addmul(t, bi, one);
    }
    if (t >= r) break;
  }

  // monic normalization, folded into U
  for (int i = 0; i < r; ++i) {
    if (A.at(i, i).is_zero()) continue;
    const FieldElement c = A.at(i, i).lead();
    if (!c.is_one()) {
      const FieldElement ci = c.inv();
      A.row_scale(i, ci);
      U.row_scale(i, ci);
    }
  }
  A.tighten_grade();
  U.tighten_grade();
  V.tighten_grade();
  return {A, U, V};
}

// Nondecreasing partial multiplicity sequence; length = rank.
using PMSeq = std::vector<int>;

// An irreducible polynomial, or the grade-one stand-in 0*x + 1 for infinity.
struct SpectralPoint {
  bool at_infinity;
  Poly chi;  // monic irreducible when finite; ignored at infinity

  static SpectralPoint infinity(const FieldSpec& s) { return {true, Poly::one(s)}; }
  static SpectralPoint finite(const Poly& irreducible) { return {false, irreducible.monic()}; }
};

inline int multiplicity_in(const Poly& chi, Poly s) {
  int k = 0;
  if (s.is_zero()) return 0;
  for (;;) {
    auto [q, r] = poly_divrem(s, chi);
    if (!r.is_zero()) return k;
    ++k;
    s = q;
  }
}

// PM(P, chi) for a finite irreducible chi (any nonzero scalar multiple of it).
inline PMSeq partial_multiplicities(const MatPoly& P, const Poly& chi) {
  check(!chi.is_zero() && !chi.is_constant(), Errc::NotIrreducible, "constant test polynomial");
  if (chi.spec().is_prime_field())
    check(poly_is_irreducible(chi), Errc::NotIrreducible, "test polynomial is reducible");
  const Poly c = chi.monic();
  PMSeq pm;
  for (const Poly& si : smith_form(P).invariants()) pm.push_back(multiplicity_in(c, si));
  return pm;
}

// PM(P, infinity) := PM(rev_g P, x); P must be regular.
inline PMSeq infinite_pm(const MatPoly& P) {
  check(mp_is_regular(P), Errc::NotRegular, "infinite structure of a non-regular matrix");
  P.require_grade_consistent();
  return partial_multiplicities(mp_reverse(P), Poly::x(P.spec()));
}

inline PMSeq partial_multiplicities(const MatPoly& P, const SpectralPoint& pt) {
  return pt.at_infinity ? infinite_pm(P) : partial_multiplicities(P, pt.chi);
}

// Finite irreducible divisors with their PM sequences, the infinite PM
// sequence, and the invariant polynomial list, for an n x n grade-g regular
// matrix polynomial.
struct SpectralData {
  FieldSpec spec = FieldSpec::gf(2);
  int n = 0;
  int grade = 0;
  std::vector<Poly> invariants;               // monic, ascending divisibility, length n
  std::vector<std::pair<Poly, PMSeq>> finite;  // sorted, monic irreducibles
  PMSeq infinite;                              // length n

  long long index_sum() const {
    long long s = 0;
    for (const Poly& p : invariants) s += p.degree_or(0);
    for (int g : infinite) s += g;
    return s;
  }
  int nontrivial_count() const {
    int m = 0;
    for (const Poly& p : invariants)
      if (!p.is_one()) ++m;
    return m;
  }
  int infinite_count() const {
    int l = 0;
    for (int g : infinite)
      if (g > 0) ++l;
    return l;
  }
  // Highest degree among irreducibles that actually occur; 0 if none.
  int max_divisor_degree() const {
    int k = 0;
    for (const auto& [chi, pm] : finite)
      if (!pm.empty() && pm.back() > 0) k = std::max(k, chi.degree());
    return k;
  }
  bool has_infinite_part() const { return infinite_count() > 0; }

  // Rebuild the invariant list from the PM sequences.
  static std::vector<Poly> invariants_from_pms(const FieldSpec& spec, int n,
                                               const std::vector<std::pair<Poly, PMSeq>>& finite) {
    std::vector<Poly> inv(static_cast<std::size_t>(n), Poly::one(spec));
    for (const auto& [chi, pm] : finite) {
      check(static_cast<int>(pm.size()) == n, Errc::LengthMismatch, "PM length");
      for (int i = 0; i < n; ++i)
        if (pm[static_cast<std::size_t>(i)] > 0)
          inv[static_cast<std::size_t>(i)] =
              inv[static_cast<std::size_t>(i)] * chi.pow(pm[static_cast<std::size_t>(i)]);
    }
    return inv;
  }

  static SpectralData from_finite(const FieldSpec& spec, int n, int grade,
                                  std::vector<std::pair<Poly, PMSeq>> finite, PMSeq infinite) {
    SpectralData d{spec, n, grade, {}, {}, {}};
    for (auto& [chi, pm] : finite) {
      chi = chi.monic();
      if (spec.is_prime_field())
        check(poly_is_irreducible(chi), Errc::NotIrreducible,
              "finite divisors must be irreducible");
      check(!pm.empty() && std::is_sorted(pm.begin(), pm.end()), Errc::LengthMismatch,
            "PM sequences must be nondecreasing");
      while (static_cast<int>(pm.size()) < n) pm.insert(pm.begin(), 0);
      check(static_cast<int>(pm.size()) == n, Errc::LengthMismatch, "PM longer than n");
    }
    std::sort(finite.begin(), finite.end(),
              [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
    d.finite = std::move(finite);
    while (static_cast<int>(infinite.size()) < n) infinite.insert(infinite.begin(), 0);
    check(static_cast<int>(infinite.size()) == n, Errc::LengthMismatch, "infinite PM length");
    check(std::is_sorted(infinite.begin(), infinite.end()), Errc::LengthMismatch,
          "infinite PM must be nondecreasing");
    d.infinite = std::move(infinite);
    d.invariants = invariants_from_pms(spec, n, d.finite);
    return d;
  }
};

// Complete spectral data of a regular matrix polynomial. Over GF(p) the
// largest invariant is factored automatically; over Q the caller must pass
// every irreducible divisor as a hint.
inline SpectralData extract_spectral_data(const MatPoly& P,
                                          const std::vector<Poly>& rational_hints = {},
                                          std::uint64_t seed = 0) {
  check(mp_is_regular(P), Errc::NotRegular, "spectral data of a non-regular matrix");
  P.require_grade_consistent();
  SpectralData d{P.spec(), P.rows(), P.grade(), {}, {}, {}};
  d.invariants = smith_form(P).invariants();
  check(static_cast<int>(d.invariants.size()) == P.rows(), Errc::NotRegular, "rank deficiency");

  const Poly& top = d.invariants.back();
  std::vector<Poly> irreducibles;
  if (!top.is_constant()) {
    if (P.spec().is_prime_field()) {
      for (const auto& [f, e] : poly_factor(top, seed).factors) irreducibles.push_back(f);
    } else {
      Poly rest = top.monic();
      for (const Poly& h : rational_hints) {
        const Poly hm = h.monic();
        while (!rest.is_constant() && divides(hm, rest)) {
          rest = poly_divrem(rest, hm).first;
          if (irreducibles.empty() || !(irreducibles.back() == hm)) irreducibles.push_back(hm);
        }
      }
      check(rest.is_constant(), Errc::UnsupportedFactorization,
            "rational input needs a complete set of irreducible divisor hints");
    }
  }
  for (const Poly& chi : irreducibles) {
    PMSeq pm;
    for (const Poly& si : d.invariants) pm.push_back(multiplicity_in(chi, si));
    d.finite.emplace_back(chi, std::move(pm));
  }
  std::sort(d.finite.begin(), d.finite.end(),
            [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });
  d.infinite = infinite_pm(P);
  check(d.index_sum() == static_cast<long long>(P.grade()) * P.rows(), Errc::IndexSumViolation,
        "index sum does not match grade * size");
  return d;
}

// Same complete spectral data, allowing different sizes: invariant lists are
// front-padded with 1's, infinite PM sequences with 0's.
inline bool spectrally_equivalent(const MatPoly& P, const MatPoly& Q) {
  check(P.spec() == Q.spec(), Errc::FieldMismatch, "comparison over different fields");
  check(mp_is_regular(P) && mp_is_regular(Q), Errc::NotRegular,
        "spectral equivalence needs regular inputs");
  std::vector<Poly> ip = smith_form(P).invariants(), iq = smith_form(Q).invariants();
  while (ip.size() < iq.size()) ip.insert(ip.begin(), Poly::one(P.spec()));
  while (iq.size() < ip.size()) iq.insert(iq.begin(), Poly::one(P.spec()));
  for (std::size_t i = 0; i < ip.size(); ++i)
    if (!(ip[i] == iq[i])) return false;
  PMSeq gp = infinite_pm(P), gq = infinite_pm(Q);
  while (gp.size() < gq.size()) gp.insert(gp.begin(), 0);
  while (gq.size() < gp.size()) gq.insert(gq.begin(), 0);
  return gp == gq;
}

}  // namespace polyqt
