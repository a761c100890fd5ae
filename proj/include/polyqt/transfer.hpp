#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "polyqt/combinat.hpp"
#include "polyqt/smith.hpp"

namespace polyqt {

// One side F of a coprime partition of an irreducible-factor multiset;
// membership is decided by the monic representative. The complement G is
// implicit: everything not divisible by a member of F.
struct CoprimePartition {
  std::vector<Poly> members;  // monic irreducibles

  static CoprimePartition of(std::vector<Poly> polys) {
    CoprimePartition f;
    for (Poly& p : polys) {
      check(!p.is_zero() && !p.is_constant(), Errc::NotIrreducible, "family member");
      p = p.monic();
    }
    std::sort(polys.begin(), polys.end(), [](const Poly& a, const Poly& b) { return lex_less(a, b); });
    polys.erase(std::unique(polys.begin(), polys.end()), polys.end());
    f.members = std::move(polys);
    return f;
  }
};

namespace detail {

// p = (prod of F-factors) * cofactor; factors listed with multiplicity,
// ascending lex. Only trial division by the family members is needed.
struct FamilySplit {
  std::vector<Poly> f_factors;
  Poly cofactor;
};

inline FamilySplit split_by_family(const Poly& p, const CoprimePartition& F) {
  check(!p.is_zero(), Errc::DivisionByZero, "family split of zero");
  FamilySplit out{{}, p};
  for (const Poly& f : F.members) {
    for (;;) {
      auto [q, r] = poly_divrem(out.cofactor, f);
      if (!r.is_zero()) break;
      out.f_factors.push_back(f);
      out.cofactor = q;
    }
  }
  std::sort(out.f_factors.begin(), out.f_factors.end(),
            [](const Poly& a, const Poly& b) { return lex_less(a, b); });
  return out;
}

inline Poly product_of(const FieldSpec& s, const std::vector<Poly>& fs) {
  Poly r = Poly::one(s);
  for (const Poly& f : fs) r = r * f;
  return r;
}

}  // namespace detail

inline long long family_count(const Poly& p, const CoprimePartition& F) {
  return static_cast<long long>(detail::split_by_family(p, F).f_factors.size());
}

// d_F(P): per-position F-factor counts of the diagonal.
inline NatVec diag_factor_counts(const MatPoly& P, const CoprimePartition& F) {
  check(P.is_square(), Errc::NotSquare, "diagonal counts");
  NatVec v;
  for (int i = 0; i < P.rows(); ++i) v.push_back(family_count(P.at(i, i), F));
  return v;
}

struct TransferResult {
  MatPoly T_new, E, F;  // E * T * F == T_new, both transforms unimodular
};

namespace detail {

// Core of the 2x2 transfer: rebuild the pair as
//   [ g_F * a * p_G    g ]
//   [ 0                g_F * b * r_G ]
// for a chosen split a*b of the movable F-factors. Smith form is preserved
// by construction; E and F are recovered from the two Smith decompositions.
// alpha_total is the requested F-count of the first diagonal entry; with
// exact_swap the movable factors change sides wholesale instead.
inline TransferResult transfer_with_split(const MatPoly& T, const CoprimePartition& F,
                                          long long alpha_total, bool exact_swap) {
  check(T.rows() == 2 && T.cols() == 2, Errc::ShapeMismatch, "transfer acts on 2x2 blocks");
  check(T.at(1, 0).is_zero(), Errc::NotTriangular, "transfer input must be upper triangular");
  const Poly &p = T.at(0, 0), &q = T.at(0, 1), &r = T.at(1, 1);
  check(!p.is_zero() && !r.is_zero(), Errc::NotRegular, "transfer input must be regular");
  const FieldSpec s = T.spec();

  Poly g = poly_gcd(p, r);
  if (!q.is_zero()) g = poly_gcd(g, q);

  const Poly p_hat = poly_divrem(p, g).first;
  const Poly r_hat = poly_divrem(r, g).first;
  const FamilySplit gs = split_by_family(g, F);
  const FamilySplit ps = split_by_family(p_hat, F);
  const FamilySplit rs = split_by_family(r_hat, F);
  const Poly p_G = ps.cofactor * gs.cofactor;  // full G-part of p
  const Poly r_G = rs.cofactor * gs.cofactor;
  const Poly g_F = product_of(s, gs.f_factors);

  std::vector<Poly> a_fs, b_fs;
  if (exact_swap) {
    a_fs = rs.f_factors;
    b_fs = ps.f_factors;
  } else {
    std::vector<Poly> movable = ps.f_factors;
    movable.insert(movable.end(), rs.f_factors.begin(), rs.f_factors.end());
    std::sort(movable.begin(), movable.end(),
              [](const Poly& x, const Poly& y) { return lex_less(x, y); });
    const long long want = alpha_total - static_cast<long long>(gs.f_factors.size());
    check(want >= 0 && want <= static_cast<long long>(movable.size()), Errc::TargetOutOfRange,
          "requested F-count split is unreachable");
    a_fs.assign(movable.begin(), movable.begin() + want);
    b_fs.assign(movable.begin() + want, movable.end());
  }

  MatPoly Tn(s, 2, 2, 0);
  Tn.at(0, 0) = g_F * product_of(s, a_fs) * p_G;
  Tn.at(0, 1) = g;
  Tn.at(1, 1) = g_F * product_of(s, b_fs) * r_G;
  Tn.tighten_grade();

  const SmithDecomposition d1 = smith_form(T), d2 = smith_form(Tn);
  check(d1.S.same_entries(d2.S), Errc::Unsupported, "transfer changed the Smith form");
  MatPoly E = mp_unimodular_inverse(d2.U) * d1.U;
  MatPoly Fm = d1.V * mp_unimodular_inverse(d2.V);
  return {Tn, E, Fm};
}

}  // namespace detail

// Move F-factors between the diagonal entries of a regular upper triangular
// 2x2, hitting diagonal F-counts (alpha, beta) while the G-side factors of
// the diagonal stay put.
inline TransferResult transfer_2x2(const MatPoly& T, const CoprimePartition& F, long long alpha,
                                   long long beta) {
  check(T.rows() == 2 && T.cols() == 2, Errc::ShapeMismatch, "transfer acts on 2x2 blocks");
  check(T.at(1, 0).is_zero(), Errc::NotTriangular, "transfer input must be upper triangular");
  check(!T.at(0, 0).is_zero() && !T.at(1, 1).is_zero(), Errc::NotRegular, "transfer input");
  const long long m = family_count(T.at(0, 0), F);
  const long long n = family_count(T.at(1, 1), F);
  const long long lo = std::min(m, n), hi = std::max(m, n);
  check(alpha + beta == m + n && lo <= alpha && alpha <= hi && lo <= beta && beta <= hi,
        Errc::TargetOutOfRange, "transfer target outside the reachable range");
  if (alpha == m && beta == n) {
    const FieldSpec s = T.spec();
    return {T, MatPoly::identity(s, 2), MatPoly::identity(s, 2)};
  }
  return detail::transfer_with_split(T, F, alpha, false);
}

namespace detail {

// Apply a 2x2 transfer result at adjacent diagonal positions (i, i+1) of an
// upper triangular P: rows get E on the left, columns get F on the right.
// The pair block must land exactly on the transfer's rebuilt block.
inline void embed_pair(MatPoly& P, int i, const TransferResult& tr) {
  const int n = P.cols();
  for (int k = 0; k < n; ++k) {
    const Poly a = P.at(i, k), b = P.at(i + 1, k);
    P.at(i, k) = tr.E.at(0, 0) * a + tr.E.at(0, 1) * b;
    P.at(i + 1, k) = tr.E.at(1, 0) * a + tr.E.at(1, 1) * b;
  }
  for (int k = 0; k < n; ++k) {
    const Poly a = P.at(k, i), b = P.at(k, i + 1);
    P.at(k, i) = a * tr.F.at(0, 0) + b * tr.F.at(1, 0);
    P.at(k, i + 1) = a * tr.F.at(0, 1) + b * tr.F.at(1, 1);
  }
  check(P.at(i, i) == tr.T_new.at(0, 0) && P.at(i, i + 1) == tr.T_new.at(0, 1) &&
            P.at(i + 1, i).is_zero() && P.at(i + 1, i + 1) == tr.T_new.at(1, 1),
        Errc::Unsupported, "embedded transfer missed the rebuilt pair block");
  P.tighten_grade();
}

// Keep intermediate degrees tame: reduce every off-diagonal entry modulo the
// diagonal entry below it (row operations, unimodular, diagonal untouched).
inline void triangular_cleanup(MatPoly& P) {
  const int n = P.rows();
  for (int j = 1; j < n; ++j) {
    if (P.at(j, j).is_zero()) continue;
    for (int i = j - 1; i >= 0; --i) {
      if (P.at(i, j).is_zero()) continue;
      const Poly q = poly_divrem(P.at(i, j), P.at(j, j)).first;
      if (!q.is_zero()) P.row_addmul(i, j, -q);
    }
  }
  P.tighten_grade();
}

}  // namespace detail

// Transfer embedded at adjacent diagonal positions (i, i+1) of an n x n
// regular upper triangular matrix; other diagonal entries are untouched.
inline MatPoly embed_transfer(const MatPoly& P, int i, const CoprimePartition& F, long long alpha,
                              long long beta) {
  check(mp_is_upper_triangular(P), Errc::NotTriangular, "embed_transfer input");
  check(i >= 0 && i + 1 < P.rows(), Errc::IndexOutOfRange, "pair position");
  MatPoly T(P.spec(), 2, 2, 0);
  T.at(0, 0) = P.at(i, i);
  T.at(0, 1) = P.at(i, i + 1);
  T.at(1, 1) = P.at(i + 1, i + 1);
  T.tighten_grade();
  const TransferResult tr = transfer_2x2(T, F, alpha, beta);
  MatPoly R = P;
  detail::embed_pair(R, i, tr);
  detail::triangular_cleanup(R);
  return R;
}

namespace detail {

// Exact interchange of adjacent diagonal entries: new pair is (r, p) with
// corner gcd(p, q, r). Needs no factor family at all.
inline void swap_adjacent_diagonal(MatPoly& P, int i) {
  MatPoly T(P.spec(), 2, 2, 0);
  T.at(0, 0) = P.at(i, i);
  T.at(0, 1) = P.at(i, i + 1);
  T.at(1, 1) = P.at(i + 1, i + 1);
  T.tighten_grade();
  const Poly &p = T.at(0, 0), &q = T.at(0, 1), &r = T.at(1, 1);
  Poly g = poly_gcd(p, r);
  if (!q.is_zero()) g = poly_gcd(g, q);
  MatPoly Tn(P.spec(), 2, 2, 0);
  Tn.at(0, 0) = r;
  Tn.at(0, 1) = g;
  Tn.at(1, 1) = p;
  Tn.tighten_grade();
  const SmithDecomposition d1 = smith_form(T), d2 = smith_form(Tn);
  check(d1.S.same_entries(d2.S), Errc::Unsupported, "diagonal swap changed the Smith form");
  TransferResult tr{Tn, mp_unimodular_inverse(d2.U) * d1.U, d1.V * mp_unimodular_inverse(d2.V)};
  embed_pair(P, i, tr);
  triangular_cleanup(P);
}

}  // namespace detail

// Permute the diagonal entries of a regular upper triangular matrix:
// perm[t] = source position whose entry ends up at position t. Realized as
// adjacent full-entry interchanges.
inline MatPoly permute_diagonal(const MatPoly& T, const std::vector<int>& perm) {
  check(mp_is_upper_triangular(T), Errc::NotTriangular, "permute_diagonal input");
  const int n = T.rows();
  check(static_cast<int>(perm.size()) == n, Errc::BadPermutation, "permutation length");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int s : perm) {
    check(s >= 0 && s < n && !seen[static_cast<std::size_t>(s)], Errc::BadPermutation,
          "not a permutation");
    seen[static_cast<std::size_t>(s)] = true;
  }
  for (int i = 0; i < n; ++i)
    check(!T.at(i, i).is_zero(), Errc::NotRegular, "permute_diagonal needs a regular input");

  // current[t] = original position of the entry now at t
  std::vector<int> current(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) current[static_cast<std::size_t>(i)] = i;
  MatPoly R = T;
  for (int t = 0; t < n; ++t) {
    int at = -1;
    for (int u = t; u < n; ++u)
      if (current[static_cast<std::size_t>(u)] == perm[static_cast<std::size_t>(t)]) { at = u; break; }
    check(at >= 0, Errc::BadPermutation, "permutation bookkeeping");
    for (int u = at; u > t; --u) {
      detail::swap_adjacent_diagonal(R, u - 1);
      std::swap(current[static_cast<std::size_t>(u)], current[static_cast<std::size_t>(u) - 1]);
    }
  }
  return R;
}

// Un-diagonalize a Smith form toward a stacking layout: per degree family,
// in descending degree order, drive the diagonal factor-counting vector to
// the layout's count vector by embedded transfers.
inline MatPoly drive_diagonal(const MatPoly& S, const StackingLayout& layout) {
  check(S.is_square() && S.rows() == layout.n, Errc::LayoutMismatch, "layout size");
  check(mp_is_upper_triangular(S), Errc::NotTriangular, "drive_diagonal input");
  const int n = S.rows();
  for (int i = 0; i < n; ++i) {
    check(!S.at(i, i).is_zero(), Errc::NotRegular, "Smith form must be regular");
    for (int j = i + 1; j < n; ++j)
      check(S.at(i, j).is_zero(), Errc::LayoutMismatch, "input must be diagonal");
    if (i > 0)
      check(divides(S.at(i - 1, i - 1), S.at(i, i)), Errc::LayoutMismatch,
            "diagonal must form a divisibility chain");
  }

  // the layout must redistribute exactly the factors present in S
  std::map<int, std::vector<Poly>> families;  // degree -> distinct irreducibles
  for (const auto& col : layout.columns)
    for (const Poly& f : col) families[f.degree()].push_back(f);
  for (auto& [deg, fs] : families) {
    std::sort(fs.begin(), fs.end(), [](const Poly& a, const Poly& b) { return lex_less(a, b); });
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
  }
  {
    Poly layout_prod = Poly::one(S.spec());
    for (const auto& col : layout.column_products) layout_prod = layout_prod * col;
    Poly diag_prod = Poly::one(S.spec());
    for (int i = 0; i < n; ++i) diag_prod = diag_prod * S.at(i, i);
    check(layout_prod == diag_prod.monic(), Errc::LayoutMismatch,
          "layout factors do not multiply back to the Smith diagonal");
  }

  MatPoly T = S;
  for (auto it = families.rbegin(); it != families.rend(); ++it) {
    const CoprimePartition F = CoprimePartition::of(it->second);
    const NatVec target = layout.family_counts.at(it->first);
    NatVec cur = diag_factor_counts(T, F);
    if (cur == target) continue;
    const OpSequence script = realize_majorization(cur, target);
    for (const VecOp& op : script) {
      MatPoly pair(T.spec(), 2, 2, 0);
      pair.at(0, 0) = T.at(op.i, op.i);
      pair.at(0, 1) = T.at(op.i, op.i + 1);
      pair.at(1, 1) = T.at(op.i + 1, op.i + 1);
      pair.tighten_grade();
      const TransferResult tr =
          op.kind == VecOp::Kind::Interchange
              ? detail::transfer_with_split(pair, F, 0, true)
              : detail::transfer_with_split(pair, F, op.alpha, false);
      detail::embed_pair(T, op.i, tr);
      detail::triangular_cleanup(T);
    }
    check(diag_factor_counts(T, F) == target, Errc::LayoutMismatch,
          "family drive missed its target");
  }
  for (int i = 0; i < n; ++i)
    check(T.at(i, i).degree_or(0) == layout.degrees[static_cast<std::size_t>(i)],
          Errc::LayoutMismatch, "diagonal degrees disagree with the layout");
  return T;
}

}  // namespace polyqt
