#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "polyqt/transfer.hpp"

namespace polyqt {

struct BlockStructure {
  std::vector<int> sizes;

  int total() const {
    int t = 0;
    for (int s : sizes) t += s;
    return t;
  }
  int offset(int b) const {
    int o = 0;
    for (int i = 0; i < b; ++i) o += sizes[static_cast<std::size_t>(i)];
    return o;
  }
  int max_size() const {
    int m = 0;
    for (int s : sizes) m = std::max(m, s);
    return m;
  }
};

// Realization output: the matrix, its block partition, and a certificate
// recomputed from scratch rather than trusted from the construction.
struct QuasiTriResult {
  MatPoly Q;
  BlockStructure blocks;
  SpectralData certificate;
  bool strictly_regular = false;
  bool offdiag_degree_ok = false;

  explicit QuasiTriResult(MatPoly q) : Q(std::move(q)) {}
  QuasiTriResult(MatPoly q, BlockStructure b, SpectralData c, bool sr, bool od)
      : Q(std::move(q)), blocks(std::move(b)), certificate(std::move(c)), strictly_regular(sr),
        offdiag_degree_ok(od) {}
};

inline bool spectral_data_equal(const SpectralData& a, const SpectralData& b) {
  if (a.spec != b.spec || a.n != b.n || a.grade != b.grade) return false;
  if (a.invariants.size() != b.invariants.size()) return false;
  for (std::size_t i = 0; i < a.invariants.size(); ++i)
    if (!(a.invariants[i] == b.invariants[i])) return false;
  auto fa = a.finite, fb = b.finite;
  auto strip = [](std::vector<std::pair<Poly, PMSeq>>& v) {
    v.erase(std::remove_if(v.begin(), v.end(),
                           [](const auto& e) { return e.second.empty() || e.second.back() == 0; }),
            v.end());
  };
  strip(fa);
  strip(fb);
  if (fa.size() != fb.size()) return false;
  for (std::size_t i = 0; i < fa.size(); ++i)
    if (!(fa[i].first == fb[i].first) || fa[i].second != fb[i].second) return false;
  return a.infinite == b.infinite;
}

namespace detail {

inline ConstMatrix companion(const Poly& s) {
  const int n = s.degree();
  ConstMatrix C(s.spec(), n, n);
  const Poly m = s.monic();
  for (int i = 0; i + 1 < n; ++i) C.at(i + 1, i) = FieldElement::one(s.spec());
  for (int i = 0; i < n; ++i) C.at(i, n - 1) = -m.coeff(i);
  return C;
}

inline std::vector<FieldElement> mat_vec(const ConstMatrix& M, const std::vector<FieldElement>& v) {
  std::vector<FieldElement> r(static_cast<std::size_t>(M.rows()),
                              FieldElement::zero(M.spec()));
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j)
      if (!M.at(i, j).is_zero()) r[static_cast<std::size_t>(i)] =
          r[static_cast<std::size_t>(i)] + M.at(i, j) * v[static_cast<std::size_t>(j)];
  return r;
}

// Monic m x m degree-d matrix polynomial with the prescribed invariant
// polynomials, built from a uniform-height Krylov basis of the direct sum of
// companion matrices: that basis rewrites the companion map into an m-block
// shift whose last block column carries the coefficients of the result.
inline std::optional<MatPoly> prescribed_realization(const FieldSpec& spec,
                                                     const std::vector<Poly>& invariants, int d,
                                                     std::mt19937_64& rng) {
  const int m = static_cast<int>(invariants.size());
  int N = 0;
  std::vector<ConstMatrix> blocks;
  for (const Poly& s : invariants)
    if (!s.is_one()) {
      blocks.push_back(companion(s));
      N += s.degree();
    }
  if (N != d * m) return std::nullopt;
  if (N == 0) return MatPoly::identity(spec, m);

  ConstMatrix A(spec, N, N);
  {
    int off = 0;
    for (const ConstMatrix& b : blocks) {
      for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) A.at(off + i, off + j) = b.at(i, j);
      off += b.rows();
    }
  }

  auto random_vec = [&]() {
    std::vector<FieldElement> v(static_cast<std::size_t>(N), FieldElement::zero(spec));
    for (auto& x : v) {
      if (spec.is_prime_field())
        x = FieldElement::from_residue(spec, rng() % spec.p());
      else
        x = FieldElement::from_int(spec, static_cast<long long>(rng() % 5) - 2);
    }
    return v;
  };

  // columns ordered (height t, generator j) -> t*m + j
  ConstMatrix B(spec, N, N);
  std::vector<std::vector<FieldElement>> vs;
  for (int j = 0; j < m; ++j) vs.push_back(random_vec());
  for (int j = 0; j < m; ++j) {
    std::vector<FieldElement> w = vs[static_cast<std::size_t>(j)];
    for (int t = 0; t < d; ++t) {
      for (int i = 0; i < N; ++i) B.at(i, t * m + j) = w[static_cast<std::size_t>(i)];
      if (t + 1 < d) w = mat_vec(A, w);
    }
  }
  if (!B.nonsingular()) return std::nullopt;

  const ConstMatrix Binv = B.inverse();
  ConstMatrix AB(spec, N, N);
  for (int c = 0; c < N; ++c) {
    std::vector<FieldElement> col(static_cast<std::size_t>(N), FieldElement::zero(spec));
    for (int i = 0; i < N; ++i) col[static_cast<std::size_t>(i)] = B.at(i, c);
    const auto ac = mat_vec(A, col);
    for (int i = 0; i < N; ++i) AB.at(i, c) = ac[static_cast<std::size_t>(i)];
  }
  const ConstMatrix C = Binv * AB;

  MatPoly W(spec, m, m, 0);
  for (int i = 0; i < m; ++i) {
    std::vector<FieldElement> coeffs(static_cast<std::size_t>(d) + 1, FieldElement::zero(spec));
    for (int j = 0; j < m; ++j) {
      for (int t = 0; t < d; ++t) coeffs[static_cast<std::size_t>(t)] = -C.at(t * m + i, (d - 1) * m + j);
      coeffs[static_cast<std::size_t>(d)] =
          i == j ? FieldElement::one(spec) : FieldElement::zero(spec);
      W.at(i, j) = Poly(spec, coeffs);
    }
  }
  W.tighten_grade();
  return W;
}

}  // namespace detail

// A strictly regular degree-d matrix unimodularly equivalent to B
// (deg det B must be d * size). The 1x1 and 2x2 cases are closed forms; the
// general case searches for a Krylov basis with seeded randomness.
inline MatPoly equalize_block_degree(const MatPoly& B, int d, std::uint64_t seed = 0) {
  check(B.is_square(), Errc::NotSquare, "equalization input");
  const int m = B.rows();
  const FieldSpec spec = B.spec();
  const Poly det = mp_determinant(B);
  check(!det.is_zero(), Errc::NotRegular, "equalization input must be regular");
  check(det.degree_or(0) == d * m, Errc::IndexSumViolation,
        "deg det must equal d * size for a degree-d strictly regular equivalent");

  if (!B.is_zero() && B.degree() == d && B.coeff(d).nonsingular()) return B.with_grade(d);
  if (d == 0) return MatPoly::identity(spec, m);

  const std::vector<Poly> inv = smith_form(B).invariants();
  check(static_cast<int>(inv.size()) == m, Errc::NotRegular, "rank-deficient block");

  MatPoly W(spec, m, m, 0);
  if (m == 1) {
    W.at(0, 0) = inv[0].monic();
    W.tighten_grade();
    return W;
  }
  if (m == 2) {
    const Poly q = inv[0], p = inv[1];
    if (p.degree() == d) {
      W = MatPoly::diagonal(spec, {p, q});
    } else {
      const int e = d - q.degree();
      auto [u, v] = poly_divrem(p, q.shifted(e));
      W.at(0, 0) = v;
      W.at(0, 1) = q.shifted(e);
      W.at(1, 0) = -(u * q);
      W.at(1, 1) = q;
      W.tighten_grade();
    }
  } else {
    std::mt19937_64 rng(seed);
    constexpr int kTrials = 1000;
    bool found = false;
    for (int trial = 0; trial < kTrials && !found; ++trial) {
      auto cand = detail::prescribed_realization(spec, inv, d, rng);
      if (!cand) continue;
      W = *cand;
      found = true;
    }
    check(found, Errc::EqualizationFailed, "no uniform Krylov basis found within the trial cap");
  }

  check(!W.is_zero() && W.degree() == d && W.coeff(d).nonsingular(), Errc::EqualizationFailed,
        "equalized block is not strictly regular of the target degree");
  const std::vector<Poly> got = smith_form(W).invariants();
  check(got.size() == inv.size(), Errc::EqualizationFailed, "equalization changed the rank");
  for (std::size_t i = 0; i < inv.size(); ++i)
    check(got[i] == inv[i], Errc::EqualizationFailed, "equalization changed the Smith form");
  return W.with_grade(d);
}

// Degree reduction of off-diagonal blocks: a single sweep by block
// diagonals, dividing each block by the smaller-degree neighbouring diagonal
// block. Diagonal blocks are untouched.
inline MatPoly reduce_offdiagonal(const MatPoly& T, const BlockStructure& blocks) {
  check(T.is_square() && blocks.total() == T.rows(), Errc::ShapeMismatch, "block structure");
  const int s = static_cast<int>(blocks.sizes.size());
  std::vector<int> deg(static_cast<std::size_t>(s), 0);
  for (int b = 0; b < s; ++b) {
    const MatPoly blk = T.block(blocks.offset(b), blocks.offset(b), blocks.sizes[static_cast<std::size_t>(b)],
                                blocks.sizes[static_cast<std::size_t>(b)]);
    check(!blk.is_zero() && blk.coeff(blk.degree()).nonsingular(),
          Errc::DiagonalBlockNotStrictlyRegular, "diagonal block " + std::to_string(b));
    deg[static_cast<std::size_t>(b)] = blk.degree();
  }
  // everything below the block diagonal must vanish
  for (int bi = 0; bi < s; ++bi)
    for (int bj = 0; bj < bi; ++bj)
      check(T.block(blocks.offset(bi), blocks.offset(bj), blocks.sizes[static_cast<std::size_t>(bi)],
                    blocks.sizes[static_cast<std::size_t>(bj)])
                .is_zero(),
            Errc::NotTriangular, "input is not block upper triangular");

  MatPoly R = T;
  for (int L = 1; L < s; ++L) {
    for (int i = 0; i + L < s; ++i) {
      const int j = i + L;
      const int oi = blocks.offset(i), oj = blocks.offset(j);
      const int ni = blocks.sizes[static_cast<std::size_t>(i)], nj = blocks.sizes[static_cast<std::size_t>(j)];
      MatPoly Tij = R.block(oi, oj, ni, nj);
      const int bound = std::min(deg[static_cast<std::size_t>(i)], deg[static_cast<std::size_t>(j)]);
      if (Tij.is_zero() || Tij.degree() < bound) continue;
      if (deg[static_cast<std::size_t>(i)] <= deg[static_cast<std::size_t>(j)]) {
        const MatPoly Tii = R.block(oi, oi, ni, ni);
        const auto [Q, rem] = mp_divide(Tij, Tii, DivisionSide::Left);
        // block column op: C_j -= C_i * Q
        for (int rb = 0; rb <= i; ++rb) {
          const int orb = blocks.offset(rb), nrb = blocks.sizes[static_cast<std::size_t>(rb)];
          const MatPoly upd = R.block(orb, oi, nrb, ni) * Q;
          R.set_block(orb, oj, R.block(orb, oj, nrb, nj) - upd);
        }
        (void)rem;
      } else {
        const MatPoly Tjj = R.block(oj, oj, nj, nj);
        const auto [Q, rem] = mp_divide(Tij, Tjj, DivisionSide::Right);
        // block row op: R_i -= Q * R_j
        for (int cb = j; cb < s; ++cb) {
          const int ocb = blocks.offset(cb), ncb = blocks.sizes[static_cast<std::size_t>(cb)];
          const MatPoly upd = Q * R.block(oj, ocb, nj, ncb);
          R.set_block(oi, ocb, R.block(oi, ocb, ni, ncb) - upd);
        }
        (void)rem;
      }
    }
  }
  R.tighten_grade();
  for (int L = 1; L < s; ++L)
    for (int i = 0; i + L < s; ++i) {
      const int j = i + L;
      const MatPoly blk = R.block(blocks.offset(i), blocks.offset(j),
                                  blocks.sizes[static_cast<std::size_t>(i)],
                                  blocks.sizes[static_cast<std::size_t>(j)]);
      check(blk.is_zero() ||
                blk.degree() < std::min(deg[static_cast<std::size_t>(i)], deg[static_cast<std::size_t>(j)]),
            Errc::Unsupported, "off-diagonal sweep left an oversized block");
    }
  return R;
}

namespace detail {

// Adjust a data set to realization size n: PM sequences gain or lose leading
// zeros, the invariant list gains or loses leading trivial entries.
inline SpectralData resize_data(const SpectralData& d, int n) {
  check(n >= d.nontrivial_count() && n >= d.infinite_count(), Errc::TooSmall,
        "size cannot hold all nontrivial invariants");
  std::vector<std::pair<Poly, PMSeq>> finite = d.finite;
  for (auto& [chi, pm] : finite) {
    while (static_cast<int>(pm.size()) > n) {
      check(pm.front() == 0, Errc::TooSmall, "shrinking would drop a nonzero multiplicity");
      pm.erase(pm.begin());
    }
    while (static_cast<int>(pm.size()) < n) pm.insert(pm.begin(), 0);
  }
  PMSeq inf = d.infinite;
  while (static_cast<int>(inf.size()) > n) {
    check(inf.front() == 0, Errc::TooSmall, "shrinking would drop infinite structure");
    inf.erase(inf.begin());
  }
  return SpectralData::from_finite(d.spec, n, d.grade, std::move(finite), std::move(inf));
}

}  // namespace detail

// Full pipeline for purely finite data: un-diagonalize the Smith
// form, group the diagonal, equalize each block to degree d, then sweep the
// off-diagonal blocks.
inline QuasiTriResult realize_strictly_regular(const SpectralData& data_in, int d, int n,
                                               std::uint64_t seed = 0) {
  check(d >= 0 && n >= 1, Errc::UsageError, "degree and size must be positive");
  check(data_in.infinite_count() == 0, Errc::Unsupported,
        "strictly regular realization cannot carry infinite structure");
  SpectralData data = detail::resize_data(data_in, n);
  data.grade = d;
  const FieldSpec spec = data.spec;
  for (std::size_t i = 1; i < data.invariants.size(); ++i)
    check(divides(data.invariants[i - 1], data.invariants[i]), Errc::SchemaError,
          "invariant polynomials must form a divisibility chain");
  check(data.index_sum() == static_cast<long long>(d) * n, Errc::IndexSumViolation,
        "d * n must equal the index sum");

  const MatPoly S = MatPoly::diagonal(spec, data.invariants);

  // multiset of irreducible factors
  std::vector<Poly> factors;
  for (const auto& [chi, pm] : data.finite)
    for (int e : pm)
      for (int c = 0; c < e; ++c) factors.push_back(chi);

  QuasiTriResult out(S);
  if (factors.empty()) {
    out.Q = MatPoly::identity(spec, n);
    out.blocks.sizes.assign(static_cast<std::size_t>(n), 1);
  } else if (n == 1) {
    out.Q = MatPoly::diagonal(spec, {data.invariants.back()});
    out.blocks.sizes = {1};
  } else {
    const int k = std::max(1, data.max_divisor_degree());
    const StackingLayout layout = stack_factors(factors, n);
    MatPoly T = drive_diagonal(S, layout);
    const Partitioning part = homogeneous_partition(layout.degrees, k, d);

    std::vector<int> perm;
    for (const auto& g : part.groups) perm.insert(perm.end(), g.begin(), g.end());
    T = permute_diagonal(T, perm);

    BlockStructure blocks;
    for (const auto& g : part.groups) blocks.sizes.push_back(static_cast<int>(g.size()));

    // equalize each diagonal block, carrying the transformation across the
    // whole row/column block strips
    for (std::size_t b = 0; b < blocks.sizes.size(); ++b) {
      const int off = blocks.offset(static_cast<int>(b)), sz = blocks.sizes[b];
      const MatPoly blk = T.block(off, off, sz, sz);
      const MatPoly W = equalize_block_degree(blk, d, seed);
      if (W.same_entries(blk)) continue;
      const SmithDecomposition s1 = smith_form(blk), s2 = smith_form(W);
      check(s1.S.same_entries(s2.S), Errc::EqualizationFailed, "block Smith forms disagree");
      const MatPoly Ub = mp_unimodular_inverse(s2.U) * s1.U;
      const MatPoly Vb = s1.V * mp_unimodular_inverse(s2.V);
      // rows [off, off+sz) <- Ub * rows; cols likewise with Vb on the right
      MatPoly rows = T.block(off, 0, sz, n);
      rows = Ub * rows;
      T.set_block(off, 0, rows);
      MatPoly cols = T.block(0, off, n, sz);
      cols = cols * Vb;
      T.set_block(0, off, cols);
      check(T.block(off, off, sz, sz).same_entries(W), Errc::EqualizationFailed,
            "embedded equalization mismatch");
    }
    out.Q = reduce_offdiagonal(T, blocks);
    out.blocks = blocks;
  }

  out.Q = out.Q.with_grade(d);
  std::vector<Poly> hints;
  for (const auto& [chi, pm] : data.finite) hints.push_back(chi);
  out.certificate = extract_spectral_data(out.Q, hints, seed);
  check(spectral_data_equal(out.certificate, data), Errc::Unsupported,
        "certificate disagrees with the requested data");
  out.strictly_regular = mp_is_strictly_regular(out.Q);
  check(out.strictly_regular && out.Q.degree() == d, Errc::Unsupported,
        "realization is not strictly regular of the requested degree");

  out.offdiag_degree_ok = true;
  for (std::size_t bi = 0; bi < out.blocks.sizes.size(); ++bi)
    for (std::size_t bj = bi + 1; bj < out.blocks.sizes.size(); ++bj) {
      const MatPoly blk =
          out.Q.block(out.blocks.offset(static_cast<int>(bi)), out.blocks.offset(static_cast<int>(bj)),
                      out.blocks.sizes[bi], out.blocks.sizes[bj]);
      if (!blk.is_zero() && blk.degree() >= d) out.offdiag_degree_ok = false;
    }
  return out;
}

// Mobius image of a spectral point per the grade conventions: finite
// irreducibles at grade = degree, the infinity stand-in at grade one.
inline SpectralPoint mobius_point(const SpectralPoint& pt, const MobiusMatrix& A) {
  const FieldSpec s = A.a().spec();
  Poly image = pt.at_infinity ? poly_mobius(Poly::one(s), 1, A)
                              : poly_mobius(pt.chi, pt.chi.degree(), A);
  check(!image.is_zero(), Errc::SingularMobiusMatrix, "Mobius image vanished");
  if (image.is_constant()) return SpectralPoint::infinity(s);
  return SpectralPoint::finite(image.monic());
}

// Realization with nontrivial structure at infinity: swap infinity with a
// non-eigenvalue scalar by a Mobius transformation, realize the now purely
// finite data, and transform back.
inline QuasiTriResult realize_with_infinity(const SpectralData& data_in, int g, int n,
                                            std::uint64_t seed = 0) {
  check(g >= 1 && n >= 1, Errc::UsageError, "grade and size must be positive");
  SpectralData data = detail::resize_data(data_in, n);
  data.grade = g;
  if (data.infinite_count() == 0) return realize_strictly_regular(data, g, n, seed);
  const FieldSpec spec = data.spec;
  check(data.index_sum() == static_cast<long long>(g) * n, Errc::IndexSumViolation,
        "g * n must equal the index sum");
  const int ell = data.infinite_count();
  check(n >= data.nontrivial_count() && n >= ell, Errc::TooSmall, "size too small for the data");

  // first scalar that is not an eigenvalue
  const Poly s_top = data.invariants.back();
  ElementStream stream(spec);
  FieldElement omega = FieldElement::zero(spec);
  bool found = false;
  for (FieldElement w; stream.next(w);) {
    if (!s_top.is_zero() && !s_top.eval(w).is_zero()) {
      omega = w;
      found = true;
      break;
    }
  }
  check(found, Errc::FieldExhausted,
        "every scalar of the field is an eigenvalue; no Mobius swap exists");

  const FieldElement one = FieldElement::one(spec), zero = FieldElement::zero(spec);
  const MobiusMatrix A = omega.is_zero()
                             ? MobiusMatrix::reversal(spec)
                             : MobiusMatrix(omega, zero, one, -omega);

  std::vector<std::pair<Poly, PMSeq>> finite2;
  for (const auto& [chi, pm] : data.finite) {
    const SpectralPoint img = mobius_point(SpectralPoint::finite(chi), A);
    check(!img.at_infinity, Errc::Unsupported, "a finite divisor mapped to infinity");
    check(img.chi.degree() == chi.degree(), Errc::Unsupported, "Mobius changed a divisor degree");
    finite2.emplace_back(img.chi, pm);
  }
  const SpectralPoint inf_img = mobius_point(SpectralPoint::infinity(spec), A);
  check(!inf_img.at_infinity && inf_img.chi.degree() == 1, Errc::Unsupported,
        "infinity must map to a linear divisor");
  for (const auto& [chi, pm] : finite2)
    check(!(chi == inf_img.chi), Errc::Unsupported, "Mobius image collision");
  finite2.emplace_back(inf_img.chi, data.infinite);

  const SpectralData data2 = SpectralData::from_finite(spec, n, g, std::move(finite2), {});
  QuasiTriResult inner = realize_strictly_regular(data2, g, n, seed);

  QuasiTriResult out(mp_mobius(inner.Q.with_grade(g), A.adjugate()));
  out.blocks = inner.blocks;
  std::vector<Poly> hints;
  for (const auto& [chi, pm] : data.finite) hints.push_back(chi);
  out.certificate = extract_spectral_data(out.Q, hints, seed);
  check(spectral_data_equal(out.certificate, data), Errc::Unsupported,
        "certificate disagrees with the requested data");
  out.strictly_regular = mp_is_strictly_regular(out.Q);
  const bool full_degree = out.Q.degree_or(-1) == g;
  check(full_degree == (n > ell), Errc::Unsupported,
        "degree/grade relation inconsistent with the data");
  out.offdiag_degree_ok = false;  // no degree bound is promised with infinite structure
  return out;
}

// Quasi-triangularization of a regular matrix polynomial: same size, grade,
// degree, and complete spectral data.
inline QuasiTriResult quasi_triangularize(const MatPoly& P,
                                          const std::vector<Poly>& rational_hints = {},
                                          std::uint64_t seed = 0) {
  check(mp_is_regular(P), Errc::NotRegular, "quasi-triangularization input");
  P.require_grade_consistent();
  const int n = P.rows(), g = P.grade(), d = P.degree();
  const SpectralData data = extract_spectral_data(P, rational_hints, seed);

  if (n == 1) {
    QuasiTriResult out{P, {{1}}, data, mp_is_strictly_regular(P), true};
    return out;
  }
  if (mp_is_strictly_regular(P)) return realize_strictly_regular(data, d, n, seed);

  // view at grade = degree, realize, then view back (the infinite PM shifts
  // by g - d componentwise)
  SpectralData shifted = data;
  shifted.grade = d;
  for (int& a : shifted.infinite) {
    check(a >= g - d, Errc::Unsupported, "infinite PM below the grade shift");
    a -= g - d;
  }
  QuasiTriResult inner = shifted.infinite_count() == 0
                             ? realize_strictly_regular(shifted, d, n, seed)
                             : realize_with_infinity(shifted, d, n, seed);
  QuasiTriResult out(grade_shift_view(inner.Q, g));
  out.blocks = inner.blocks;
  out.certificate = extract_spectral_data(out.Q, rational_hints, seed);
  check(spectral_data_equal(out.certificate, data), Errc::Unsupported,
        "certificate disagrees with the input's spectral data");
  out.strictly_regular = mp_is_strictly_regular(out.Q);
  out.offdiag_degree_ok = inner.offdiag_degree_ok;
  check(out.Q.degree_or(-1) == d, Errc::Unsupported, "degree was not preserved");
  return out;
}

}  // namespace polyqt
