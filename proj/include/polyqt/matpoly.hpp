#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "polyqt/poly.hpp"

namespace polyqt {

// Constant matrix over the field.
class ConstMatrix {
 public:
  ConstMatrix(const FieldSpec& s, int rows, int cols)
      : spec_(s), rows_(rows), cols_(cols),
        e_(static_cast<std::size_t>(rows) * cols, FieldElement::zero(s)) {}

  static ConstMatrix identity(const FieldSpec& s, int n) {
    ConstMatrix m(s, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = FieldElement::one(s);
    return m;
  }

  const FieldSpec& spec() const { return spec_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  FieldElement& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
  const FieldElement& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }

  friend ConstMatrix operator*(const ConstMatrix& a, const ConstMatrix& b) {
    check(a.cols_ == b.rows_, Errc::ShapeMismatch, "const matrix product");
    ConstMatrix r(a.spec_, a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        if (a.at(i, k).is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j) r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
      }
    return r;
  }

  friend bool operator==(const ConstMatrix& a, const ConstMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
  }

  int rank() const {
    ConstMatrix m = *this;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
      int piv = -1;
      for (int i = r; i < rows_; ++i)
        if (!m.at(i, c).is_zero()) { piv = i; break; }
      if (piv < 0) continue;
      for (int j = 0; j < cols_; ++j) std::swap(m.at(r, j), m.at(piv, j));
      const FieldElement inv = m.at(r, c).inv();
      for (int i = r + 1; i < rows_; ++i) {
        if (m.at(i, c).is_zero()) continue;
        const FieldElement f = m.at(i, c) * inv;
        for (int j = c; j < cols_; ++j) m.at(i, j) = m.at(i, j) - f * m.at(r, j);
      }
      ++r;
    }
    return r;
  }

  bool nonsingular() const { return rows_ == cols_ && rank() == rows_; }

  // Gauss-Jordan inverse; requires nonsingularity.
  ConstMatrix inverse() const {
    check(rows_ == cols_, Errc::NotSquare, "inverse of non-square");
    ConstMatrix m = *this, inv = identity(spec_, rows_);
    for (int c = 0; c < cols_; ++c) {
      int piv = -1;
      for (int i = c; i < rows_; ++i)
        if (!m.at(i, c).is_zero()) { piv = i; break; }
      check(piv >= 0, Errc::DivisionByZero, "singular constant matrix");
      for (int j = 0; j < cols_; ++j) {
        std::swap(m.at(c, j), m.at(piv, j));
        std::swap(inv.at(c, j), inv.at(piv, j));
      }
      const FieldElement d = m.at(c, c).inv();
      for (int j = 0; j < cols_; ++j) {
        m.at(c, j) = m.at(c, j) * d;
        inv.at(c, j) = inv.at(c, j) * d;
      }
      for (int i = 0; i < rows_; ++i) {
        if (i == c || m.at(i, c).is_zero()) continue;
        const FieldElement f = m.at(i, c);
        for (int j = 0; j < cols_; ++j) {
          m.at(i, j) = m.at(i, j) - f * m.at(c, j);
          inv.at(i, j) = inv.at(i, j) - f * inv.at(c, j);
        }
      }
    }
    return inv;
  }

 private:
  FieldSpec spec_;
  int rows_, cols_;
  std::vector<FieldElement> e_;
};

// m x n matrix polynomial with an explicit grade >= max entry degree.
class MatPoly {
 public:
  MatPoly(const FieldSpec& s, int rows, int cols, int grade = 0)
      : spec_(s), rows_(rows), cols_(cols), grade_(grade),
        e_(static_cast<std::size_t>(rows) * cols, Poly::zero(s)) {
    check(rows >= 1 && cols >= 1, Errc::ShapeMismatch, "empty matrix");
    check(grade >= 0, Errc::GradeBelowDegree, "negative grade");
  }

  static MatPoly identity(const FieldSpec& s, int n) {
    MatPoly m(s, n, n, 0);
    for (int i = 0; i < n; ++i) m.at(i, i) = Poly::one(s);
    return m;
  }
  static MatPoly diagonal(const FieldSpec& s, const std::vector<Poly>& d) {
    const int n = static_cast<int>(d.size());
    MatPoly m(s, n, n, 0);
    for (int i = 0; i < n; ++i) m.at(i, i) = d[static_cast<std::size_t>(i)];
    m.tighten_grade();
    return m;
  }

  const FieldSpec& spec() const { return spec_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int grade() const { return grade_; }
  bool is_square() const { return rows_ == cols_; }

  Poly& at(int i, int j) {
    check(i >= 0 && i < rows_ && j >= 0 && j < cols_, Errc::IndexOutOfRange, "entry index");
    return e_[static_cast<std::size_t>(i) * cols_ + j];
  }
  const Poly& at(int i, int j) const {
    check(i >= 0 && i < rows_ && j >= 0 && j < cols_, Errc::IndexOutOfRange, "entry index");
    return e_[static_cast<std::size_t>(i) * cols_ + j];
  }

  bool is_zero() const {
    for (const Poly& p : e_)
      if (!p.is_zero()) return false;
    return true;
  }
  int degree() const {
    check(!is_zero(), Errc::ZeroMatrix, "degree of the zero matrix");
    int d = 0;
    for (const Poly& p : e_) d = std::max(d, p.degree_or(0));
    return d;
  }
  int degree_or(int sentinel) const { return is_zero() ? sentinel : degree(); }

  // Keep the declared grade but make sure it covers the entries.
  void require_grade_consistent() const {
    check(grade_ >= degree_or(0), Errc::GradeBelowDegree, "grade below entry degree");
  }
  void tighten_grade() { grade_ = degree_or(0); }
  MatPoly with_grade(int g) const {
    check(g >= degree_or(0), Errc::GradeBelowDegree, "grade below degree");
    MatPoly m = *this;
    m.grade_ = g;
    return m;
  }

  ConstMatrix coeff(int k) const {
    ConstMatrix m(spec_, rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m.at(i, j) = at(i, j).coeff(k);
    return m;
  }

  friend MatPoly operator*(const MatPoly& a, const MatPoly& b) {
    check(a.spec_ == b.spec_, Errc::FieldMismatch, "matrix product fields");
    check(a.cols_ == b.rows_, Errc::ShapeMismatch, "matrix product shapes");
    MatPoly r(a.spec_, a.rows_, b.cols_, 0);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        if (a.at(i, k).is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j) {
          if (b.at(k, j).is_zero()) continue;
          r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
        }
      }
    r.tighten_grade();
    return r;
  }
  friend MatPoly operator+(const MatPoly& a, const MatPoly& b) {
    check(a.spec_ == b.spec_ && a.rows_ == b.rows_ && a.cols_ == b.cols_, Errc::ShapeMismatch,
          "matrix sum");
    MatPoly r = a;
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
    r.grade_ = std::max(a.grade_, b.grade_);
    return r;
  }
  friend MatPoly operator-(const MatPoly& a, const MatPoly& b) {
    MatPoly nb = b;
    for (Poly& p : nb.e_) p = -p;
    return a + nb;
  }
  friend MatPoly operator*(const Poly& c, const MatPoly& a) {
    MatPoly r = a;
    for (Poly& p : r.e_) p = c * p;
    r.tighten_grade();
    return r;
  }

  // Entry-wise equality including the declared grade.
  friend bool operator==(const MatPoly& a, const MatPoly& b) {
    return a.spec_ == b.spec_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.grade_ == b.grade_ && a.e_ == b.e_;
  }
  bool same_entries(const MatPoly& o) const {
    return spec_ == o.spec_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
  }

  MatPoly transpose() const {
    MatPoly r(spec_, cols_, rows_, grade_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  MatPoly block(int i0, int j0, int r, int c) const {
    check(i0 >= 0 && j0 >= 0 && i0 + r <= rows_ && j0 + c <= cols_, Errc::IndexOutOfRange,
          "block range");
    MatPoly m(spec_, r, c, 0);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.at(i, j) = at(i0 + i, j0 + j);
    m.tighten_grade();
    return m;
  }
  void set_block(int i0, int j0, const MatPoly& b) {
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) at(i0 + i, j0 + j) = b.at(i, j);
    grade_ = std::max(grade_, degree_or(0));
  }

  // in-place row/column operations
  void row_swap(int i, int j) {
    for (int k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
  }
  void col_swap(int i, int j) {
    for (int k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
  }
  void row_scale(int i, const FieldElement& c) {
    check(!c.is_zero(), Errc::ZeroScale, "row scale by zero");
    for (int k = 0; k < cols_; ++k) at(i, k) = c * at(i, k);
  }
  void col_scale(int j, const FieldElement& c) {
    check(!c.is_zero(), Errc::ZeroScale, "column scale by zero");
    for (int k = 0; k < rows_; ++k) at(k, j) = c * at(k, j);
  }
  void row_addmul(int dst, int src, const Poly& m) {  // R_dst += m * R_src
    check(dst != src, Errc::IndexOutOfRange, "row op on a single row");
    for (int k = 0; k < cols_; ++k) at(dst, k) = at(dst, k) + m * at(src, k);
    grade_ = std::max(grade_, degree_or(0));
  }
  void col_addmul(int dst, int src, const Poly& m) {  // C_dst += m * C_src
    check(dst != src, Errc::IndexOutOfRange, "column op on a single column");
    for (int k = 0; k < rows_; ++k) at(k, dst) = at(k, dst) + m * at(k, src);
    grade_ = std::max(grade_, degree_or(0));
  }

 private:
  FieldSpec spec_;
  int rows_, cols_, grade_;
  std::vector<Poly> e_;
};

// Exact determinant: cofactor expansion for n <= 3, fraction-free
// (Bareiss) elimination above that.
inline Poly mp_determinant(const MatPoly& P) {
  check(P.is_square(), Errc::NotSquare, "determinant of non-square matrix");
  const int n = P.rows();
  const FieldSpec s = P.spec();
  if (n == 1) return P.at(0, 0);
  if (n == 2) return P.at(0, 0) * P.at(1, 1) - P.at(0, 1) * P.at(1, 0);
  if (n == 3) {
    Poly d = Poly::zero(s);
    d = d + P.at(0, 0) * (P.at(1, 1) * P.at(2, 2) - P.at(1, 2) * P.at(2, 1));
    d = d - P.at(0, 1) * (P.at(1, 0) * P.at(2, 2) - P.at(1, 2) * P.at(2, 0));
    d = d + P.at(0, 2) * (P.at(1, 0) * P.at(2, 1) - P.at(1, 1) * P.at(2, 0));
    return d;
  }
  MatPoly m = P;
  bool negate = false;
  Poly prev = Poly::one(s);
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k).is_zero()) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (!m.at(i, k).is_zero()) { piv = i; break; }
      if (piv < 0) return Poly::zero(s);
      m.row_swap(k, piv);
      negate = !negate;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Poly num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        auto [q, r] = poly_divrem(num, prev);
        check(r.is_zero(), Errc::Unsupported, "Bareiss division not exact");
        m.at(i, j) = q;
      }
    prev = m.at(k, k);
  }
  Poly d = m.at(n - 1, n - 1);
  return negate ? -d : d;
}

inline bool mp_is_regular(const MatPoly& P) {
  return P.is_square() && !mp_determinant(P).is_zero();
}

inline bool mp_is_unimodular(const MatPoly& P) {
  check(P.is_square(), Errc::NotSquare, "unimodularity of non-square matrix");
  const Poly d = mp_determinant(P);
  return !d.is_zero() && d.is_constant();
}

// Nonsingular leading coefficient at the matrix degree (division condition).
inline bool mp_leading_nonsingular(const MatPoly& P) {
  if (!P.is_square() || P.is_zero()) return false;
  return P.coeff(P.degree()).nonsingular();
}

// Strictly regular at the declared grade: no infinite spectral structure.
inline bool mp_is_strictly_regular(const MatPoly& P) {
  if (!P.is_square() || P.is_zero()) return false;
  return P.grade() == P.degree() && P.coeff(P.degree()).nonsingular();
}

// rev_g P, entrywise reversal at the declared grade.
inline MatPoly mp_reverse(const MatPoly& P) {
  P.require_grade_consistent();
  MatPoly r(P.spec(), P.rows(), P.cols(), P.grade());
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j) r.at(i, j) = poly_reverse(P.at(i, j), P.grade());
  return r;
}

// MT_A(P) at the declared grade; the result keeps that grade.
inline MatPoly mp_mobius(const MatPoly& P, const MobiusMatrix& A) {
  P.require_grade_consistent();
  MatPoly r(P.spec(), P.rows(), P.cols(), P.grade());
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < P.cols(); ++j) r.at(i, j) = poly_mobius(P.at(i, j), P.grade(), A);
  return r;
}

enum class DivisionSide { Left, Right };

// Left: A = B*Q + R. Right: A = Q*B + R. R == 0 or deg R < deg B.
inline std::pair<MatPoly, MatPoly> mp_divide(const MatPoly& A, const MatPoly& B,
                                             DivisionSide side) {
  check(A.spec() == B.spec(), Errc::FieldMismatch, "division fields");
  check(B.is_square() && !B.is_zero() && mp_leading_nonsingular(B),
        Errc::DivisorNotStrictlyRegular, "divisor must have a nonsingular leading coefficient");
  if (side == DivisionSide::Left)
    check(B.rows() == A.rows(), Errc::ShapeMismatch, "left divisor shape");
  else
    check(B.cols() == A.cols(), Errc::ShapeMismatch, "right divisor shape");

  const int db = B.degree();
  const ConstMatrix lead_inv = B.coeff(db).inverse();
  MatPoly Q(A.spec(), A.rows(), A.cols(), 0), R = A;
  while (!R.is_zero() && R.degree() >= db) {
    const int k = R.degree() - db;
    const ConstMatrix top = R.coeff(R.degree());
    const ConstMatrix C = side == DivisionSide::Left ? lead_inv * top : top * lead_inv;
    MatPoly Ck(A.spec(), C.rows(), C.cols(), 0);
    for (int i = 0; i < C.rows(); ++i)
      for (int j = 0; j < C.cols(); ++j)
        if (!C.at(i, j).is_zero()) Ck.at(i, j) = Poly::monomial(C.at(i, j), k);
    Ck.tighten_grade();
    Q = Q + Ck;
    R = side == DivisionSide::Left ? R - B * Ck : R - Ck * B;
  }
  Q.tighten_grade();
  R.tighten_grade();
  return {Q, R};
}

// Adjugate of a square matrix polynomial (cofactor construction).
inline MatPoly mp_adjugate(const MatPoly& P) {
  check(P.is_square(), Errc::NotSquare, "adjugate of non-square matrix");
  const int n = P.rows();
  MatPoly adj(P.spec(), n, n, 0);
  if (n == 1) {
    adj.at(0, 0) = Poly::one(P.spec());
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      MatPoly minor(P.spec(), n - 1, n - 1, 0);
      for (int r = 0, rr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, cc = 0; c < n; ++c) {
          if (c == j) continue;
          minor.at(rr, cc) = P.at(r, c);
          ++cc;
        }
        ++rr;
      }
      minor.tighten_grade();
      Poly cof = mp_determinant(minor);
      if ((i + j) % 2 != 0) cof = -cof;
      adj.at(j, i) = cof;
    }
  adj.tighten_grade();
  return adj;
}

// Inverse of a unimodular matrix: adjugate over the constant determinant.
inline MatPoly mp_unimodular_inverse(const MatPoly& U) {
  const Poly d = mp_determinant(U);
  check(!d.is_zero() && d.is_constant(), Errc::Unsupported, "inverse of non-unimodular matrix");
  const FieldElement dinv = d.coeff(0).inv();
  MatPoly adj = mp_adjugate(U);
  return Poly::constant(dinv) * adj;
}

struct ElementaryOp {
  enum class Kind { SwapRows, SwapCols, ScaleRow, ScaleCol, AddRowMul, AddColMul } kind;
  int i = 0, j = 0;          // SwapX / target and source of AddXMul
  FieldElement scale;        // ScaleX
  Poly mult;                 // AddXMul multiplier

  ElementaryOp(Kind k, int i_, int j_, FieldElement c, Poly m)
      : kind(k), i(i_), j(j_), scale(std::move(c)), mult(std::move(m)) {}

  static ElementaryOp swap_rows(const FieldSpec& s, int i, int j) {
    return {Kind::SwapRows, i, j, FieldElement::one(s), Poly::zero(s)};
  }
  static ElementaryOp swap_cols(const FieldSpec& s, int i, int j) {
    return {Kind::SwapCols, i, j, FieldElement::one(s), Poly::zero(s)};
  }
  static ElementaryOp scale_row(int i, const FieldElement& c) {
    return {Kind::ScaleRow, i, i, c, Poly::zero(c.spec())};
  }
  static ElementaryOp scale_col(int j, const FieldElement& c) {
    return {Kind::ScaleCol, j, j, c, Poly::zero(c.spec())};
  }
  // R_i += m * R_j  (resp. C_i += m * C_j)
  static ElementaryOp add_row_mul(int i, int j, const Poly& m) {
    return {Kind::AddRowMul, i, j, FieldElement::one(m.spec()), m};
  }
  static ElementaryOp add_col_mul(int i, int j, const Poly& m) {
    return {Kind::AddColMul, i, j, FieldElement::one(m.spec()), m};
  }
};

inline MatPoly mp_elementary(const MatPoly& P, const ElementaryOp& op) {
  MatPoly r = P;
  switch (op.kind) {
    case ElementaryOp::Kind::SwapRows: r.row_swap(op.i, op.j); break;
    case ElementaryOp::Kind::SwapCols: r.col_swap(op.i, op.j); break;
    case ElementaryOp::Kind::ScaleRow: r.row_scale(op.i, op.scale); break;
    case ElementaryOp::Kind::ScaleCol: r.col_scale(op.i, op.scale); break;
    case ElementaryOp::Kind::AddRowMul: r.row_addmul(op.i, op.j, op.mult); break;
    case ElementaryOp::Kind::AddColMul: r.col_addmul(op.i, op.j, op.mult); break;
  }
  return r;
}

enum class LeadingBy { Matrix, Columns, Rows };

struct LeadingInfo {
  ConstMatrix mat;
  std::vector<int> degrees;  // per column/row; empty for Matrix
};

// Leading coefficient data: whole-matrix, per-column, or per-row.
inline LeadingInfo mp_leading_info(const MatPoly& P, LeadingBy by) {
  check(!P.is_zero(), Errc::ZeroMatrix, "leading data of the zero matrix");
  if (by == LeadingBy::Matrix) return {P.coeff(P.degree()), {}};
  LeadingInfo info{ConstMatrix(P.spec(), P.rows(), P.cols()), {}};
  if (by == LeadingBy::Columns) {
    for (int j = 0; j < P.cols(); ++j) {
      int d = -1;
      for (int i = 0; i < P.rows(); ++i) d = std::max(d, P.at(i, j).degree_or(-1));
      info.degrees.push_back(d);
      if (d < 0) continue;
      for (int i = 0; i < P.rows(); ++i) info.mat.at(i, j) = P.at(i, j).coeff(d);
    }
  } else {
    for (int i = 0; i < P.rows(); ++i) {
      int d = -1;
      for (int j = 0; j < P.cols(); ++j) d = std::max(d, P.at(i, j).degree_or(-1));
      info.degrees.push_back(d);
      if (d < 0) continue;
      for (int j = 0; j < P.cols(); ++j) info.mat.at(i, j) = P.at(i, j).coeff(d);
    }
  }
  return info;
}

// Same entries viewed at a new grade (>= degree).
inline MatPoly grade_shift_view(const MatPoly& P, int new_grade) {
  return P.with_grade(new_grade);
}

inline bool mp_is_upper_triangular(const MatPoly& P) {
  if (!P.is_square()) return false;
  for (int i = 0; i < P.rows(); ++i)
    for (int j = 0; j < i; ++j)
      if (!P.at(i, j).is_zero()) return false;
  return true;
}

}  // namespace polyqt
