#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace polyqt;
using polyqt::testing::Gf2Example;
using polyqt::testing::fixture_matpoly;
using polyqt::testing::random_matpoly;
using polyqt::testing::random_mobius;
using polyqt::testing::random_regular;

TEST_CASE("determinants") {
  const Gf2Example ex;
  const auto gf2 = ex.spec;
  const Poly x = Poly::x(gf2);

  CHECK(mp_determinant(MatPoly::diagonal(gf2, {x, x.pow(2)})) == x.pow(3));

  // X = [p -1; q x^d] with chi = x^d p + q has det chi (d = 2 here)
  const Poly p = Poly::from_ints(gf2, {0, 1, 1});  // x^2 + x
  const Poly q = Poly::one(gf2);
  MatPoly X(gf2, 2, 2, 0);
  X.at(0, 0) = p;
  X.at(0, 1) = -Poly::one(gf2);
  X.at(1, 0) = q;
  X.at(1, 1) = x.pow(2);
  X.tighten_grade();
  CHECK(mp_determinant(X) == ex.chi);

  // det of the Example 3.13 fixture is chi^9 phi^7 psi^10 (times a unit)
  const MatPoly Q = fixture_matpoly("witness_finite.json");
  const Poly d = mp_determinant(Q);
  const Poly expect = ex.chi.pow(9) * ex.phi.pow(7) * ex.psi.pow(10);
  CHECK(d.monic() == expect.monic());
}

TEST_CASE("unimodularity test") {
  const Gf2Example ex;
  const auto gf2 = ex.spec;
  CHECK(mp_is_unimodular(MatPoly::identity(gf2, 3)));

  MatPoly U1(gf2, 2, 2, 0);  // [1 phi+1; 0 1] from the worked example
  U1.at(0, 0) = Poly::one(gf2);
  U1.at(0, 1) = ex.phi + Poly::one(gf2);
  U1.at(1, 1) = Poly::one(gf2);
  U1.tighten_grade();
  CHECK(mp_is_unimodular(U1));

  CHECK(!mp_is_unimodular(MatPoly::diagonal(gf2, {Poly::x(gf2), Poly::one(gf2)})));
}

TEST_CASE("matrix reversal") {
  const Gf2Example ex;
  const MatPoly Q = fixture_matpoly("witness_finite.json");
  const MatPoly Qt = fixture_matpoly("witness_reversal.json");
  CHECK(mp_reverse(Q) == Qt);
  CHECK(mp_reverse(mp_reverse(Q)) == Q);

  // rev_g of a constant is the constant times x^g
  MatPoly C = MatPoly::identity(ex.spec, 2).with_grade(3);
  const MatPoly R = mp_reverse(C);
  CHECK(R.at(0, 0) == Poly::monomial(FieldElement::one(ex.spec), 3));
  CHECK(R.at(0, 1).is_zero());
}

TEST_CASE("matrix Mobius transformation") {
  const auto gf5 = FieldSpec::gf(5);
  std::mt19937_64 rng(31);
  const MatPoly P = random_matpoly(gf5, 3, 3, 3, rng);
  CHECK(mp_mobius(P, MobiusMatrix::identity(gf5)) == P);
  CHECK(mp_mobius(P, MobiusMatrix::reversal(gf5)) == mp_reverse(P));

  // round trip: MT_{adj A}(MT_A(P)) = det(A)^g * P
  for (int t = 0; t < 30; ++t) {
    const MatPoly M = random_matpoly(gf5, 3, 3, 3, rng);
    const MobiusMatrix A = random_mobius(gf5, rng);
    const MatPoly round = mp_mobius(mp_mobius(M, A), A.adjugate());
    const Poly scale = Poly::constant(A.det().pow(M.grade()));
    CHECK(round == scale * M);
  }
}

TEST_CASE("det commutes with Mobius up to a constant") {
  const auto gf5 = FieldSpec::gf(5);
  std::mt19937_64 rng(32);
  for (int t = 0; t < 20; ++t) {
    const MatPoly P = random_regular(gf5, 3, 2, rng);
    const MobiusMatrix A = random_mobius(gf5, rng);
    const Poly lhs = mp_determinant(mp_mobius(P, A));
    const Poly rhs = poly_mobius(mp_determinant(P), P.grade() * P.rows(), A);
    REQUIRE(!rhs.is_zero());
    CHECK(lhs.monic() == rhs.monic());
  }
}

TEST_CASE("matrix division") {
  const auto gf2 = FieldSpec::gf(2);
  const Poly x = Poly::x(gf2);
  const MatPoly I2 = MatPoly::identity(gf2, 2);

  auto [q1, r1] = mp_divide(Poly::monomial(FieldElement::one(gf2), 2) * I2, x * I2,
                            DivisionSide::Left);
  CHECK(q1 == x * I2);
  CHECK(r1.is_zero());

  MatPoly A(gf2, 2, 2, 0);
  A.at(0, 0) = x;
  A.at(0, 1) = Poly::one(gf2);
  A.at(1, 1) = x;
  A.tighten_grade();
  auto [q2, r2] = mp_divide(A, x * I2, DivisionSide::Left);
  CHECK(q2 == I2);
  CHECK(r2.at(0, 1) == Poly::one(gf2));
  CHECK(r2.at(0, 0).is_zero());

  // random reconstruction with a strictly regular divisor
  const auto gf3 = FieldSpec::gf(3);
  std::mt19937_64 rng(33);
  for (int t = 0; t < 40; ++t) {
    const MatPoly M = random_matpoly(gf3, 2, 3, 5, rng);
    MatPoly B(gf3, 2, 2, 0);
    do {
      B = random_matpoly(gf3, 2, 2, 2, rng);
    } while (B.is_zero() || !mp_leading_nonsingular(B));
    auto [q, r] = mp_divide(M, B, DivisionSide::Left);
    CHECK(B * q + r == M);
    if (!r.is_zero()) CHECK(r.degree() < B.degree());
    auto [qr, rr] = mp_divide(M.transpose(), B, DivisionSide::Right);
    CHECK(qr * B + rr == M.transpose());
  }

  CHECK_THROWS_AS(mp_divide(A, MatPoly::diagonal(gf2, {x, Poly::one(gf2)}), DivisionSide::Left),
                  Error);
}

TEST_CASE("elementary operations") {
  const auto gf2 = FieldSpec::gf(2);
  const Poly x = Poly::x(gf2);
  const MatPoly I2 = MatPoly::identity(gf2, 2);

  const MatPoly E = mp_elementary(I2, ElementaryOp::add_row_mul(0, 1, x));
  CHECK(E.at(0, 1) == x);
  CHECK(E.at(0, 0).is_one());
  CHECK(mp_is_unimodular(E));

  MatPoly s = mp_elementary(E, ElementaryOp::swap_rows(gf2, 0, 1));
  s = mp_elementary(s, ElementaryOp::swap_rows(gf2, 0, 1));
  CHECK(s == E);
}

TEST_CASE("leading coefficient data") {
  const Gf2Example ex;
  const MatPoly Q = fixture_matpoly("witness_finite.json");
  const LeadingInfo li = mp_leading_info(Q, LeadingBy::Matrix);
  // diag(R, R, R) with R = [0 1; 1 0]
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      const bool expect = (i / 2 == j / 2) && i != j;
      CHECK(li.mat.at(i, j).is_one() == expect);
    }
  CHECK(li.mat.nonsingular());

  const MatPoly Qt = fixture_matpoly("witness_reversal.json");
  CHECK(mp_leading_info(Qt, LeadingBy::Matrix).mat.rank() == 1);

  const MatPoly D = MatPoly::diagonal(ex.spec, {Poly::x(ex.spec).pow(2), Poly::x(ex.spec)});
  const LeadingInfo ci = mp_leading_info(D, LeadingBy::Columns);
  CHECK(ci.degrees == std::vector<int>{2, 1});
  CHECK(ci.mat == ConstMatrix::identity(ex.spec, 2));
}

TEST_CASE("grade bookkeeping") {
  const auto gf2 = FieldSpec::gf(2);
  const MatPoly I = MatPoly::identity(gf2, 2);
  CHECK(I.grade() == 0);
  CHECK(grade_shift_view(I, 4).grade() == 4);
  CHECK_THROWS_AS(grade_shift_view(MatPoly::diagonal(gf2, {Poly::x(gf2).pow(3)}), 2), Error);
}
