#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace polyqt;
using polyqt::testing::Gf2Example;
using polyqt::testing::fixture_matpoly;
using polyqt::testing::random_matpoly;
using polyqt::testing::random_mobius;
using polyqt::testing::random_regular;
using polyqt::testing::random_unimodular;

TEST_CASE("Smith form basics") {
  const Gf2Example ex;
  const auto gf2 = ex.spec;

  // already in Smith form
  const MatPoly S0 = MatPoly::diagonal(gf2, {Poly::one(gf2), ex.psi, ex.psi * ex.phi});
  const SmithDecomposition d0 = smith_form(S0);
  CHECK(d0.S.same_entries(S0));
  CHECK(d0.verify(S0));

  // [[psi, 1], [0, psi]] has Smith form diag(1, psi^2)
  MatPoly T(gf2, 2, 2, 0);
  T.at(0, 0) = ex.psi;
  T.at(0, 1) = Poly::one(gf2);
  T.at(1, 1) = ex.psi;
  T.tighten_grade();
  const SmithDecomposition d1 = smith_form(T);
  CHECK(d1.verify(T));
  CHECK(d1.S.at(0, 0).is_one());
  CHECK(d1.S.at(1, 1) == ex.psi.pow(2));
}

TEST_CASE("Smith form of the quasi-triangular witness is the known diagonal") {
  const Gf2Example ex;
  const MatPoly Q = fixture_matpoly("witness_finite.json");
  const SmithDecomposition d = smith_form(Q);
  CHECK(d.verify(Q));
  CHECK(d.S.same_entries(MatPoly::diagonal(ex.spec, ex.smith_diagonal())));
}

TEST_CASE("Smith form on random rectangular inputs") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 120; ++t) {
    const std::uint64_t p = std::vector<std::uint64_t>{2, 3, 5}[t % 3];
    const auto spec = FieldSpec::gf(p);
    const int m = 1 + static_cast<int>(rng() % 3), n = 1 + static_cast<int>(rng() % 3);
    const MatPoly P = random_matpoly(spec, m, n, 3, rng);
    const SmithDecomposition d = smith_form(P);
    CHECK(d.verify(P));
  }
}

TEST_CASE("Smith invariance under unimodular multiplication") {
  std::mt19937_64 rng(42);
  const auto gf2 = FieldSpec::gf(2);
  for (int t = 0; t < 30; ++t) {
    const MatPoly P = random_matpoly(gf2, 3, 3, 3, rng);
    const MatPoly U = random_unimodular(gf2, 3, rng);
    const MatPoly V = random_unimodular(gf2, 3, rng);
    CHECK(smith_form(U * P * V).S.same_entries(smith_form(P).S));
  }
}

TEST_CASE("minor-gcd characterization on random 3x3 inputs") {
  std::mt19937_64 rng(43);
  const auto gf2 = FieldSpec::gf(2);
  for (int t = 0; t < 25; ++t) {
    const MatPoly P = random_matpoly(gf2, 3, 3, 2, rng);
    const MatPoly S = smith_form(P).S;
    for (int j = 1; j <= 3; ++j) {
      // gcd of all j x j minors, brute force
      Poly g = Poly::zero(gf2);
      std::vector<int> rows, cols;
      for (int rmask = 0; rmask < 8; ++rmask) {
        if (__builtin_popcount(rmask) != j) continue;
        for (int cmask = 0; cmask < 8; ++cmask) {
          if (__builtin_popcount(cmask) != j) continue;
          MatPoly minor(gf2, j, j, 0);
          int ri = 0;
          for (int r = 0; r < 3; ++r) {
            if (!(rmask & (1 << r))) continue;
            int ci = 0;
            for (int c = 0; c < 3; ++c) {
              if (!(cmask & (1 << c))) continue;
              minor.at(ri, ci) = P.at(r, c);
              ++ci;
            }
            ++ri;
          }
          minor.tighten_grade();
          const Poly det = mp_determinant(minor);
          if (!det.is_zero()) g = g.is_zero() ? det.monic() : poly_gcd(g, det);
        }
      }
      Poly prod = Poly::one(gf2);
      bool zero = false;
      for (int i = 0; i < j; ++i) {
        if (S.at(i, i).is_zero()) zero = true;
        prod = prod * S.at(i, i);
      }
      if (zero || g.is_zero())
        CHECK((zero && g.is_zero()));
      else
        CHECK(prod.monic() == g);
    }
  }
}

TEST_CASE("partial multiplicities of the running example") {
  const Gf2Example ex;
  const MatPoly S = MatPoly::diagonal(ex.spec, ex.smith_diagonal());
  CHECK(partial_multiplicities(S, ex.chi) == PMSeq{0, 0, 1, 2, 3, 3});
  CHECK(partial_multiplicities(S, ex.phi) == PMSeq{0, 1, 1, 1, 1, 3});
  CHECK(partial_multiplicities(S, ex.psi) == PMSeq{0, 1, 1, 2, 2, 4});

  // coprime to the determinant: all zeros
  const Poly xi = Poly::from_ints(ex.spec, {1, 1, 0, 1});  // x^3+x+1, irreducible
  CHECK(partial_multiplicities(S, xi) == PMSeq{0, 0, 0, 0, 0, 0});

  CHECK_THROWS_AS(partial_multiplicities(S, ex.chi * ex.phi), Error);  // reducible
}

TEST_CASE("PM is invariant under unimodular equivalence and scalar multiples") {
  std::mt19937_64 rng(44);
  const auto gf3 = FieldSpec::gf(3);
  const Poly chi = Poly::from_ints(gf3, {1, 0, 1});  // x^2+1 irreducible over GF(3)
  REQUIRE(poly_is_irreducible(chi));
  for (int t = 0; t < 15; ++t) {
    const MatPoly P = random_regular(gf3, 3, 2, rng);
    const MatPoly U = random_unimodular(gf3, 3, rng);
    const MatPoly V = random_unimodular(gf3, 3, rng);
    CHECK(partial_multiplicities(U * P * V, chi) == partial_multiplicities(P, chi));
    const Poly two_chi = FieldElement::from_int(gf3, 2) * chi;
    CHECK(partial_multiplicities(P, two_chi) == partial_multiplicities(P, chi));
  }
}

TEST_CASE("infinite partial multiplicities") {
  const Gf2Example ex;
  const MatPoly Q = fixture_matpoly("witness_finite.json");
  CHECK(infinite_pm(Q) == PMSeq{0, 0, 0, 0, 0, 0});  // strictly regular

  const MatPoly Qt = fixture_matpoly("witness_reversal.json");
  CHECK(infinite_pm(Qt) == PMSeq{0, 1, 1, 2, 2, 4});

  // viewing at grade g+2 shifts every entry by 2
  CHECK(infinite_pm(grade_shift_view(Qt, 12)) == PMSeq{2, 3, 3, 4, 4, 6});
  CHECK(infinite_pm(grade_shift_view(Q, 11)) == PMSeq{1, 1, 1, 1, 1, 1});
}

TEST_CASE("index sum holds on random regular instances") {
  std::mt19937_64 rng(45);
  for (std::uint64_t p : {2ull, 3ull}) {
    const auto spec = FieldSpec::gf(p);
    for (int t = 0; t < 15; ++t) {
      const int n = 2 + static_cast<int>(rng() % 2);
      MatPoly P = random_regular(spec, n, 2, rng);
      P = P.with_grade(P.degree() + static_cast<int>(rng() % 2));
      const SpectralData d = extract_spectral_data(P);
      CHECK(d.index_sum() == static_cast<long long>(P.grade()) * n);
    }
  }
}

TEST_CASE("extracted spectral data of the fixtures") {
  const Gf2Example ex;
  const MatPoly Q = fixture_matpoly("witness_finite.json");
  const SpectralData d = extract_spectral_data(Q);
  CHECK(spectral_data_equal(d, ex.data_finite()));

  const MatPoly Qt = fixture_matpoly("witness_reversal.json");
  CHECK(spectral_data_equal(extract_spectral_data(Qt), ex.data_infinite()));

  const SpectralData di = extract_spectral_data(MatPoly::identity(ex.spec, 3));
  CHECK(di.finite.empty());
  CHECK(di.infinite == PMSeq{0, 0, 0});
}

TEST_CASE("Mobius and partial multiplicities commute (finite and infinite)") {
  std::mt19937_64 rng(46);
  for (std::uint64_t pr : {2ull, 3ull, 5ull}) {
    const auto spec = FieldSpec::gf(pr);
    for (int t = 0; t < 10; ++t) {
      const int n = 2 + static_cast<int>(rng() % 2);
      MatPoly P = random_regular(spec, n, 2, rng);
      P = P.with_grade(P.degree() + static_cast<int>(rng() % 2));
      const MobiusMatrix A = random_mobius(spec, rng);
      const MatPoly MP = mp_mobius(P, A);

      const SpectralData d = extract_spectral_data(P);
      std::vector<SpectralPoint> points;
      for (const auto& [c, pm] : d.finite) points.push_back(SpectralPoint::finite(c));
      points.push_back(SpectralPoint::infinity(spec));
      for (const SpectralPoint& pt : points) {
        const SpectralPoint img = mobius_point(pt, A);
        CHECK(partial_multiplicities(MP, img) == partial_multiplicities(P, pt));
      }
    }
  }
}

TEST_CASE("distinct monic irreducibles are coprime") {
  std::mt19937_64 rng(47);
  const auto gf2 = FieldSpec::gf(2);
  std::vector<Poly> irr;
  while (irr.size() < 6) {
    const Poly c = polyqt::testing::random_poly(gf2, 5, rng, true);
    if (!c.is_constant() && poly_is_irreducible(c)) irr.push_back(c.monic());
  }
  for (std::size_t i = 0; i < irr.size(); ++i)
    for (std::size_t j = i + 1; j < irr.size(); ++j)
      if (!(irr[i] == irr[j])) CHECK(poly_gcd(irr[i], irr[j]).is_one());
}

TEST_CASE("spectral equivalence") {
  const Gf2Example ex;
  const MatPoly Q = fixture_matpoly("witness_finite.json");
  CHECK(spectrally_equivalent(Q, Q));

  // reducing the (1,3) off-diagonal block of Qt spoils the infinite structure
  const MatPoly Qt = fixture_matpoly("witness_reversal.json");
  MatPoly spoiled = Qt;
  const MatPoly T33 = Qt.block(4, 4, 2, 2);
  REQUIRE(mp_leading_nonsingular(T33));
  const MatPoly T13 = Qt.block(0, 4, 2, 2);
  const auto [q, r] = mp_divide(T13, T33, DivisionSide::Right);
  spoiled.set_block(0, 4, r);
  spoiled.tighten_grade();
  REQUIRE(spoiled.degree() < 10);
  CHECK(smith_form(spoiled).S.same_entries(smith_form(Qt).S));  // finite part survives
  CHECK(!spectrally_equivalent(Qt.with_grade(10), spoiled.with_grade(10)));
}

TEST_CASE("Smith form is unchanged by elementary operations") {
  std::mt19937_64 rng(48);
  const auto gf2 = FieldSpec::gf(2);
  for (int t = 0; t < 15; ++t) {
    const MatPoly P = random_matpoly(gf2, 3, 3, 2, rng);
    const MatPoly S = smith_form(P).S;
    const Poly m = polyqt::testing::random_poly(gf2, 2, rng);
    for (const ElementaryOp& op :
         {ElementaryOp::swap_rows(gf2, 0, 2), ElementaryOp::swap_cols(gf2, 1, 2),
          ElementaryOp::scale_row(1, FieldElement::one(gf2)),
          ElementaryOp::add_row_mul(0, 1, m), ElementaryOp::add_col_mul(2, 0, m)}) {
      CHECK(smith_form(mp_elementary(P, op)).S.same_entries(S));
    }
  }
}

TEST_CASE("Smith form over the rationals stays exact") {
  std::mt19937_64 rng(49);
  const auto q = FieldSpec::rationals();
  for (int t = 0; t < 20; ++t) {
    const int m = 1 + static_cast<int>(rng() % 3), n = 1 + static_cast<int>(rng() % 3);
    const MatPoly P = random_matpoly(q, m, n, 3, rng);
    const SmithDecomposition d = smith_form(P);
    CHECK(d.verify(P));
  }
}

TEST_CASE("rational extraction requires complete divisor hints") {
  const auto q = FieldSpec::rationals();
  const Poly lin = Poly::from_ints(q, {-1, 1});
  const Poly quad = Poly::from_ints(q, {2, 0, 1});
  const MatPoly P = MatPoly::diagonal(q, {lin, lin * quad});
  CHECK_THROWS_AS(extract_spectral_data(P, {lin}), Error);  // quad missing
  const SpectralData d = extract_spectral_data(P, {lin, quad});
  CHECK(d.finite.size() == 2);
}
