#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace polyqt;
using polyqt::testing::Gf2Example;
using polyqt::testing::random_poly;

TEST_CASE("factorization of the worked GF(2) polynomials") {
  const Gf2Example ex;
  const auto gf2 = ex.spec;

  // x^2 + 1 = (x+1)^2 in characteristic 2
  const Factorization f1 = poly_factor(Poly::from_ints(gf2, {1, 0, 1}));
  REQUIRE(f1.factors.size() == 1);
  CHECK(f1.factors[0].first == Poly::from_ints(gf2, {1, 1}));
  CHECK(f1.factors[0].second == 2);

  // chi is irreducible
  const Factorization f2 = poly_factor(ex.chi);
  REQUIRE(f2.factors.size() == 1);
  CHECK(f2.factors[0].first == ex.chi);
  CHECK(f2.factors[0].second == 1);

  // s5 = chi^3 phi^3 psi^4
  const Poly s5 = ex.chi.pow(3) * ex.phi.pow(3) * ex.psi.pow(4);
  const Factorization f3 = poly_factor(s5);
  REQUIRE(f3.factors.size() == 3);
  CHECK(f3.factors[0].first == ex.psi);
  CHECK(f3.factors[0].second == 4);
  CHECK(f3.factors[1].first == ex.phi);
  CHECK(f3.factors[1].second == 3);
  CHECK(f3.factors[2].first == ex.chi);
  CHECK(f3.factors[2].second == 3);
}

TEST_CASE("factorization reconstructs and yields irreducibles") {
  std::mt19937_64 rng(21);
  for (std::uint64_t pr : {2ull, 3ull, 5ull}) {
    const auto spec = FieldSpec::gf(pr);
    for (int t = 0; t < 60; ++t) {
      const Poly a = random_poly(spec, 9, rng, true);
      const Factorization f = poly_factor(a, t);
      CHECK(f.reconstruct(spec) == a);
      for (const auto& [q, e] : f.factors) {
        CHECK(q.lead().is_one());
        CHECK(poly_is_irreducible(q));
        CHECK(e >= 1);
      }
      // scaling by a nonzero constant changes only the unit
      const FieldElement c = FieldElement::from_residue(spec, 1 + rng() % (pr - 1 ? pr - 1 : 1));
      const Factorization g = poly_factor(c * a, t);
      REQUIRE(g.factors.size() == f.factors.size());
      for (std::size_t i = 0; i < f.factors.size(); ++i) {
        CHECK(g.factors[i].first == f.factors[i].first);
        CHECK(g.factors[i].second == f.factors[i].second);
      }
    }
  }
}

TEST_CASE("factorization is deterministic for a fixed seed") {
  const auto gf5 = FieldSpec::gf(5);
  std::mt19937_64 rng(22);
  const Poly a = random_poly(gf5, 10, rng, true) * random_poly(gf5, 10, rng, true);
  const Factorization f1 = poly_factor(a, 42), f2 = poly_factor(a, 42);
  REQUIRE(f1.factors.size() == f2.factors.size());
  for (std::size_t i = 0; i < f1.factors.size(); ++i) CHECK(f1.factors[i] == f2.factors[i]);
}

TEST_CASE("rational factorization is refused") {
  const auto q = FieldSpec::rationals();
  CHECK_THROWS_AS(poly_factor(Poly::from_ints(q, {1, 0, 1})), Error);
}

TEST_CASE("irreducibility test") {
  const Gf2Example ex;
  const auto gf2 = ex.spec;
  CHECK(poly_is_irreducible(ex.phi));                          // x^2+x+1
  CHECK(!poly_is_irreducible(Poly::from_ints(gf2, {1, 0, 1})));  // root at 1
  CHECK(poly_is_irreducible(Poly::x(FieldSpec::gf(7))));       // degree 1
  CHECK(poly_is_irreducible(ex.chi));
  CHECK(!poly_is_irreducible(ex.chi * ex.phi));
}
