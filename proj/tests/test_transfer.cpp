#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"
#include "polyqt/transfer.hpp"

using namespace polyqt;
using polyqt::testing::Gf2Example;

namespace {

MatPoly upper2(const FieldSpec& s, const Poly& p, const Poly& q, const Poly& r) {
  MatPoly t(s, 2, 2, 0);
  t.at(0, 0) = p;
  t.at(0, 1) = q;
  t.at(1, 1) = r;
  t.tighten_grade();
  return t;
}

// every coprime partition built from the distinct factors of the diagonal
std::vector<Poly> diag_distinct_factors(const MatPoly& T) {
  std::vector<Poly> out;
  for (int i = 0; i < T.rows(); ++i) {
    const Factorization f = poly_factor(T.at(i, i));
    for (const auto& [q, e] : f.factors) out.push_back(q);
  }
  std::sort(out.begin(), out.end(), [](const Poly& a, const Poly& b) { return lex_less(a, b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TEST_CASE("2x2 transfer moves the requested factor counts") {
  const Gf2Example ex;
  const auto gf2 = ex.spec;

  // diag(psi^2, psi), family {psi}, target (1, 2)
  const MatPoly T = upper2(gf2, ex.psi.pow(2), Poly::zero(gf2), ex.psi);
  const CoprimePartition F = CoprimePartition::of({ex.psi});
  const TransferResult tr = transfer_2x2(T, F, 1, 2);
  CHECK(tr.T_new.at(0, 0) == ex.psi);
  CHECK(tr.T_new.at(0, 1) == ex.psi);
  CHECK(tr.T_new.at(1, 0).is_zero());
  CHECK(tr.T_new.at(1, 1) == ex.psi.pow(2));
  CHECK(mp_is_unimodular(tr.E));
  CHECK(mp_is_unimodular(tr.F));
  CHECK(tr.E * T * tr.F == tr.T_new);

  // identity-permissible unchanged target
  const TransferResult same = transfer_2x2(T, F, 2, 1);
  CHECK(same.T_new == T);
  CHECK(mp_is_unimodular(same.E));

  // diag(chi phi, phi), family {chi}, target (0, 1): the phi's stay put
  const MatPoly T2 = upper2(gf2, ex.chi * ex.phi, Poly::zero(gf2), ex.phi);
  const CoprimePartition Fc = CoprimePartition::of({ex.chi});
  const TransferResult tr2 = transfer_2x2(T2, Fc, 0, 1);
  CHECK(family_count(tr2.T_new.at(0, 0), Fc) == 0);
  CHECK(family_count(tr2.T_new.at(1, 1), Fc) == 1);
  const CoprimePartition Fp = CoprimePartition::of({ex.phi});
  CHECK(family_count(tr2.T_new.at(0, 0), Fp) == 1);
  CHECK(family_count(tr2.T_new.at(1, 1), Fp) == 1);
  CHECK(tr2.E * T2 * tr2.F == tr2.T_new);
  CHECK(smith_form(tr2.T_new).S.same_entries(smith_form(T2).S));

  // out-of-range target
  CHECK_THROWS_AS(transfer_2x2(T, F, 3, 0), Error);
  CHECK_THROWS_AS(transfer_2x2(T, F, 4, -1), Error);
}

TEST_CASE("transfer preserves the G side exactly") {
  const Gf2Example ex;
  const auto gf2 = ex.spec;
  const MatPoly T = upper2(gf2, ex.chi.pow(2) * ex.phi * ex.psi.pow(2), ex.chi * ex.phi * ex.psi,
                           ex.chi * ex.phi * ex.psi.pow(2));
  const CoprimePartition F = CoprimePartition::of({ex.chi});
  const TransferResult tr = transfer_2x2(T, F, 1, 2);
  // psi/phi multiplicities of the diagonal are untouched
  for (int i = 0; i < 2; ++i) {
    CHECK(multiplicity_in(ex.psi, tr.T_new.at(i, i)) == multiplicity_in(ex.psi, T.at(i, i)));
    CHECK(multiplicity_in(ex.phi, tr.T_new.at(i, i)) == multiplicity_in(ex.phi, T.at(i, i)));
  }
  CHECK(tr.E * T * tr.F == tr.T_new);
}

TEST_CASE("embedded transfer acts only on the chosen pair") {
  const Gf2Example ex;
  const MatPoly S = MatPoly::diagonal(ex.spec, ex.smith_diagonal());
  const CoprimePartition F = CoprimePartition::of({ex.psi});
  // psi counts at positions (4, 5) are (2, 4); rebalance them to (3, 3)
  const MatPoly P = embed_transfer(S, 4, F, 3, 3);
  CHECK(mp_is_upper_triangular(P));
  for (int i = 0; i < 4; ++i) CHECK(P.at(i, i) == S.at(i, i));
  CHECK(family_count(P.at(4, 4), F) == 3);
  CHECK(family_count(P.at(5, 5), F) == 3);
  CHECK(smith_form(P).S.same_entries(S));
}

TEST_CASE("permute_diagonal") {
  const Gf2Example ex;
  const auto gf2 = ex.spec;
  const MatPoly D = MatPoly::diagonal(gf2, {ex.psi, ex.psi.pow(2)});
  const MatPoly Dp = permute_diagonal(D, {1, 0});
  CHECK(Dp.at(0, 0) == ex.psi.pow(2));
  CHECK(Dp.at(1, 1) == ex.psi);
  CHECK(smith_form(Dp).S.same_entries(smith_form(D).S));

  const MatPoly S = MatPoly::diagonal(gf2, ex.smith_diagonal());
  CHECK(permute_diagonal(S, {0, 1, 2, 3, 4, 5}) == S);

  // swap of full adjacent entries at positions (2, 3)
  const MatPoly Sw = permute_diagonal(S, {0, 1, 3, 2, 4, 5});
  CHECK(Sw.at(2, 2) == S.at(3, 3));
  CHECK(Sw.at(3, 3) == S.at(2, 2));
  CHECK(mp_is_upper_triangular(Sw));
  CHECK(smith_form(Sw).S.same_entries(S));

  CHECK_THROWS_AS(permute_diagonal(S, {0, 0, 2, 3, 4, 5}), Error);
}

TEST_CASE("drive_diagonal reaches the stacking layout of the running example") {
  const Gf2Example ex;
  const MatPoly S = MatPoly::diagonal(ex.spec, ex.smith_diagonal());
  std::vector<Poly> mset;
  for (int i = 0; i < 9; ++i) mset.push_back(ex.chi);
  for (int i = 0; i < 7; ++i) mset.push_back(ex.phi);
  for (int i = 0; i < 10; ++i) mset.push_back(ex.psi);
  const StackingLayout layout = stack_factors(mset, 6);
  const MatPoly T = drive_diagonal(S, layout);
  CHECK(mp_is_upper_triangular(T));
  NatVec degs;
  for (int i = 0; i < 6; ++i) degs.push_back(T.at(i, i).degree());
  CHECK(degs == NatVec{12, 12, 11, 9, 8, 8});
  CHECK(smith_form(T).S.same_entries(S));

  // permutation of the homogeneous-partition example applied afterwards
  const MatPoly Tp = permute_diagonal(T, {0, 4, 1, 5, 2, 3});
  NatVec pdegs;
  for (int i = 0; i < 6; ++i) pdegs.push_back(Tp.at(i, i).degree());
  CHECK(pdegs == NatVec{12, 8, 12, 8, 11, 9});
  CHECK(smith_form(Tp).S.same_entries(S));
}

TEST_CASE("drive_diagonal no-ops when the layout already matches") {
  const Gf2Example ex;
  const MatPoly S = MatPoly::diagonal(ex.spec, {ex.psi, ex.psi.pow(2)});
  StackingLayout layout;
  layout.n = 2;
  layout.columns = {{ex.psi}, {ex.psi, ex.psi}};
  layout.column_products = {ex.psi, ex.psi.pow(2)};
  layout.degrees = {1, 2};
  layout.family_counts[1] = {1, 2};
  CHECK(drive_diagonal(S, layout) == S);
}

TEST_CASE("drive_diagonal on random GF(2) Smith forms") {
  std::mt19937_64 rng(61);
  const Gf2Example ex;
  const std::vector<Poly> pool = {ex.psi, Poly::from_ints(ex.spec, {1, 1}), ex.phi, ex.chi};
  int done = 0;
  while (done < 15) {
    const int n = 2 + static_cast<int>(rng() % 3);
    // random divisibility chain from the pool
    std::vector<Poly> diag(static_cast<std::size_t>(n), Poly::one(ex.spec));
    std::vector<Poly> mset;
    for (const Poly& f : pool) {
      int prev = 0;
      for (int i = 0; i < n; ++i) {
        const int e = prev + static_cast<int>(rng() % 2);
        diag[static_cast<std::size_t>(i)] = diag[static_cast<std::size_t>(i)] * f.pow(e);
        for (int c = 0; c < e; ++c) mset.push_back(f);
        prev = e;
      }
    }
    if (mset.empty()) continue;
    ++done;
    const MatPoly S = MatPoly::diagonal(ex.spec, diag);
    const StackingLayout layout = stack_factors(mset, n);
    const MatPoly T = drive_diagonal(S, layout);
    CHECK(mp_is_upper_triangular(T));
    CHECK(smith_form(T).S.same_entries(S));
    for (int i = 0; i < n; ++i)
      CHECK(T.at(i, i).degree_or(0) == layout.degrees[static_cast<std::size_t>(i)]);

    // the majorization relations hold for every degree family on the output
    for (const Poly& f : diag_distinct_factors(T)) {
      const CoprimePartition F = CoprimePartition::of({f});
      CHECK(majorizes(diag_factor_counts(S, F), diag_factor_counts(T, F)));
    }
  }
}

TEST_CASE("drive_diagonal validates the layout") {
  const Gf2Example ex;
  const MatPoly S = MatPoly::diagonal(ex.spec, {ex.psi, ex.psi.pow(2)});
  const StackingLayout wrong = stack_factors({ex.phi, ex.phi, ex.phi}, 2);
  CHECK_THROWS_AS(drive_diagonal(S, wrong), Error);
}
