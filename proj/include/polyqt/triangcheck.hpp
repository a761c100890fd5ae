#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "polyqt/quasitri.hpp"

namespace polyqt {

// Degree deficits d - deg(q_i) of the stacked columns of the degree >= 2
// factors; entries may be negative.
struct GapVector {
  IntVec entries;
};

enum class TriangVerdict { Guaranteed, CharacterizedNo, Unknown };

inline const char* verdict_name(TriangVerdict v) {
  switch (v) {
    case TriangVerdict::Guaranteed: return "guaranteed";
    case TriangVerdict::CharacterizedNo: return "no";
    case TriangVerdict::Unknown: return "unknown";
  }
  return "unknown";
}

struct TriangReport {
  TriangVerdict verdict = TriangVerdict::Unknown;
  std::string condition;  // the inequality that was checked
  std::optional<MatPoly> witness;
};

namespace detail {

inline std::string vec_str(const IntVec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

// Factor multiset of the data restricted to degrees in [lo, hi].
inline std::vector<Poly> factors_in_degree_range(const SpectralData& d, int lo, int hi) {
  std::vector<Poly> out;
  for (const auto& [chi, pm] : d.finite) {
    if (chi.degree() < lo || chi.degree() > hi) continue;
    for (int e : pm)
      for (int c = 0; c < e; ++c) out.push_back(chi);
  }
  return out;
}

// Per-position counts of degree-deg factors along the Smith diagonal.
inline NatVec smith_family_counts(const SpectralData& d, int deg) {
  NatVec v(static_cast<std::size_t>(d.n), 0);
  for (const auto& [chi, pm] : d.finite) {
    if (chi.degree() != deg) continue;
    for (int i = 0; i < d.n; ++i) v[static_cast<std::size_t>(i)] += pm[static_cast<std::size_t>(i)];
  }
  return v;
}

inline void require_finite_data(const SpectralData& d) {
  check(d.infinite_count() == 0, Errc::Unsupported,
        "triangularizability analysis expects purely finite data; apply a Mobius "
        "transformation first");
}

}  // namespace detail

// Gap vector of the data at target degree d and size n: stack the
// degree >= min_deg factors, list column degrees ascending, and take the
// deficits below d.
inline GapVector gap_vector(const SpectralData& data, int d, int n, int min_deg = 2) {
  detail::require_finite_data(data);
  check(data.index_sum() == static_cast<long long>(d) * n, Errc::IndexSumViolation,
        "d * n must equal the index sum");
  const std::vector<Poly> big = detail::factors_in_degree_range(data, min_deg, 1 << 20);
  GapVector g;
  if (big.empty()) {
    g.entries.assign(static_cast<std::size_t>(n), d);
    return g;
  }
  const StackingLayout layout = stack_factors(big, n);
  for (std::size_t i = layout.degrees.size(); i-- > 0;)
    g.entries.push_back(d - layout.degrees[i]);
  return g;
}

// Shared witness construction: stack the high-degree factors, fill the gaps
// with the filler family (degree fill_deg), drive, and clean up with 1x1
// blocks. Requires the majorization to have been established.
inline MatPoly build_triangularization_with_filler(const SpectralData& data_in, int d, int n,
                                                   int fill_deg) {
  detail::require_finite_data(data_in);
  SpectralData data = detail::resize_data(data_in, n);
  check(data.index_sum() == static_cast<long long>(d) * n, Errc::IndexSumViolation,
        "d * n must equal the index sum");
  const FieldSpec spec = data.spec;
  const MatPoly S = MatPoly::diagonal(spec, data.invariants);

  std::vector<Poly> big;
  for (const auto& [chi, pm] : data.finite) {
    if (chi.degree() == fill_deg) continue;
    for (int e : pm)
      for (int c = 0; c < e; ++c) big.push_back(chi);
  }
  std::vector<Poly> filler;
  for (const auto& [chi, pm] : data.finite) {
    if (chi.degree() != fill_deg) continue;
    for (int e : pm)
      for (int c = 0; c < e; ++c) filler.push_back(chi);
  }

  StackingLayout layout = big.empty() ? StackingLayout{} : stack_factors(big, n);
  if (big.empty()) {
    layout.n = n;
    layout.columns.assign(static_cast<std::size_t>(n), {});
    layout.column_products.assign(static_cast<std::size_t>(n), Poly::one(spec));
    layout.degrees.assign(static_cast<std::size_t>(n), 0);
  }
  // distribute the filler so each column reaches degree d exactly
  std::sort(filler.begin(), filler.end(),
            [](const Poly& a, const Poly& b) { return lex_less(a, b); });
  std::size_t next = 0;
  for (int i = 0; i < n; ++i) {
    const long long deficit = d - layout.degrees[static_cast<std::size_t>(i)];
    check(deficit >= 0 && deficit % fill_deg == 0, Errc::ConditionNotEstablished,
          "gap not fillable by the filler family");
    for (long long c = 0; c < deficit / fill_deg; ++c) {
      check(next < filler.size(), Errc::ConditionNotEstablished, "not enough filler factors");
      const Poly& f = filler[next++];
      layout.columns[static_cast<std::size_t>(i)].push_back(f);
      layout.column_products[static_cast<std::size_t>(i)] =
          layout.column_products[static_cast<std::size_t>(i)] * f;
      layout.degrees[static_cast<std::size_t>(i)] += fill_deg;
      layout.family_counts.try_emplace(fill_deg, NatVec(static_cast<std::size_t>(n), 0));
      layout.family_counts[fill_deg][static_cast<std::size_t>(i)] += 1;
    }
  }
  check(next == filler.size(), Errc::ConditionNotEstablished, "filler factors left over");

  MatPoly T = drive_diagonal(S, layout);
  BlockStructure ones;
  ones.sizes.assign(static_cast<std::size_t>(n), 1);
  T = reduce_offdiagonal(T, ones);
  check(mp_is_upper_triangular(T) && T.degree_or(0) == d, Errc::ConditionNotEstablished,
        "triangular witness construction failed");
  const SmithDecomposition sd = smith_form(T);
  const MatPoly expect = MatPoly::diagonal(spec, data.invariants);
  check(sd.S.same_entries(expect), Errc::ConditionNotEstablished, "witness changed the Smith form");
  return T.with_grade(d);
}

// Two-degree characterization: irreducible divisors of degrees {l, k} with
// l | k and l | d. Triangularizable iff l * (degree-l counting vector of the
// Smith diagonal) majorizes the gap vector of the spread-out degree-k part.
inline TriangReport check_two_degree(const SpectralData& data_in, int d, int n) {
  detail::require_finite_data(data_in);
  SpectralData data = detail::resize_data(data_in, n);
  check(data.index_sum() == static_cast<long long>(d) * n, Errc::IndexSumViolation,
        "d * n must equal the index sum");

  std::set<int> degs;
  for (const auto& [chi, pm] : data.finite)
    if (!pm.empty() && pm.back() > 0) degs.insert(chi.degree());
  check(degs.size() <= 2, Errc::HypothesisViolated,
        "characterization needs at most two distinct divisor degrees");

  TriangReport rep;
  int ell = 1;
  if (degs.size() == 2) {
    ell = *degs.begin();
    const int k = *degs.rbegin();
    if (ell >= 2)
      check(k % ell == 0 && d % ell == 0, Errc::HypothesisViolated,
            "the scaled characterization needs l | k and l | d");
  }

  // gap vector from the high-degree side only (everything of degree > ell)
  std::vector<Poly> big =
      detail::factors_in_degree_range(data, std::max(2, ell + 1), 1 << 20);
  IntVec gaps;
  if (big.empty()) {
    gaps.assign(static_cast<std::size_t>(n), d);
  } else {
    const StackingLayout layout = stack_factors(big, n);
    for (std::size_t i = layout.degrees.size(); i-- > 0;) gaps.push_back(d - layout.degrees[i]);
  }

  IntVec lhs = detail::smith_family_counts(data, ell);
  for (long long& c : lhs) c *= ell;

  const bool ok = majorizes(lhs, gaps);
  rep.condition = std::to_string(ell) + " * f_" + std::to_string(ell) + " = " +
                  detail::vec_str(lhs) + (ok ? " majorizes " : " does not majorize ") + "g = " +
                  detail::vec_str(gaps);
  if (ok) {
    rep.verdict = TriangVerdict::Guaranteed;
    rep.witness = build_triangularization_with_filler(data, d, n, ell);
  } else {
    rep.verdict = TriangVerdict::CharacterizedNo;
  }
  return rep;
}

// General sufficient condition: if the degree-1 counting vector majorizes
// the gap vector of the stacked degree >= 2 factors, a triangularization
// exists; otherwise nothing is claimed.
inline TriangReport check_sufficient(const SpectralData& data_in, int d, int n) {
  detail::require_finite_data(data_in);
  SpectralData data = detail::resize_data(data_in, n);
  check(data.index_sum() == static_cast<long long>(d) * n, Errc::IndexSumViolation,
        "d * n must equal the index sum");
  const GapVector g = gap_vector(data, d, n);
  const IntVec f1 = detail::smith_family_counts(data, 1);
  const bool ok = majorizes(f1, g.entries);
  TriangReport rep;
  rep.condition = "f_1 = " + detail::vec_str(f1) + (ok ? " majorizes " : " does not majorize ") +
                  "g = " + detail::vec_str(g.entries);
  if (ok) {
    rep.verdict = TriangVerdict::Guaranteed;
    rep.witness = build_triangularization_with_filler(data, d, n, 1);
  } else {
    rep.verdict = TriangVerdict::Unknown;
  }
  return rep;
}

// Witness for an established verdict: the sufficient condition first, then
// the scaled two-degree route.
inline MatPoly build_triangularization(const SpectralData& data, int d, int n) {
  {
    const GapVector g = gap_vector(data, d, n);
    const IntVec f1 = detail::smith_family_counts(data, 1);
    if (majorizes(f1, g.entries)) return build_triangularization_with_filler(data, d, n, 1);
  }
  std::set<int> degs;
  for (const auto& [chi, pm] : data.finite)
    if (!pm.empty() && pm.back() > 0) degs.insert(chi.degree());
  if (degs.size() == 2) {
    const int ell = *degs.begin(), k = *degs.rbegin();
    if (ell >= 2 && k % ell == 0 && d % ell == 0) {
      TriangReport rep = check_two_degree(data, d, n);
      if (rep.verdict == TriangVerdict::Guaranteed && rep.witness) return *rep.witness;
    }
  }
  fail(Errc::ConditionNotEstablished, "no checker established a triangularization");
}

}  // namespace polyqt
