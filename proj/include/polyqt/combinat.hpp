#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "polyqt/poly.hpp"

namespace polyqt {

using NatVec = std::vector<long long>;
using IntVec = std::vector<long long>;

// Adjacent-entry operation on a natural vector. An interchange swaps
// positions i and i+1; a compression replaces (v_i, v_{i+1}) by (alpha, beta)
// with the same sum and strictly smaller spread.
struct VecOp {
  enum class Kind { Interchange, Compression };
  Kind kind;
  int i;
  long long alpha = 0, beta = 0;

  static VecOp interchange(int i) { return {Kind::Interchange, i, 0, 0}; }
  static VecOp compression(int i, long long a, long long b) {
    return {Kind::Compression, i, a, b};
  }
};

using OpSequence = std::vector<VecOp>;

// Apply ops to v, validating legality of every step.
inline NatVec replay_ops(NatVec v, const OpSequence& ops) {
  for (const VecOp& op : ops) {
    check(op.i >= 0 && op.i + 1 < static_cast<int>(v.size()), Errc::IndexOutOfRange, "op position");
    long long& a = v[static_cast<std::size_t>(op.i)];
    long long& b = v[static_cast<std::size_t>(op.i) + 1];
    if (op.kind == VecOp::Kind::Interchange) {
      std::swap(a, b);
    } else {
      const long long lo = std::min(a, b), hi = std::max(a, b);
      check(op.alpha + op.beta == a + b, Errc::TargetOutOfRange, "compression sum");
      check(lo < op.alpha && op.alpha < hi && lo < op.beta && op.beta < hi,
            Errc::TargetOutOfRange, "compression must move strictly inward");
      a = op.alpha;
      b = op.beta;
    }
  }
  return v;
}

// x majorizes y: decreasing-sorted prefix sums dominate, totals equal.
inline bool majorizes(const IntVec& x, const IntVec& y) {
  check(x.size() == y.size(), Errc::LengthMismatch, "majorization needs equal lengths");
  IntVec xs = x, ys = y;
  std::sort(xs.rbegin(), xs.rend());
  std::sort(ys.rbegin(), ys.rend());
  long long px = 0, py = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    px += xs[i];
    py += ys[i];
    if (px < py) return false;
  }
  return px == py;
}

namespace detail {

// Move the entry at `from` to `to` by adjacent interchanges, recording ops.
inline void move_entry(NatVec& w, OpSequence& ops, int from, int to) {
  while (from < to) {
    ops.push_back(VecOp::interchange(from));
    std::swap(w[static_cast<std::size_t>(from)], w[static_cast<std::size_t>(from) + 1]);
    ++from;
  }
  while (from > to) {
    --from;
    ops.push_back(VecOp::interchange(from));
    std::swap(w[static_cast<std::size_t>(from)], w[static_cast<std::size_t>(from) + 1]);
  }
}

}  // namespace detail

// Transform v into a homogenization of itself (q's and q+1's) using
// interchanges and at most r-1 compressions. Retired entries accumulate at
// the tail; each compression is aimed to mint one exact q or q+1.
inline std::pair<NatVec, OpSequence> homogenize_vector(const NatVec& v) {
  const int r = static_cast<int>(v.size());
  NatVec w = v;
  OpSequence ops;
  if (r == 0) return {w, ops};
  const long long s = std::accumulate(v.begin(), v.end(), 0ll);
  const long long q = s / r;  // entries are naturals, s >= 0
  long long need_q1 = s - q * r;
  long long need_q = r - need_q1;

  int act = r;
  while (act > 0) {
    int retire = -1;
    for (int i = act - 1; i >= 0; --i) {
      const long long x = w[static_cast<std::size_t>(i)];
      if ((x == q && need_q > 0) || (x == q + 1 && need_q1 > 0)) { retire = i; break; }
    }
    if (retire >= 0) {
      if (w[static_cast<std::size_t>(retire)] == q) --need_q; else --need_q1;
      detail::move_entry(w, ops, retire, act - 1);
      --act;
      continue;
    }
    // mint a q (preferred while still needed) or a q+1 by one compression
    const long long val = need_q > 0 ? q : q + 1;
    int hi = -1, lo = -1;
    for (int i = 0; i < act; ++i) {
      if (hi < 0 && w[static_cast<std::size_t>(i)] > val) hi = i;
      if (lo < 0 && w[static_cast<std::size_t>(i)] < val) lo = i;
    }
    check(hi >= 0 && lo >= 0, Errc::TargetOutOfRange, "homogenization invariant broken");
    const int a = std::min(hi, lo), b = std::max(hi, lo);
    detail::move_entry(w, ops, b, a + 1);
    const long long sum = w[static_cast<std::size_t>(a)] + w[static_cast<std::size_t>(a) + 1];
    ops.push_back(VecOp::compression(a, val, sum - val));
    w[static_cast<std::size_t>(a)] = val;
    w[static_cast<std::size_t>(a) + 1] = sum - val;
  }
  return {w, ops};
}

// Script of interchanges and compressions turning x into y exactly (y in its
// given order); requires x majorize y. Unit Robin Hood transfers on the
// descending-sorted vector, donors and recipients made adjacent and the
// interchanges undone afterwards.
inline OpSequence realize_majorization(const NatVec& x, const NatVec& y) {
  check(x.size() == y.size(), Errc::LengthMismatch, "realize_majorization lengths");
  check(majorizes(x, y), Errc::NotMajorized, "x does not majorize y");
  const int n = static_cast<int>(x.size());
  NatVec w = x;
  OpSequence ops;

  // sort w descending by adjacent interchanges (bubble, deterministic)
  for (int pass = 0; pass < n; ++pass)
    for (int i = 0; i + 1 < n; ++i)
      if (w[static_cast<std::size_t>(i)] < w[static_cast<std::size_t>(i) + 1]) {
        ops.push_back(VecOp::interchange(i));
        std::swap(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(i) + 1]);
      }
  NatVec ys = y;
  std::sort(ys.rbegin(), ys.rend());

  for (;;) {
    int i = -1, j = -1;
    for (int t = 0; t < n; ++t)
      if (w[static_cast<std::size_t>(t)] != ys[static_cast<std::size_t>(t)]) { i = t; break; }
    if (i < 0) break;
    for (int t = i + 1; t < n; ++t)
      if (w[static_cast<std::size_t>(t)] < ys[static_cast<std::size_t>(t)]) { j = t; break; }
    check(j > i, Errc::NotMajorized, "transfer target missing");
    // rightmost entry tied with w[i], leftmost tied with w[j]: unit transfer
    // between them preserves the descending order
    int donor = i, recv = j;
    while (donor + 1 < n && w[static_cast<std::size_t>(donor) + 1] == w[static_cast<std::size_t>(i)])
      ++donor;
    while (recv - 1 >= 0 && w[static_cast<std::size_t>(recv) - 1] == w[static_cast<std::size_t>(j)])
      --recv;
    const std::size_t d = static_cast<std::size_t>(donor), rcv = static_cast<std::size_t>(recv);
    // move recipient adjacent to donor, compress by one unit, move it back
    detail::move_entry(w, ops, recv, donor + 1);
    ops.push_back(VecOp::compression(donor, w[d] - 1, w[static_cast<std::size_t>(donor) + 1] + 1));
    w[d] -= 1;
    w[static_cast<std::size_t>(donor) + 1] += 1;
    detail::move_entry(w, ops, donor + 1, recv);
    (void)rcv;
  }

  // final permutation from the sorted vector to y's given order
  for (int pos = 0; pos < n; ++pos) {
    int idx = -1;
    for (int t = pos; t < n; ++t)
      if (w[static_cast<std::size_t>(t)] == y[static_cast<std::size_t>(pos)]) { idx = t; break; }
    check(idx >= 0, Errc::NotMajorized, "permutation phase lost an entry");
    detail::move_entry(w, ops, idx, pos);
  }
  return ops;
}

// Column layout from the stacking construction: the multiset distributed
// over n columns so the degree vector is k-homogeneous and every per-degree
// count vector is 1-homogeneous.
struct StackingLayout {
  int n = 0;
  std::vector<std::vector<Poly>> columns;  // irreducible factors per column
  std::vector<Poly> column_products;
  NatVec degrees;
  std::map<int, NatVec> family_counts;  // degree -> per-column counts
};

inline StackingLayout stack_factors(std::vector<Poly> factors, int n) {
  check(n >= 1, Errc::TooSmall, "stacking needs a positive column count");
  StackingLayout out;
  out.n = n;
  FieldSpec spec = factors.empty() ? FieldSpec::gf(2) : factors.front().spec();
  for (Poly& f : factors) {
    check(!f.is_zero() && !f.is_constant(), Errc::NotIrreducible, "stacking needs nonconstant factors");
    f = f.monic();
    spec = f.spec();
  }
  // decreasing degree, lex within a degree class
  std::sort(factors.begin(), factors.end(), [](const Poly& a, const Poly& b) {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    return lex_less(a, b);
  });
  while (factors.size() % static_cast<std::size_t>(n) != 0)
    factors.push_back(Poly::one(spec));  // constant padding

  out.columns.assign(static_cast<std::size_t>(n), {});
  out.column_products.assign(static_cast<std::size_t>(n), Poly::one(spec));
  out.degrees.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t idx = 0; idx < factors.size(); ++idx) {
    const std::size_t col = idx % static_cast<std::size_t>(n);
    const Poly& f = factors[idx];
    if (f.is_one()) continue;
    out.columns[col].push_back(f);
    out.column_products[col] = out.column_products[col] * f;
    out.degrees[col] += f.degree();
    out.family_counts.try_emplace(f.degree(), NatVec(static_cast<std::size_t>(n), 0));
    out.family_counts[f.degree()][col] += 1;
  }
  return out;
}

// Generator (b/d, a/d) of the solution lattice of a*x = b*y.
inline std::pair<long long, long long> solve_dio(long long a, long long b) {
  check(a > 0 && b > 0, Errc::TargetOutOfRange, "solve_dio needs positive inputs");
  const long long d = std::gcd(a, b);
  return {b / d, a / d};
}

// Ordered partition of positions into groups of size <= k, each averaging mu.
struct Partitioning {
  std::vector<std::vector<int>> groups;  // original indices, emission order
};

// The translate-to-zero procedure: split zeros off as singletons, solve the
// endpoints-only case through the diophantine lattice, otherwise grow a
// sublist by the opposite-sign rule with repeated-partial-sum splitting.
inline Partitioning homogeneous_partition(const IntVec& v, int k, long long mu) {
  const int m = static_cast<int>(v.size());
  check(k >= 1, Errc::TooSmall, "window must have positive length");
  Partitioning out;
  if (m == 0) return out;
  long long sum = std::accumulate(v.begin(), v.end(), 0ll);
  check(sum == mu * m, Errc::AverageNotMu, "average of the entries must be exactly mu");

  long long lo = mu, hi = mu;
  for (long long x : v) { lo = std::min(lo, x); hi = std::max(hi, x); }
  check(hi - lo <= k, Errc::EntriesOutOfWindow, "entries exceed a window of length k");
  const long long el = lo - mu, er = el + k;  // translated window, el <= 0 <= er

  std::vector<int> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), 0);
  auto val = [&](int idx) { return v[static_cast<std::size_t>(idx)] - mu; };

  while (!pool.empty()) {
    // (a) zero entries split off as singletons
    auto zit = std::find_if(pool.begin(), pool.end(), [&](int i) { return val(i) == 0; });
    if (zit != pool.end()) {
      out.groups.push_back({*zit});
      pool.erase(zit);
      continue;
    }
    // (b) everything at the endpoints
    const bool endpoints_only =
        std::all_of(pool.begin(), pool.end(), [&](int i) { return val(i) == el || val(i) == er; });
    if (endpoints_only) {
      std::vector<int> low, high;
      for (int i : pool)
        (val(i) == el ? low : high).push_back(i);
      const auto [per_low, per_high] = solve_dio(-el, er);  // e_r/d copies of el, -e_l/d of er
      std::size_t li = 0, hi2 = 0;
      while (li < low.size() || hi2 < high.size()) {
        std::vector<int> g;
        for (long long c = 0; c < per_high; ++c) g.push_back(high[hi2++]);
        for (long long c = 0; c < per_low; ++c) g.push_back(low[li++]);
        out.groups.push_back(std::move(g));
      }
      pool.clear();
      continue;
    }
    // (c) grow from the lowest-index interior entry by the opposite-sign rule
    auto sit = std::find_if(pool.begin(), pool.end(),
                            [&](int i) { return val(i) > el && val(i) < er; });
    check(sit != pool.end(), Errc::EntriesOutOfWindow, "partition invariant broken");
    std::vector<int> sublist{*sit};
    pool.erase(sit);
    std::vector<long long> sums{val(sublist[0])};
    while (sums.back() != 0 && static_cast<int>(sublist.size()) < k - 1) {
      const bool want_neg = sums.back() > 0;
      auto oit = std::find_if(pool.begin(), pool.end(), [&](int i) {
        return want_neg ? val(i) < 0 : val(i) > 0;
      });
      check(oit != pool.end(), Errc::AverageNotMu, "no opposite-sign entry left");
      sublist.push_back(*oit);
      pool.erase(oit);
      sums.push_back(sums.back() + val(sublist.back()));
    }
    if (sums.back() != 0) {
      // k-1 nonzero partial sums over k-2 interior values: a repeat brackets
      // a zero-sum subsegment
      int p = -1, j = -1;
      for (std::size_t b2 = 1; b2 < sums.size() && p < 0; ++b2)
        for (std::size_t a2 = 0; a2 < b2; ++a2)
          if (sums[a2] == sums[b2]) { p = static_cast<int>(a2); j = static_cast<int>(b2); break; }
      check(p >= 0, Errc::EntriesOutOfWindow, "partial sums must repeat inside the window");
      std::vector<int> grp(sublist.begin() + p + 1, sublist.begin() + j + 1);
      for (int t = 0; t <= p; ++t) pool.push_back(sublist[static_cast<std::size_t>(t)]);
      for (std::size_t t = static_cast<std::size_t>(j) + 1; t < sublist.size(); ++t)
        pool.push_back(sublist[t]);
      std::sort(pool.begin(), pool.end());
      sublist = std::move(grp);
    }
    out.groups.push_back(std::move(sublist));
  }

  // deterministic presentation: groups ordered by their smallest position
  std::sort(out.groups.begin(), out.groups.end(), [](const auto& a, const auto& b) {
    return *std::min_element(a.begin(), a.end()) < *std::min_element(b.begin(), b.end());
  });
  for (const auto& g : out.groups) {
    check(static_cast<int>(g.size()) <= k, Errc::EntriesOutOfWindow, "group exceeds k");
    long long gs = 0;
    for (int i : g) gs += v[static_cast<std::size_t>(i)];
    check(gs == mu * static_cast<long long>(g.size()), Errc::AverageNotMu, "group average");
  }
  return out;
}

}  // namespace polyqt
