#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "polyqt/io.hpp"
#include "polyqt/quasitri.hpp"

namespace polyqt::testing {

inline std::string fixture_text(const std::string& name) {
  std::ifstream in(std::string(POLYQT_FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MatPoly fixture_matpoly(const std::string& name) {
  return matpoly_from_json(Json::parse(fixture_text(name)));
}

inline SpectralData fixture_spectral(const std::string& name) {
  return spectral_from_json(Json::parse(fixture_text(name)));
}

// The running GF(2) example: chi = x^4+x^3+1, phi = x^2+x+1, psi = x.
struct Gf2Example {
  FieldSpec spec = FieldSpec::gf(2);
  Poly chi = Poly::from_ints(spec, {1, 0, 0, 1, 1});
  Poly phi = Poly::from_ints(spec, {1, 1, 1});
  Poly psi = Poly::x(spec);
  Poly eta = Poly::from_ints(spec, {1, 1, 0, 0, 1});  // rev4(chi)

  SpectralData data_finite() const {
    return SpectralData::from_finite(
        spec, 6, 10,
        {{chi, {0, 0, 1, 2, 3, 3}}, {phi, {0, 1, 1, 1, 1, 3}}, {psi, {0, 1, 1, 2, 2, 4}}}, {});
  }
  SpectralData data_infinite() const {
    return SpectralData::from_finite(spec, 6, 10,
                                     {{eta, {0, 0, 1, 2, 3, 3}}, {phi, {0, 1, 1, 1, 1, 3}}},
                                     {0, 1, 1, 2, 2, 4});
  }
  std::vector<Poly> smith_diagonal() const {
    return {Poly::one(spec),           phi * psi,
            chi * phi * psi,           chi.pow(2) * phi * psi.pow(2),
            chi.pow(3) * phi * psi.pow(2), chi.pow(3) * phi.pow(3) * psi.pow(4)};
  }
};

inline Poly random_poly(const FieldSpec& s, int max_deg, std::mt19937_64& rng,
                        bool force_nonzero = false) {
  const int d = static_cast<int>(rng() % static_cast<std::uint64_t>(max_deg + 1));
  std::vector<FieldElement> c;
  for (int i = 0; i <= d; ++i) {
    if (s.is_prime_field())
      c.push_back(FieldElement::from_residue(s, rng() % s.p()));
    else
      c.push_back(FieldElement::from_int(s, static_cast<long long>(rng() % 7) - 3));
  }
  Poly p(s, std::move(c));
  if (force_nonzero && p.is_zero()) return Poly::one(s);
  return p;
}

inline MatPoly random_matpoly(const FieldSpec& s, int rows, int cols, int max_deg,
                              std::mt19937_64& rng) {
  MatPoly m(s, rows, cols, 0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.at(i, j) = random_poly(s, max_deg, rng);
  m.tighten_grade();
  return m;
}

inline MatPoly random_regular(const FieldSpec& s, int n, int max_deg, std::mt19937_64& rng) {
  for (;;) {
    MatPoly m = random_matpoly(s, n, n, max_deg, rng);
    if (mp_is_regular(m)) return m;
  }
}

inline MatPoly random_unimodular(const FieldSpec& s, int n, std::mt19937_64& rng, int ops = 6) {
  MatPoly u = MatPoly::identity(s, n);
  for (int t = 0; t < ops; ++t) {
    const int i = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    if (i == j) j = (j + 1) % n;
    const Poly m = random_poly(s, 2, rng);
    if (rng() % 2)
      u.row_addmul(i, j, m);
    else
      u.col_addmul(i, j, m);
  }
  return u;
}

inline MobiusMatrix random_mobius(const FieldSpec& s, std::mt19937_64& rng) {
  for (;;) {
    auto pick = [&]() {
      return s.is_prime_field() ? FieldElement::from_residue(s, rng() % s.p())
                                : FieldElement::from_int(s, static_cast<long long>(rng() % 5) - 2);
    };
    const FieldElement a = pick(), b = pick(), c = pick(), d = pick();
    if (!(a * d - b * c).is_zero()) return MobiusMatrix(a, b, c, d);
  }
}

}  // namespace polyqt::testing
