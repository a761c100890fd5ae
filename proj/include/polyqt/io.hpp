#pragma once

#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

#include "polyqt/combinat.hpp"
#include "polyqt/matpoly.hpp"
#include "polyqt/smith.hpp"

namespace polyqt {

using Json = nlohmann::json;

namespace io_detail {

[[noreturn]] inline void schema_fail(const std::string& path, const std::string& msg) {
  fail(Errc::SchemaError, "at " + path + ": " + msg);
}

inline const Json& member(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) schema_fail(path + "." + key, "missing field");
  return j.at(key);
}

inline int as_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_fail(path, "expected an integer");
  return j.get<int>();
}

inline std::string as_str(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_fail(path, "expected a string");
  return j.get<std::string>();
}

}  // namespace io_detail

// ----- field elements and the polynomial text grammar -----

inline FieldElement parse_element(const FieldSpec& spec, const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  check(!t.empty(), Errc::SchemaError, "empty coefficient");
  if (spec.is_prime_field()) {
    std::size_t pos = 0;
    bool neg = false;
    if (t[0] == '+' || t[0] == '-') {
      neg = t[0] == '-';
      pos = 1;
    }
    check(pos < t.size(), Errc::SchemaError, "bad coefficient '" + text + "'");
    unsigned long long v = 0;
    for (; pos < t.size(); ++pos) {
      check(std::isdigit(static_cast<unsigned char>(t[pos])), Errc::SchemaError,
            "bad coefficient '" + text + "'");
      v = (v * 10 + static_cast<unsigned long long>(t[pos] - '0')) % spec.p();
    }
    FieldElement e = FieldElement::from_residue(spec, v);
    return neg ? -e : e;
  }
  const auto slash = t.find('/');
  try {
    if (slash == std::string::npos) return FieldElement::from_rational(BigRat(BigInt(t)));
    const BigInt num(t.substr(0, slash)), den(t.substr(slash + 1));
    check(den != 0, Errc::SchemaError, "zero denominator in '" + text + "'");
    return FieldElement::from_fraction(num, den);
  } catch (const std::exception&) {
    fail(Errc::SchemaError, "bad rational coefficient '" + text + "'");
  }
}

// Terms c*x^k joined by + or -; "x" and "^k" optional per term.
inline Poly parse_poly_text(const FieldSpec& spec, const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  check(!t.empty(), Errc::SchemaError, "empty polynomial");

  std::vector<FieldElement> coeffs;
  auto add_term = [&](const FieldElement& c, int k) {
    if (static_cast<int>(coeffs.size()) <= k)
      coeffs.resize(static_cast<std::size_t>(k) + 1, FieldElement::zero(spec));
    coeffs[static_cast<std::size_t>(k)] = coeffs[static_cast<std::size_t>(k)] + c;
  };

  std::size_t pos = 0;
  while (pos < t.size()) {
    bool neg = false;
    if (t[pos] == '+' || t[pos] == '-') {
      neg = t[pos] == '-';
      ++pos;
      check(pos < t.size(), Errc::SchemaError, "dangling sign in '" + text + "'");
    }
    // coefficient (digits, optional /digits), then optional *x^k or x^k
    std::string coef;
    while (pos < t.size() && (std::isdigit(static_cast<unsigned char>(t[pos])) || t[pos] == '/'))
      coef += t[pos++];
    bool has_x = false;
    int power = 0;
    if (pos < t.size() && t[pos] == '*') {
      ++pos;
      check(pos < t.size() && t[pos] == 'x', Errc::SchemaError, "expected x after * in '" + text + "'");
    }
    if (pos < t.size() && t[pos] == 'x') {
      has_x = true;
      ++pos;
      power = 1;
      if (pos < t.size() && t[pos] == '^') {
        ++pos;
        check(pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos])), Errc::SchemaError,
              "bad exponent in '" + text + "'");
        power = 0;
        while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos])))
          power = power * 10 + (t[pos++] - '0');
      }
    }
    check(has_x || !coef.empty(), Errc::SchemaError, "empty term in '" + text + "'");
    FieldElement c = coef.empty() ? FieldElement::one(spec) : parse_element(spec, coef);
    if (neg) c = -c;
    add_term(c, has_x ? power : 0);
  }
  return Poly(spec, std::move(coeffs));
}

// Canonical printing: ascending powers, explicit * between coefficient and x.
inline std::string poly_to_text(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int k = 0; k <= p.degree(); ++k) {
    const FieldElement c = p.coeff(k);
    if (c.is_zero()) continue;
    std::string cs = c.str();
    bool neg = false;
    if (!cs.empty() && cs[0] == '-') {
      neg = true;
      cs = cs.substr(1);
    }
    std::string term;
    if (k == 0)
      term = cs;
    else {
      term = (cs == "1") ? "" : cs + "*";
      term += "x";
      if (k > 1) term += "^" + std::to_string(k);
    }
    if (out.empty())
      out = (neg ? "-" : "") + term;
    else
      out += (neg ? " - " : " + ") + term;
  }
  return out;
}

// ----- JSON schemas -----

inline Json field_to_json(const FieldSpec& s) {
  Json j;
  if (s.is_prime_field()) {
    j["kind"] = "prime-field";
    j["p"] = s.p();
  } else {
    j["kind"] = "rationals";
  }
  return j;
}

inline FieldSpec field_from_json(const Json& j, const std::string& path) {
  const std::string kind = io_detail::as_str(io_detail::member(j, "kind", path), path + ".kind");
  if (kind == "prime-field") {
    const Json& pj = io_detail::member(j, "p", path);
    if (!pj.is_number_unsigned() && !pj.is_number_integer())
      io_detail::schema_fail(path + ".p", "expected a prime");
    return FieldSpec::gf(pj.get<std::uint64_t>());
  }
  if (kind == "rationals") return FieldSpec::rationals();
  io_detail::schema_fail(path + ".kind", "unknown field kind '" + kind + "'");
}

inline Json poly_to_json(const Poly& p) {
  Json arr = Json::array();
  if (p.is_zero()) return arr;
  for (int k = 0; k <= p.degree(); ++k) arr.push_back(p.coeff(k).str());
  return arr;
}

inline Poly poly_from_json(const FieldSpec& spec, const Json& j, const std::string& path) {
  if (!j.is_array()) io_detail::schema_fail(path, "expected a coefficient array");
  std::vector<FieldElement> coeffs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& c = j[i];
    const std::string cp = path + "[" + std::to_string(i) + "]";
    if (c.is_string())
      coeffs.push_back(parse_element(spec, c.get<std::string>()));
    else if (c.is_number_integer())
      coeffs.push_back(FieldElement::from_int(spec, c.get<long long>()));
    else
      io_detail::schema_fail(cp, "expected a coefficient string");
  }
  return Poly(spec, std::move(coeffs));
}

inline Json matpoly_to_json(const MatPoly& P) {
  Json j;
  j["kind"] = "matpoly.v1";
  j["field"] = field_to_json(P.spec());
  j["rows"] = P.rows();
  j["cols"] = P.cols();
  j["grade"] = P.grade();
  Json rows = Json::array();
  for (int i = 0; i < P.rows(); ++i) {
    Json row = Json::array();
    for (int c = 0; c < P.cols(); ++c) row.push_back(poly_to_json(P.at(i, c)));
    rows.push_back(row);
  }
  j["entries"] = rows;
  return j;
}

inline MatPoly matpoly_from_json(const Json& j, const std::string& path = "$") {
  const std::string kind = io_detail::as_str(io_detail::member(j, "kind", path), path + ".kind");
  if (kind != "matpoly.v1") io_detail::schema_fail(path + ".kind", "expected matpoly.v1");
  const FieldSpec spec = field_from_json(io_detail::member(j, "field", path), path + ".field");
  const int rows = io_detail::as_int(io_detail::member(j, "rows", path), path + ".rows");
  const int cols = io_detail::as_int(io_detail::member(j, "cols", path), path + ".cols");
  const int grade = io_detail::as_int(io_detail::member(j, "grade", path), path + ".grade");
  if (rows < 1 || cols < 1) io_detail::schema_fail(path, "bad shape");
  const Json& entries = io_detail::member(j, "entries", path);
  if (!entries.is_array() || static_cast<int>(entries.size()) != rows)
    io_detail::schema_fail(path + ".entries", "expected " + std::to_string(rows) + " rows");
  MatPoly P(spec, rows, cols, std::max(grade, 0));
  for (int i = 0; i < rows; ++i) {
    const Json& row = entries[static_cast<std::size_t>(i)];
    const std::string rp = path + ".entries[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      io_detail::schema_fail(rp, "expected " + std::to_string(cols) + " columns");
    for (int c = 0; c < cols; ++c)
      P.at(i, c) = poly_from_json(spec, row[static_cast<std::size_t>(c)],
                                  rp + "[" + std::to_string(c) + "]");
  }
  if (grade < P.degree_or(0)) io_detail::schema_fail(path + ".grade", "grade below entry degree");
  return P;
}

inline Json spectral_to_json(const SpectralData& d) {
  Json j;
  j["kind"] = "spectraldata.v1";
  j["field"] = field_to_json(d.spec);
  j["n"] = d.n;
  j["grade"] = d.grade;
  Json inv = Json::array();
  for (const Poly& p : d.invariants) inv.push_back(poly_to_json(p));
  j["invariants"] = inv;
  Json fin = Json::array();
  for (const auto& [chi, pm] : d.finite) {
    Json e;
    e["chi"] = poly_to_json(chi);
    e["pm"] = pm;
    fin.push_back(e);
  }
  j["finite"] = fin;
  j["infinite"] = d.infinite;
  return j;
}

inline SpectralData spectral_from_json(const Json& j, const std::string& path = "$") {
  const std::string kind = io_detail::as_str(io_detail::member(j, "kind", path), path + ".kind");
  if (kind != "spectraldata.v1") io_detail::schema_fail(path + ".kind", "expected spectraldata.v1");
  const FieldSpec spec = field_from_json(io_detail::member(j, "field", path), path + ".field");
  const int n = io_detail::as_int(io_detail::member(j, "n", path), path + ".n");
  const int grade = io_detail::as_int(io_detail::member(j, "grade", path), path + ".grade");
  if (n < 1) io_detail::schema_fail(path + ".n", "size must be positive");

  std::vector<std::pair<Poly, PMSeq>> finite;
  const Json& fin = io_detail::member(j, "finite", path);
  if (!fin.is_array()) io_detail::schema_fail(path + ".finite", "expected an array");
  for (std::size_t i = 0; i < fin.size(); ++i) {
    const std::string ep = path + ".finite[" + std::to_string(i) + "]";
    const Poly chi = poly_from_json(spec, io_detail::member(fin[i], "chi", ep), ep + ".chi");
    const Json& pmj = io_detail::member(fin[i], "pm", ep);
    if (!pmj.is_array()) io_detail::schema_fail(ep + ".pm", "expected an array");
    PMSeq pm;
    for (std::size_t t = 0; t < pmj.size(); ++t)
      pm.push_back(io_detail::as_int(pmj[t], ep + ".pm[" + std::to_string(t) + "]"));
    if (chi.is_zero() || chi.is_constant()) io_detail::schema_fail(ep + ".chi", "not irreducible");
    finite.emplace_back(chi, pm);
  }
  PMSeq infinite;
  if (j.contains("infinite")) {
    const Json& infj = j.at("infinite");
    if (!infj.is_array()) io_detail::schema_fail(path + ".infinite", "expected an array");
    for (std::size_t t = 0; t < infj.size(); ++t)
      infinite.push_back(io_detail::as_int(infj[t], path + ".infinite[" + std::to_string(t) + "]"));
  }
  SpectralData d = SpectralData::from_finite(spec, n, grade, std::move(finite), std::move(infinite));
  if (j.contains("invariants")) {
    const Json& invj = j.at("invariants");
    if (!invj.is_array()) io_detail::schema_fail(path + ".invariants", "expected an array");
    if (invj.size() != d.invariants.size())
      io_detail::schema_fail(path + ".invariants", "wrong invariant count");
    for (std::size_t i = 0; i < invj.size(); ++i) {
      const Poly p =
          poly_from_json(spec, invj[i], path + ".invariants[" + std::to_string(i) + "]");
      if (!(p == d.invariants[i]))
        io_detail::schema_fail(path + ".invariants[" + std::to_string(i) + "]",
                               "inconsistent with the PM sequences");
    }
  }
  return d;
}

inline Json opscript_to_json(int length, const OpSequence& ops) {
  Json j;
  j["kind"] = "opscript.v1";
  j["length"] = length;
  Json arr = Json::array();
  for (const VecOp& op : ops) {
    Json e;
    e["op"] = op.kind == VecOp::Kind::Interchange ? "interchange" : "compression";
    e["i"] = op.i;
    if (op.kind == VecOp::Kind::Compression) {
      e["alpha"] = op.alpha;
      e["beta"] = op.beta;
    }
    arr.push_back(e);
  }
  j["ops"] = arr;
  return j;
}

inline std::pair<int, OpSequence> opscript_from_json(const Json& j, const std::string& path = "$") {
  const std::string kind = io_detail::as_str(io_detail::member(j, "kind", path), path + ".kind");
  if (kind != "opscript.v1") io_detail::schema_fail(path + ".kind", "expected opscript.v1");
  const int length = io_detail::as_int(io_detail::member(j, "length", path), path + ".length");
  const Json& arr = io_detail::member(j, "ops", path);
  if (!arr.is_array()) io_detail::schema_fail(path + ".ops", "expected an array");
  OpSequence ops;
  for (std::size_t t = 0; t < arr.size(); ++t) {
    const std::string ep = path + ".ops[" + std::to_string(t) + "]";
    const std::string op = io_detail::as_str(io_detail::member(arr[t], "op", ep), ep + ".op");
    const int i = io_detail::as_int(io_detail::member(arr[t], "i", ep), ep + ".i");
    if (op == "interchange")
      ops.push_back(VecOp::interchange(i));
    else if (op == "compression")
      ops.push_back(VecOp::compression(i, io_detail::as_int(io_detail::member(arr[t], "alpha", ep), ep + ".alpha"),
                                       io_detail::as_int(io_detail::member(arr[t], "beta", ep), ep + ".beta")));
    else
      io_detail::schema_fail(ep + ".op", "unknown op '" + op + "'");
  }
  return {length, ops};
}

// ----- typed document wrapper -----

struct Document {
  std::string kind;
  std::variant<MatPoly, SpectralData, std::pair<int, OpSequence>, Json> payload;
};

inline Document parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(Errc::SchemaError, std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    io_detail::schema_fail("$", "document needs a string 'kind' tag");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "matpoly.v1") return {kind, matpoly_from_json(j)};
  if (kind == "spectraldata.v1") return {kind, spectral_from_json(j)};
  if (kind == "opscript.v1") return {kind, opscript_from_json(j)};
  if (kind == "certificate.v1") return {kind, j};
  io_detail::schema_fail("$.kind", "unknown document kind '" + kind + "'");
}

inline std::string print_document(const Json& j, bool pretty = false) {
  return pretty ? j.dump(2) + "\n" : j.dump() + "\n";
}

}  // namespace polyqt
