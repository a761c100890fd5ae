#pragma once

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "polyqt/io.hpp"
#include "polyqt/quasitri.hpp"
#include "polyqt/triangcheck.hpp"

namespace polyqt {

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), Errc::UsageError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MatPoly load_matpoly(const std::string& path) {
  Document doc = parse_document(read_file(path));
  check(doc.kind == "matpoly.v1", Errc::SchemaError, "'" + path + "' is not a matpoly.v1 document");
  return std::get<MatPoly>(doc.payload);
}

inline SpectralData load_spectral(const std::string& path) {
  Document doc = parse_document(read_file(path));
  check(doc.kind == "spectraldata.v1", Errc::SchemaError,
        "'" + path + "' is not a spectraldata.v1 document");
  return std::get<SpectralData>(doc.payload);
}

inline FieldSpec parse_field_arg(const std::string& text) {
  if (text == "q" || text == "Q" || text == "rationals") return FieldSpec::rationals();
  if (text.rfind("gf:", 0) == 0) return FieldSpec::gf(std::stoull(text.substr(3)));
  fail(Errc::UsageError, "field must be 'gf:<p>' or 'q', got '" + text + "'");
}

inline Json certificate_json(const QuasiTriResult& r) {
  Json j;
  j["kind"] = "certificate.v1";
  j["data"] = spectral_to_json(r.certificate);
  Json flags;
  flags["degree"] = r.Q.degree_or(0);
  flags["grade"] = r.Q.grade();
  flags["strictly_regular"] = r.strictly_regular;
  flags["offdiag_degree_bound"] = r.offdiag_degree_ok;
  flags["blocks"] = r.blocks.sizes;
  j["flags"] = flags;
  return j;
}

inline std::string ascii_diagram(const StackingLayout& layout) {
  long long maxdeg = 0;
  for (long long d : layout.degrees) maxdeg = std::max(maxdeg, d);
  std::ostringstream os;
  for (long long level = maxdeg; level >= 1; --level) {
    for (int c = 0; c < layout.n; ++c) {
      // which factor covers this level in column c
      long long acc = 0;
      char cell = ' ';
      for (const Poly& f : layout.columns[static_cast<std::size_t>(c)]) {
        const long long lo = acc + 1, hi = acc + f.degree();
        if (level >= lo && level <= hi) {
          cell = static_cast<char>('0' + f.degree() % 10);
          break;
        }
        acc = hi;
      }
      os << '|' << cell << cell;
    }
    os << "|\n";
  }
  for (int c = 0; c < layout.n; ++c) os << "+--";
  os << "+\n";
  return os.str();
}

inline std::string svg_diagram(const StackingLayout& layout) {
  long long maxdeg = 0;
  for (long long d : layout.degrees) maxdeg = std::max(maxdeg, d);
  const int cw = 28, ch = 14;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << layout.n * (cw + 6) + 6
     << "\" height=\"" << maxdeg * ch + 12 << "\">\n";
  const char* fills[] = {"#9ad1f5", "#f5b89a", "#b6f59a", "#d9a9f0", "#f0e3a0"};
  for (int c = 0; c < layout.n; ++c) {
    long long acc = 0;
    for (const Poly& f : layout.columns[static_cast<std::size_t>(c)]) {
      const long long y = maxdeg - acc - f.degree();
      os << "  <rect x=\"" << 6 + c * (cw + 6) << "\" y=\"" << 6 + y * ch << "\" width=\"" << cw
         << "\" height=\"" << f.degree() * ch << "\" fill=\"" << fills[f.degree() % 5]
         << "\" stroke=\"black\"/>\n";
      acc += f.degree();
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace cli_detail

// Entry point shared by the binary and the tests. Returns the process exit
// code: 0 success, 1 domain error, 2 usage error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"exact Smith forms, spectral data, and quasi-triangularizations of matrix "
               "polynomials over GF(p) and Q"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  if (const char* env = std::getenv("POLYQT_SEED")) seed = std::strtoull(env, nullptr, 10);
  app.add_option("--seed", seed, "seed for randomized factorization and basis search");
  bool pretty = false;
  app.add_flag("--pretty", pretty, "indent JSON output");

  std::string input, data_path, a_path, b_path, witness_path, cert_path;
  std::string field_arg = "gf:2", poly_arg, blocks_arg, entries_arg, diagram;
  std::string ma = "0", mb = "1", mc = "1", md = "0";
  std::vector<std::string> hint_args;
  int degree = 0, size = 0, window = 1;
  long long mu = 0;

  CLI::App* c_smith = app.add_subcommand("smith", "Smith form with transformations");
  c_smith->add_option("--input", input, "matpoly.v1 file")->required();

  CLI::App* c_factor = app.add_subcommand("factor", "factor a polynomial over GF(p)");
  c_factor->add_option("--field", field_arg, "gf:<p> or q");
  c_factor->add_option("--poly", poly_arg, "polynomial, e.g. 'x^4+x^3+1'")->required();

  CLI::App* c_realize = app.add_subcommand("realize", "quasi-triangular realization of data");
  c_realize->add_option("--data", data_path, "spectraldata.v1 file")->required();
  c_realize->add_option("--degree", degree, "target degree (grade when infinite data present)")
      ->required();
  c_realize->add_option("--size", size, "target size n")->required();
  c_realize->add_option("--emit-certificate", cert_path, "write the recomputed certificate here");

  CLI::App* c_quasitri = app.add_subcommand("quasitri", "quasi-triangularize a matrix polynomial");
  c_quasitri->add_option("--input", input, "matpoly.v1 file")->required();
  c_quasitri->add_option("--hint", hint_args, "irreducible divisor hint (rationals only)");
  c_quasitri->add_option("--emit-certificate", cert_path, "write the recomputed certificate here");

  CLI::App* c_verify = app.add_subcommand("verify-equiv", "spectral equivalence of two inputs");
  c_verify->add_option("--a", a_path, "matpoly.v1 file")->required();
  c_verify->add_option("--b", b_path, "matpoly.v1 file")->required();

  CLI::App* c_mobius = app.add_subcommand("mobius", "Mobius transformation of a matrix polynomial");
  c_mobius->add_option("--input", input, "matpoly.v1 file")->required();
  c_mobius->add_option("--a", ma, "entry a of [a b; c d]");
  c_mobius->add_option("--b", mb, "entry b");
  c_mobius->add_option("--c", mc, "entry c");
  c_mobius->add_option("--d", md, "entry d");

  CLI::App* c_triang = app.add_subcommand("triangularizable", "triangularizability analysis");
  c_triang->add_option("--data", data_path, "spectraldata.v1 file")->required();
  c_triang->add_option("--degree", degree, "target degree")->required();
  c_triang->add_option("--size", size, "target size n")->required();
  c_triang->add_option("--witness", witness_path, "write the witness here when guaranteed");

  CLI::App* c_partition = app.add_subcommand("partition", "homogeneous partition of integer entries");
  c_partition->add_option("--entries", entries_arg, "comma-separated integers")->required();
  c_partition->add_option("--window", window, "window length k")->required();
  c_partition->add_option("--mu", mu, "required group average")->required();

  CLI::App* c_stack = app.add_subcommand("stack", "stacking layout of the data's factors");
  c_stack->add_option("--data", data_path, "spectraldata.v1 file")->required();
  c_stack->add_option("--size", size, "column count")->required();
  c_stack->add_option("--diagram", diagram, "ascii or svg");

  CLI::App* c_reduce = app.add_subcommand("reduce", "off-diagonal degree reduction");
  c_reduce->add_option("--input", input, "matpoly.v1 file")->required();
  c_reduce->add_option("--blocks", blocks_arg, "comma-separated block sizes")->required();

  CLI::App* c_undiag = app.add_subcommand(
      "undiagonalize", "drive a Smith form to its stacking layout (pipeline debugging)");
  c_undiag->add_option("--data", data_path, "spectraldata.v1 file")->required();
  c_undiag->add_option("--size", size, "target size n")->required();

  std::vector<const char*> argv;
  argv.push_back("polyqt");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  auto emit = [&](const Json& j) { out << print_document(j, pretty); };

  try {
    if (c_smith->parsed()) {
      const MatPoly P = cli_detail::load_matpoly(input);
      const SmithDecomposition sd = smith_form(P);
      check(sd.verify(P), Errc::Unsupported, "Smith verification failed");
      Json j;
      j["S"] = matpoly_to_json(sd.S);
      j["U"] = matpoly_to_json(sd.U);
      j["V"] = matpoly_to_json(sd.V);
      emit(j);
    } else if (c_factor->parsed()) {
      const FieldSpec spec = cli_detail::parse_field_arg(field_arg);
      const Poly p = parse_poly_text(spec, poly_arg);
      const Factorization f = poly_factor(p, seed);
      Json j;
      j["unit"] = f.unit.str();
      Json fs = Json::array();
      for (const auto& [q, e] : f.factors) {
        Json entry;
        entry["poly"] = poly_to_json(q);
        entry["text"] = poly_to_text(q);
        entry["exp"] = e;
        fs.push_back(entry);
      }
      j["factors"] = fs;
      emit(j);
    } else if (c_realize->parsed()) {
      const SpectralData data = cli_detail::load_spectral(data_path);
      const QuasiTriResult res = data.infinite_count() > 0
                                     ? realize_with_infinity(data, degree, size, seed)
                                     : realize_strictly_regular(data, degree, size, seed);
      Json j;
      j["result"] = matpoly_to_json(res.Q);
      j["certificate"] = cli_detail::certificate_json(res);
      emit(j);
      if (!cert_path.empty()) {
        std::ofstream f(cert_path);
        f << print_document(cli_detail::certificate_json(res), true);
      }
    } else if (c_quasitri->parsed()) {
      const MatPoly P = cli_detail::load_matpoly(input);
      std::vector<Poly> hints;
      for (const auto& h : hint_args) hints.push_back(parse_poly_text(P.spec(), h));
      const QuasiTriResult res = quasi_triangularize(P, hints, seed);
      Json j;
      j["result"] = matpoly_to_json(res.Q);
      j["certificate"] = cli_detail::certificate_json(res);
      emit(j);
      if (!cert_path.empty()) {
        std::ofstream f(cert_path);
        f << print_document(cli_detail::certificate_json(res), true);
      }
    } else if (c_verify->parsed()) {
      const MatPoly A = cli_detail::load_matpoly(a_path);
      const MatPoly B = cli_detail::load_matpoly(b_path);
      Json j;
      j["equivalent"] = spectrally_equivalent(A, B);
      emit(j);
    } else if (c_mobius->parsed()) {
      const MatPoly P = cli_detail::load_matpoly(input);
      const FieldSpec spec = P.spec();
      const MobiusMatrix A(parse_element(spec, ma), parse_element(spec, mb),
                           parse_element(spec, mc), parse_element(spec, md));
      emit(matpoly_to_json(mp_mobius(P, A)));
    } else if (c_triang->parsed()) {
      const SpectralData data = cli_detail::load_spectral(data_path);
      std::set<int> degs;
      for (const auto& [chi, pm] : data.finite)
        if (!pm.empty() && pm.back() > 0) degs.insert(chi.degree());
      bool two_degree_applicable = degs.size() <= 2;
      if (degs.size() == 2) {
        const int ell = *degs.begin(), k = *degs.rbegin();
        if (ell >= 2 && (k % ell != 0 || degree % ell != 0)) two_degree_applicable = false;
      }
      const TriangReport rep = two_degree_applicable ? check_two_degree(data, degree, size)
                                                     : check_sufficient(data, degree, size);
      Json j;
      j["verdict"] = verdict_name(rep.verdict);
      j["condition"] = rep.condition;
      j["characterization"] = two_degree_applicable;
      if (rep.witness && !witness_path.empty()) {
        std::ofstream f(witness_path);
        f << print_document(matpoly_to_json(*rep.witness), true);
        j["witness"] = witness_path;
      }
      emit(j);
    } else if (c_partition->parsed()) {
      IntVec entries;
      std::stringstream ss(entries_arg);
      for (std::string tok; std::getline(ss, tok, ',');) entries.push_back(std::stoll(tok));
      const Partitioning part = homogeneous_partition(entries, window, mu);
      Json j;
      Json groups = Json::array(), values = Json::array();
      for (const auto& g : part.groups) {
        groups.push_back(g);
        Json vals = Json::array();
        for (int i : g) vals.push_back(entries[static_cast<std::size_t>(i)]);
        values.push_back(vals);
      }
      j["groups"] = groups;
      j["values"] = values;
      emit(j);
    } else if (c_stack->parsed()) {
      const SpectralData data = cli_detail::load_spectral(data_path);
      std::vector<Poly> factors;
      for (const auto& [chi, pm] : data.finite)
        for (int e : pm)
          for (int c = 0; c < e; ++c) factors.push_back(chi);
      const StackingLayout layout = stack_factors(factors, size);
      Json j;
      j["degrees"] = layout.degrees;
      Json counts;
      for (const auto& [deg, v] : layout.family_counts) counts[std::to_string(deg)] = v;
      j["counts"] = counts;
      Json cols = Json::array();
      for (const auto& col : layout.columns) {
        Json cj = Json::array();
        for (const Poly& f : col) cj.push_back(poly_to_text(f));
        cols.push_back(cj);
      }
      j["columns"] = cols;
      if (diagram == "ascii") j["diagram"] = cli_detail::ascii_diagram(layout);
      if (diagram == "svg") j["diagram"] = cli_detail::svg_diagram(layout);
      emit(j);
    } else if (c_reduce->parsed()) {
      const MatPoly P = cli_detail::load_matpoly(input);
      BlockStructure blocks;
      std::stringstream ss(blocks_arg);
      for (std::string tok; std::getline(ss, tok, ',');) blocks.sizes.push_back(std::stoi(tok));
      emit(matpoly_to_json(reduce_offdiagonal(P, blocks)));
    } else if (c_undiag->parsed()) {
      SpectralData data = cli_detail::load_spectral(data_path);
      check(data.infinite_count() == 0, Errc::Unsupported,
            "undiagonalize expects purely finite data");
      data = detail::resize_data(data, size);
      const MatPoly S = MatPoly::diagonal(data.spec, data.invariants);
      std::vector<Poly> factors;
      for (const auto& [chi, pm] : data.finite)
        for (int e : pm)
          for (int c = 0; c < e; ++c) factors.push_back(chi);
      check(!factors.empty(), Errc::Unsupported, "nothing to redistribute");
      const StackingLayout layout = stack_factors(factors, size);
      emit(matpoly_to_json(drive_diagonal(S, layout)));
    }
  } catch (const Error& e) {
    if (e.code == Errc::UsageError) {
      err << e.what() << "\n";
      return 2;
    }
    Json j;
    j["error"] = errc_name(e.code);
    j["message"] = e.what();
    err << j.dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace polyqt
