#ifndef LIEJET_IO_HPP
#define LIEJET_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "liejet/diffeo.hpp"
#include "liejet/factorization.hpp"
#include "liejet/prolongation.hpp"
#include "liejet/vector_field.hpp"

namespace liejet {

using nlohmann::json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io_detail {

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ParseError(std::string(what) + ": unknown key '" + key + "'");
  }
}

inline MultiIndex parse_alpha(const json& j, int nu, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != nu)
    throw ParseError(std::string(what) + ": 'alpha' must be an array of " + std::to_string(nu) + " entries");
  MultiIndex a(nu);
  for (int k = 0; k < nu; ++k) {
    if (!j[static_cast<std::size_t>(k)].is_number_unsigned())
      throw ParseError(std::string(what) + ": 'alpha' entries must be non-negative integers");
    a[k] = j[static_cast<std::size_t>(k)].get<unsigned>();
  }
  return a;
}

inline Rat parse_coeff(const json& j, const char* what) {
  try {
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long>());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
  throw ParseError(std::string(what) + ": coefficients must be fraction/decimal strings or integers");
}

}  // namespace io_detail

// {"nu": 2, "truncation": 8, "terms": [{"i": 1, "alpha": [2,0], "c": "3/2"}, ...]}
// with 1-based component index i and exact fraction or decimal strings.
inline json to_json(const FormalVectorField& v) {
  json terms = json::array();
  for (int i = 0; i < v.nu(); ++i) {
    for (const auto& [a, c] : v.component(i).terms()) {
      json t;
      t["i"] = i + 1;
      t["alpha"] = a.entries();
      t["c"] = rat_to_string(c);
      terms.push_back(std::move(t));
    }
  }
  json j;
  j["nu"] = v.nu();
  j["truncation"] = v.truncation();
  j["terms"] = std::move(terms);
  return j;
}

inline FormalVectorField vector_field_from_json(const json& j) {
  io_detail::check_keys(j, {"nu", "truncation", "terms"}, "vector field");
  if (!j.contains("nu") || !j.contains("truncation") || !j.contains("terms"))
    throw ParseError("vector field: 'nu', 'truncation' and 'terms' are required");
  int nu = j["nu"].get<int>();
  int trunc = j["truncation"].get<int>();
  if (nu < 1 || trunc < 0) throw ParseError("vector field: invalid 'nu' or 'truncation'");
  FormalVectorField v(nu, trunc);
  for (const auto& t : j["terms"]) {
    io_detail::check_keys(t, {"i", "alpha", "c"}, "vector field term");
    int i = t.at("i").get<int>();
    if (i < 1 || i > nu) throw ParseError("vector field term: component index out of range");
    v.add_term(i - 1, io_detail::parse_alpha(t.at("alpha"), nu, "vector field term"),
               io_detail::parse_coeff(t.at("c"), "vector field term"));
  }
  return v;
}

// Mirrors the vector-field format with one series per component:
// {"nu":2, "truncation":8, "components":[{"terms":[{"alpha":[1,0],"c":"1"},...]}, ...]}
inline json to_json(const FormalDiffeo& d) {
  json comps = json::array();
  for (int i = 0; i < d.nu(); ++i) {
    json terms = json::array();
    for (const auto& [a, c] : d.component(i).terms()) {
      json t;
      t["alpha"] = a.entries();
      t["c"] = rat_to_string(c);
      terms.push_back(std::move(t));
    }
    json comp;
    comp["terms"] = std::move(terms);
    comps.push_back(std::move(comp));
  }
  json j;
  j["nu"] = d.nu();
  j["truncation"] = d.truncation();
  j["components"] = std::move(comps);
  return j;
}

inline FormalDiffeo diffeo_from_json(const json& j) {
  io_detail::check_keys(j, {"nu", "truncation", "components"}, "diffeo");
  if (!j.contains("nu") || !j.contains("truncation") || !j.contains("components"))
    throw ParseError("diffeo: 'nu', 'truncation' and 'components' are required");
  int nu = j["nu"].get<int>();
  int trunc = j["truncation"].get<int>();
  if (nu < 1 || trunc < 0) throw ParseError("diffeo: invalid 'nu' or 'truncation'");
  if (!j["components"].is_array() || static_cast<int>(j["components"].size()) != nu)
    throw ParseError("diffeo: 'components' must hold one series per variable");
  std::vector<Poly> comps;
  for (const auto& comp : j["components"]) {
    io_detail::check_keys(comp, {"terms"}, "diffeo component");
    Poly p(nu, trunc);
    for (const auto& t : comp.at("terms")) {
      io_detail::check_keys(t, {"alpha", "c"}, "diffeo term");
      p.add_term(io_detail::parse_alpha(t.at("alpha"), nu, "diffeo term"),
                 io_detail::parse_coeff(t.at("c"), "diffeo term"));
    }
    comps.push_back(std::move(p));
  }
  try {
    return FormalDiffeo(std::move(comps));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("diffeo: ") + e.what());
  }
}

// {"p":2,"q":2,"r":2,"A":[{"alpha":[0,0],"matrix":[["0","0"],["0","0"]]}],
//  "B":[[{"alpha":[0,0],"matrix":[["1","0"],["0","1"]]}], ...]}
inline json to_json(const PDESystem& s) {
  auto blocks_to_json = [&](const std::map<MultiIndex, RatMatrix>& blocks) {
    json arr = json::array();
    for (const auto& [a, m] : blocks) {
      json rows = json::array();
      for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rat_to_string(m(i, c)));
        rows.push_back(std::move(row));
      }
      json b;
      b["alpha"] = a.entries();
      b["matrix"] = std::move(rows);
      arr.push_back(std::move(b));
    }
    return arr;
  };
  json j;
  j["p"] = s.p();
  j["q"] = s.q_dep();
  j["r"] = s.r_eq();
  j["A"] = blocks_to_json(s.A());
  json bs = json::array();
  for (int i = 0; i < s.p(); ++i) bs.push_back(blocks_to_json(s.B(i)));
  j["B"] = std::move(bs);
  return j;
}

inline PDESystem pde_system_from_json(const json& j) {
  io_detail::check_keys(j, {"p", "q", "r", "A", "B"}, "system");
  for (const char* key : {"p", "q", "r", "A", "B"})
    if (!j.contains(key)) throw ParseError(std::string("system: '") + key + "' is required");
  int p = j["p"].get<int>(), q = j["q"].get<int>(), r = j["r"].get<int>();
  if (p < 1 || q < 1 || r < 1) throw ParseError("system: p, q, r must be positive");
  auto parse_block = [&](const json& b) {
    io_detail::check_keys(b, {"alpha", "matrix"}, "system block");
    MultiIndex a = io_detail::parse_alpha(b.at("alpha"), p, "system block");
    const json& rows = b.at("matrix");
    if (!rows.is_array() || static_cast<int>(rows.size()) != r)
      throw ParseError("system block: 'matrix' must have r rows");
    RatMatrix m(static_cast<std::size_t>(r), static_cast<std::size_t>(q));
    for (int i = 0; i < r; ++i) {
      const json& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<int>(row.size()) != q)
        throw ParseError("system block: matrix rows must have q entries");
      for (int c = 0; c < q; ++c)
        m(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) =
            io_detail::parse_coeff(row[static_cast<std::size_t>(c)], "system block");
    }
    return std::make_pair(a, m);
  };
  int coeff_trunc = 0;
  for (const auto& b : j["A"]) coeff_trunc = std::max(coeff_trunc, parse_block(b).first.order());
  for (const auto& bi : j["B"])
    for (const auto& b : bi) coeff_trunc = std::max(coeff_trunc, parse_block(b).first.order());
  PDESystem s(p, q, r, coeff_trunc);
  for (const auto& b : j["A"]) {
    auto [a, m] = parse_block(b);
    s.set_A(a, std::move(m));
  }
  if (!j["B"].is_array() || static_cast<int>(j["B"].size()) != p)
    throw ParseError("system: 'B' must hold one block list per independent variable");
  for (int i = 0; i < p; ++i)
    for (const auto& b : j["B"][static_cast<std::size_t>(i)]) {
      auto [a, m] = parse_block(b);
      s.set_B(i, a, std::move(m));
    }
  return s;
}

// {"nu":2, "rho0":"1", "elements":[<vector-field literal>, ...]}
inline json to_json(const FilteredBasis& b) {
  json elems = json::array();
  for (const auto& e : b.all_elements()) elems.push_back(to_json(e));
  json j;
  j["nu"] = b.nu();
  j["rho0"] = rat_to_string(b.rho0());
  j["elements"] = std::move(elems);
  return j;
}

inline FilteredBasis basis_from_json(const json& j) {
  io_detail::check_keys(j, {"nu", "rho0", "elements"}, "basis");
  if (!j.contains("nu") || !j.contains("elements")) throw ParseError("basis: 'nu' and 'elements' are required");
  Rat rho0 = j.contains("rho0") ? io_detail::parse_coeff(j["rho0"], "basis") : Rat(1);
  FilteredBasis b(j["nu"].get<int>(), rho0);
  for (const auto& e : j["elements"]) {
    auto field = vector_field_from_json(e);
    if (field.nu() != b.nu()) throw ParseError("basis: element variable count mismatch");
    b.add(std::move(field));
  }
  return b;
}

inline json to_json(const FormalSolution& f) {
  json terms = json::array();
  for (const auto& [g, v] : f.coeffs()) {
    json t;
    t["gamma"] = g.entries();
    json vals = json::array();
    for (const auto& x : v) vals.push_back(rat_to_string(x));
    t["f"] = std::move(vals);
    terms.push_back(std::move(t));
  }
  json j;
  j["p"] = f.p();
  j["q"] = f.q_dep();
  j["max_degree"] = f.max_degree();
  j["coefficients"] = std::move(terms);
  return j;
}

// Reads a whole file and parses it, attributing syntax errors to line/column.
inline json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

}  // namespace liejet

#endif
