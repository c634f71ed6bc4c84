#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "qgt/cmatrix.hpp"
#include "qgt/equilibrium.hpp"
#include "qgt/game.hpp"
#include "qgt/strategy.hpp"

// JSON wire format: complex numbers as [re, im]; matrices row-major as arrays
// of rows. Emitters use ordered_json so key order is fixed by construction
// order, keeping serialized reports byte-stable across runs.

namespace qgt {

using ordered_json = nlohmann::ordered_json;
using plain_json = nlohmann::json;

// ---------------------------------------------------------------------------
// Emitters

inline ordered_json complex_json(const Complex& z) {
  return ordered_json::array({z.real(), z.imag()});
}

inline ordered_json vector_json(const CVector& v) {
  ordered_json out = ordered_json::array();
  for (const Complex& z : v) out.push_back(complex_json(z));
  return out;
}

inline ordered_json matrix_json(const CMatrix& m) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}

inline ordered_json params_json(const UnitaryParams& p) {
  ordered_json out;
  if (std::holds_alternative<ThetaPhi>(p)) {
    const ThetaPhi& tp = std::get<ThetaPhi>(p);
    out["theta"] = tp.theta;
    out["phi"] = tp.phi;
  } else {
    const EulerAngles& ea = std::get<EulerAngles>(p);
    out["alpha"] = ea.alpha;
    out["beta"] = ea.beta;
    out["gamma"] = ea.gamma;
  }
  return out;
}

inline ordered_json game_json(const GameDefinition& g) {
  ordered_json out;
  if (g.params) {
    out["r"] = g.params->r;
    out["s"] = g.params->s;
    out["t"] = g.params->t;
    out["p"] = g.params->p;
  } else {
    out["rho0"] = matrix_json(g.rho0);
    out["P1"] = matrix_json(g.p1);
    out["P2"] = matrix_json(g.p2);
  }
  return out;
}

inline ordered_json spectrum_json(const SpectrumReport& s) {
  ordered_json out;
  out["eigenvalues"] = s.decomposition.eigenvalues;
  out["cluster_values"] = s.cluster_values;
  ordered_json clusters = ordered_json::array();
  for (const std::vector<std::size_t>& c : s.clusters) clusters.push_back(c);
  out["clusters"] = std::move(clusters);
  out["eigenvectors"] = matrix_json(s.decomposition.eigenvectors);
  return out;
}

inline ordered_json equilibrium_json(const EquilibriumReport& r) {
  ordered_json out;
  out["kind"] = equilibrium_kind_name(r.kind);
  out["payoffs"] = ordered_json::array({r.payoffs[0], r.payoffs[1]});
  out["deviation_margin"] = r.deviation_margin;
  out["player_margins"] = ordered_json::array({r.player_margins[0], r.player_margins[1]});
  out["unitary_flags"] = ordered_json::array({r.unitary_flags[0], r.unitary_flags[1]});
  out["state"] = matrix_json(r.state);
  return out;
}

inline ordered_json ges_json(const GesReport& g) {
  ordered_json out;
  out["kind"] = equilibrium_kind_name(g.kind);
  out["top_values"] = ordered_json::array({g.top_value1, g.top_value2});
  out["top_intersection_dim"] = g.top_intersection_dim;
  ordered_json states = ordered_json::array();
  for (const CommonEigenstate& c : g.common_eigenstates) {
    ordered_json e;
    e["value1"] = c.value1;
    e["value2"] = c.value2;
    e["product_state"] = c.product_state;
    e["unitary_flags"] = ordered_json::array({c.unitary_flags[0], c.unitary_flags[1]});
    e["state"] = vector_json(c.state);
    states.push_back(std::move(e));
  }
  out["common_eigenstates"] = std::move(states);
  if (g.ges_state) {
    out["ges_state"] = equilibrium_json(*g.ges_state);
  } else {
    out["ges_state"] = nullptr;
  }
  return out;
}

inline ordered_json theorem_json(const TheoremCheck& t) {
  ordered_json out;
  out["max_relative_gap"] = t.max_relative_gap;
  out["samples"] = t.samples;
  out["tol"] = t.tol;
  out["passed"] = t.passed;
  return out;
}

inline ordered_json scan_json(const UnitaryScanResult& s) {
  ordered_json out;
  out["grid"] = s.grid;
  out["tol"] = s.tol;
  ordered_json rows = ordered_json::array();
  for (const ScanRow& r : s.rows) {
    ordered_json row;
    row["gamma1"] = r.gamma1;
    row["gamma2"] = r.gamma2;
    row["E1"] = r.e1;
    row["E2"] = r.e2;
    row["margin"] = r.margin;
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  ordered_json eqs = ordered_json::array();
  for (const ScanEquilibrium& e : s.equilibria) {
    ordered_json one;
    one["params1"] = params_json(e.params1);
    one["params2"] = params_json(e.params2);
    one["report"] = equilibrium_json(e.report);
    eqs.push_back(std::move(one));
  }
  out["equilibria"] = std::move(eqs);
  return out;
}

inline ordered_json classical_scan_json(const ClassicalScanResult& s) {
  ordered_json out;
  ordered_json profiles = ordered_json::array();
  for (const ClassicalProfile& p : s.profiles) {
    ordered_json one;
    one["s1"] = base_strategy_name(p.s1);
    one["s2"] = base_strategy_name(p.s2);
    one["E1"] = p.e1;
    one["E2"] = p.e2;
    one["margin"] = p.margin;
    one["ne"] = p.ne;
    profiles.push_back(std::move(one));
  }
  out["profiles"] = std::move(profiles);
  ordered_json eqs = ordered_json::array();
  for (const EquilibriumReport& r : s.equilibria) eqs.push_back(equilibrium_json(r));
  out["equilibria"] = std::move(eqs);
  return out;
}

inline ordered_json best_response_json(const BestResponse& b) {
  ordered_json out;
  out["value"] = b.value;
  out["strategy"] = vector_json(to_cvector(b.strategy));
  return out;
}

inline ordered_json unitary_best_response_json(const UnitaryBestResponse& b) {
  ordered_json out;
  out["value"] = b.value;
  out["params"] = params_json(b.params);
  return out;
}

// ---------------------------------------------------------------------------
// CSV / fixed-format text

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string scan_csv(const UnitaryScanResult& s) {
  std::string out = "gamma1,gamma2,E1,E2,margin\n";
  for (const ScanRow& r : s.rows) {
    out += format_double(r.gamma1);
    out += ',';
    out += format_double(r.gamma2);
    out += ',';
    out += format_double(r.e1);
    out += ',';
    out += format_double(r.e2);
    out += ',';
    out += format_double(r.margin);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsers. `where` strings accumulate a path such as "rho0[2][3]" so a bad
// token is reported by position.

inline std::invalid_argument parse_fail(const std::string& where, const std::string& msg) {
  return std::invalid_argument("qgt::json: " + where + ": " + msg);
}

inline double number_from_json(const plain_json& j, const std::string& where) {
  if (!j.is_number()) throw parse_fail(where, "expected a number");
  return j.get<double>();
}

inline Complex complex_from_json(const plain_json& j, const std::string& where) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (!j.is_array() || j.size() != 2) {
    throw parse_fail(where, "expected [re, im] or a plain number");
  }
  return Complex(number_from_json(j[0], where + "[0]"),
                 number_from_json(j[1], where + "[1]"));
}

inline CVector cvector_from_json(const plain_json& j, const std::string& where,
                                 std::size_t expected_size = 0) {
  if (!j.is_array()) throw parse_fail(where, "expected an array");
  if (expected_size > 0 && j.size() != expected_size) {
    throw parse_fail(where, "expected " + std::to_string(expected_size) + " components, got " +
                                std::to_string(j.size()));
  }
  CVector out;
  out.reserve(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(complex_from_json(j[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

inline CMatrix matrix_from_json(const plain_json& j, const std::string& where,
                                std::size_t rows = 0, std::size_t cols = 0) {
  if (!j.is_array() || j.empty()) throw parse_fail(where, "expected a non-empty array of rows");
  if (rows > 0 && j.size() != rows) {
    throw parse_fail(where, "expected " + std::to_string(rows) + " rows, got " +
                                std::to_string(j.size()));
  }
  const std::size_t ncols = cols > 0 ? cols : (j[0].is_array() ? j[0].size() : 0);
  if (ncols == 0) throw parse_fail(where + "[0]", "expected a non-empty row array");
  CMatrix out(j.size(), ncols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string row_where = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != ncols) {
      throw parse_fail(row_where, "expected a row of " + std::to_string(ncols) + " entries");
    }
    for (std::size_t c = 0; c < ncols; ++c) {
      out(i, c) = complex_from_json(j[i][c], row_where + "[" + std::to_string(c) + "]");
    }
  }
  return out;
}

// Text -> JSON with the parser's own line/column diagnostics preserved.
inline plain_json parse_json_text(const std::string& text, const std::string& source_name) {
  try {
    return plain_json::parse(text);
  } catch (const plain_json::parse_error& e) {
    throw std::invalid_argument("qgt::json: " + source_name + ": " + e.what());
  }
}

inline plain_json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("qgt::json: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

inline GameDefinition game_from_json(const plain_json& j) {
  if (!j.is_object()) throw parse_fail("game", "expected an object");
  if (j.contains("r") || j.contains("s") || j.contains("t") || j.contains("p")) {
    for (const char* key : {"r", "s", "t", "p"}) {
      if (!j.contains(key)) throw parse_fail("game", std::string("missing key '") + key + "'");
    }
    return canonical_pd(number_from_json(j["r"], "r"), number_from_json(j["s"], "s"),
                        number_from_json(j["t"], "t"), number_from_json(j["p"], "p"));
  }
  for (const char* key : {"rho0", "P1", "P2"}) {
    if (!j.contains(key)) throw parse_fail("game", std::string("missing key '") + key + "'");
  }
  return general_game(matrix_from_json(j["rho0"], "rho0", 4, 4),
                      matrix_from_json(j["P1"], "P1", 4, 4),
                      matrix_from_json(j["P2"], "P2", 4, 4));
}

// Candidate state for NE verification: either a pure system state ("state",
// 16 components) or a full system density ("density", 16x16). Returns the
// density either way.
inline CMatrix candidate_density_from_json(const plain_json& j) {
  if (!j.is_object()) throw parse_fail("candidate", "expected an object");
  if (j.contains("state")) {
    return pure_density(cvector_from_json(j["state"], "state", 16));
  }
  if (j.contains("density")) {
    return matrix_from_json(j["density"], "density", 16, 16);
  }
  throw parse_fail("candidate", "expected key 'state' or 'density'");
}

}  // namespace qgt
