// Command-line front end: load a game, run one analysis, emit a report.
//
// Exit status: 0 = success, 1 = analysis failure (theorem violated, solver
// breakdown), 2 = usage or config error. A completed verify-ne run exits 0
// whether or not the candidate passes; the verdict is in the report.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "qgt/equilibrium.hpp"
#include "qgt/game.hpp"
#include "qgt/json_io.hpp"

namespace {

struct Options {
  // Game source: canonical payoffs, overridden by --game.
  double r = 3.0, s = 0.0, t = 5.0, p = 1.0;
  std::string game_file;

  int player = 1;
  int grid = 16;
  std::string set = "unitary";
  std::string family = "both";
  std::string u1, u2, opponent;
  std::string state_file;
  std::size_t samples = 1000;
  std::size_t probes = 0;
  std::uint64_t seed = 1;

  double tol_ne = 1e-9;
  double tol_cluster = 1e-8;
  double tol_theorem = 1e-10;

  std::string output;        // empty = stdout
  std::string format = "json";
};

qgt::GameDefinition make_game(const Options& o) {
  if (!o.game_file.empty()) {
    return qgt::game_from_json(qgt::load_json_file(o.game_file));
  }
  return qgt::canonical_pd(o.r, o.s, o.t, o.p);
}

// Strategy argument: a base-operator name (Nc, Fc, Nq, Fq) or a key=value
// list "theta=..,phi=.." / "alpha=..,beta=..,gamma=..", angles in radians.
// Base names map to unitary parameters reaching the same operator up to
// global phase, which payoffs cannot see.
qgt::UnitaryParams parse_strategy(const std::string& text) {
  using qgt::EulerAngles;
  using qgt::ThetaPhi;
  if (text == "Nc") return ThetaPhi{0.0, 0.0};
  if (text == "Nq") return ThetaPhi{0.0, M_PI / 2.0};
  if (text == "Fq") return ThetaPhi{M_PI, 0.0};
  if (text == "Fc") return EulerAngles{M_PI / 2.0, -M_PI / 2.0, M_PI};

  bool has_tp = false, has_euler = false;
  ThetaPhi tp;
  EulerAngles ea;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("strategy '" + text + "': expected key=value at '" + item + "'");
    }
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(val, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("strategy '" + text + "': bad number '" + val + "'");
    }
    if (used != val.size()) {
      throw std::invalid_argument("strategy '" + text + "': bad number '" + val + "'");
    }
    if (key == "theta") { tp.theta = x; has_tp = true; }
    else if (key == "phi") { tp.phi = x; has_tp = true; }
    else if (key == "alpha") { ea.alpha = x; has_euler = true; }
    else if (key == "beta") { ea.beta = x; has_euler = true; }
    else if (key == "gamma") { ea.gamma = x; has_euler = true; }
    else {
      throw std::invalid_argument("strategy '" + text + "': unknown key '" + key + "'");
    }
  }
  if (has_tp == has_euler) {
    throw std::invalid_argument("strategy '" + text +
                                "': give either theta/phi or alpha/beta/gamma");
  }
  if (has_tp) return tp;
  return ea;
}

void write_output(const Options& o, const std::string& content) {
  if (o.output.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(o.output, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file '" + o.output + "'");
  out << content;
}

void emit_json(const Options& o, const qgt::ordered_json& j) {
  write_output(o, j.dump(2) + "\n");
}

std::string text_matrix(const qgt::CMatrix& m) {
  std::string out;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      char buf[80];
      const qgt::Complex z = m(i, j);
      std::snprintf(buf, sizeof buf, "%s%10.4g%+.4gi", j ? " " : "", z.real(), z.imag());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void require_format(const Options& o, bool csv_ok) {
  if (o.format == "json" || o.format == "text") return;
  if (o.format == "csv" && csv_ok) return;
  throw std::invalid_argument("format '" + o.format + "' is not available for this command" +
                              (o.format == "csv" ? " (csv is the ne-scan table format)" : ""));
}

int cmd_build(const Options& o) {
  require_format(o, false);
  const qgt::GameDefinition g = make_game(o);
  const qgt::PayoffTensor h1 = qgt::build_payoff_tensor(g, 1);
  const qgt::PayoffTensor h2 = qgt::build_payoff_tensor(g, 2);
  if (o.format == "text") {
    std::string out = "H1:\n" + text_matrix(h1.matrix) + "H2:\n" + text_matrix(h2.matrix);
    out += "H1 classical:\n" + text_matrix(qgt::classical_submatrix(h1));
    out += "H2 classical:\n" + text_matrix(qgt::classical_submatrix(h2));
    write_output(o, out);
    return 0;
  }
  qgt::ordered_json j;
  j["game"] = qgt::game_json(g);
  j["H1"] = qgt::matrix_json(h1.matrix);
  j["H2"] = qgt::matrix_json(h2.matrix);
  j["H1_classical"] = qgt::matrix_json(qgt::classical_submatrix(h1));
  j["H2_classical"] = qgt::matrix_json(qgt::classical_submatrix(h2));
  emit_json(o, j);
  return 0;
}

int cmd_spectrum(const Options& o) {
  require_format(o, false);
  const qgt::GameDefinition g = make_game(o);
  const qgt::PayoffTensor h = qgt::build_payoff_tensor(g, o.player);
  const qgt::SpectrumReport s = qgt::spectrum(h, o.tol_cluster);
  if (o.format == "text") {
    std::string out = "player " + std::to_string(o.player) + " eigenvalues:";
    for (double v : s.decomposition.eigenvalues) out += " " + qgt::format_double(v);
    out += "\nclusters:";
    for (std::size_t c = 0; c < s.clusters.size(); ++c) {
      out += " " + qgt::format_double(s.cluster_values[c]) + "(x" +
             std::to_string(s.clusters[c].size()) + ")";
    }
    out += '\n';
    write_output(o, out);
    return 0;
  }
  qgt::ordered_json j;
  j["player"] = o.player;
  j["spectrum"] = qgt::spectrum_json(s);
  emit_json(o, j);
  return 0;
}

int cmd_payoff(const Options& o) {
  require_format(o, false);
  if (o.u1.empty() || o.u2.empty()) {
    throw std::invalid_argument("payoff requires --u1 and --u2");
  }
  const qgt::GameDefinition g = make_game(o);
  const qgt::UnitaryParams p1 = parse_strategy(o.u1);
  const qgt::UnitaryParams p2 = parse_strategy(o.u2);
  const qgt::CMatrix s1 = qgt::unitary_operator(p1);
  const qgt::CMatrix s2 = qgt::unitary_operator(p2);
  const double e1 = qgt::payoff_operator_form(g, s1, s2, 1);
  const double e2 = qgt::payoff_operator_form(g, s1, s2, 2);
  if (o.format == "text") {
    write_output(o, "E1 = " + qgt::format_double(e1) + "\nE2 = " + qgt::format_double(e2) + "\n");
    return 0;
  }
  qgt::ordered_json j;
  j["u1"] = qgt::params_json(p1);
  j["u2"] = qgt::params_json(p2);
  j["E1"] = e1;
  j["E2"] = e2;
  emit_json(o, j);
  return 0;
}

int cmd_best_response(const Options& o) {
  require_format(o, false);
  if (o.opponent.empty()) {
    throw std::invalid_argument("best-response requires --opponent");
  }
  if (o.set == "classical") {
    throw std::invalid_argument("best-response supports --set unitary or full");
  }
  const qgt::GameDefinition g = make_game(o);
  const qgt::UnitaryParams opp = parse_strategy(o.opponent);
  qgt::ordered_json j;
  j["player"] = o.player;
  j["opponent"] = qgt::params_json(opp);
  j["set"] = o.set;
  std::string text;
  if (o.set == "unitary") {
    const qgt::UnitaryBestResponse br = qgt::best_response_unitary(g, opp, o.player, o.grid);
    j["response"] = qgt::unitary_best_response_json(br);
    text = "value = " + qgt::format_double(br.value) + "\n" + qgt::params_json(br.params).dump() +
           "\n";
  } else {
    const qgt::PayoffTensor h = qgt::build_payoff_tensor(g, o.player);
    const qgt::CVector oc = qgt::to_cvector(qgt::expand(qgt::unitary_operator(opp)));
    const qgt::ReducedPayoff hr = qgt::reduced_payoff(h, qgt::outer(oc, oc), o.player);
    const qgt::BestResponse br = qgt::best_response_full(hr);
    j["response"] = qgt::best_response_json(br);
    text = "value = " + qgt::format_double(br.value) + "\n";
  }
  if (o.format == "text") {
    write_output(o, text);
    return 0;
  }
  emit_json(o, j);
  return 0;
}

int cmd_ne_scan(const Options& o) {
  require_format(o, true);
  const qgt::GameDefinition g = make_game(o);
  if (o.set == "classical") {
    const qgt::ClassicalScanResult res = qgt::classical_ne_scan(g, o.tol_ne);
    if (o.format == "csv") {
      throw std::invalid_argument("csv output covers the unitary scan table; use --set unitary");
    }
    if (o.format == "text") {
      std::string out;
      for (const qgt::ClassicalProfile& pr : res.profiles) {
        out += std::string(qgt::base_strategy_name(pr.s1)) + "," +
               qgt::base_strategy_name(pr.s2) + " E=(" + qgt::format_double(pr.e1) + "," +
               qgt::format_double(pr.e2) + ") margin=" + qgt::format_double(pr.margin) +
               (pr.ne ? " NE" : "") + "\n";
      }
      write_output(o, out);
      return 0;
    }
    emit_json(o, qgt::classical_scan_json(res));
    return 0;
  }
  if (o.set != "unitary") {
    throw std::invalid_argument("ne-scan supports --set unitary or classical");
  }
  const qgt::UnitaryScanResult res = qgt::unitary_profile_scan(g, o.grid, o.tol_ne);
  if (o.format == "csv") {
    write_output(o, qgt::scan_csv(res));
    return 0;
  }
  if (o.format == "text") {
    std::string out = "cells: " + std::to_string(res.rows.size()) +
                      ", equilibria: " + std::to_string(res.equilibria.size()) + "\n";
    for (const qgt::ScanEquilibrium& eq : res.equilibria) {
      out += "NE gamma1=" + qgt::format_double(eq.params1.gamma) +
             " gamma2=" + qgt::format_double(eq.params2.gamma) + " E=(" +
             qgt::format_double(eq.report.payoffs[0]) + "," +
             qgt::format_double(eq.report.payoffs[1]) +
             ") margin=" + qgt::format_double(eq.report.deviation_margin) + "\n";
    }
    write_output(o, out);
    return 0;
  }
  emit_json(o, qgt::scan_json(res));
  return 0;
}

int cmd_ges(const Options& o) {
  require_format(o, false);
  const qgt::GameDefinition g = make_game(o);
  const qgt::PayoffTensor h1 = qgt::build_payoff_tensor(g, 1);
  const qgt::PayoffTensor h2 = qgt::build_payoff_tensor(g, 2);
  const qgt::GesReport res = qgt::ges_search(h1, h2, o.tol_cluster);
  if (o.format == "text") {
    std::string out = std::string("kind: ") + qgt::equilibrium_kind_name(res.kind) +
                      "\ntop values: (" + qgt::format_double(res.top_value1) + "," +
                      qgt::format_double(res.top_value2) +
                      ") intersection dim: " + std::to_string(res.top_intersection_dim) + "\n";
    for (const qgt::CommonEigenstate& c : res.common_eigenstates) {
      out += "common (" + qgt::format_double(c.value1) + "," + qgt::format_double(c.value2) +
             ") product=" + (c.product_state ? "yes" : "no") + " unitary=(" +
             (c.unitary_flags[0] ? "yes" : "no") + "," + (c.unitary_flags[1] ? "yes" : "no") +
             ")\n";
    }
    write_output(o, out);
    return 0;
  }
  emit_json(o, qgt::ges_json(res));
  return 0;
}

int cmd_verify_theorem(const Options& o) {
  require_format(o, false);
  const qgt::GameDefinition g = make_game(o);
  std::vector<std::pair<std::string, qgt::SampleFamily>> families;
  if (o.family == "arbitrary" || o.family == "both") {
    families.emplace_back("arbitrary", qgt::SampleFamily::Arbitrary);
  }
  if (o.family == "unitary" || o.family == "both") {
    families.emplace_back("unitary", qgt::SampleFamily::Unitary);
  }
  if (families.empty()) {
    throw std::invalid_argument("--family must be arbitrary, unitary, or both");
  }
  bool all_passed = true;
  qgt::ordered_json j;
  qgt::ordered_json runs = qgt::ordered_json::array();
  std::string text;
  for (const auto& [name, fam] : families) {
    const qgt::TheoremCheck c = qgt::theorem_check(g, o.samples, fam, o.seed, o.tol_theorem);
    all_passed = all_passed && c.passed;
    qgt::ordered_json one;
    one["family"] = name;
    one["result"] = qgt::theorem_json(c);
    runs.push_back(std::move(one));
    text += name + ": max_relative_gap=" + qgt::format_double(c.max_relative_gap) +
            (c.passed ? " PASS" : " FAIL") + "\n";
  }
  j["runs"] = std::move(runs);
  j["passed"] = all_passed;
  if (o.format == "text") {
    write_output(o, text);
  } else {
    emit_json(o, j);
  }
  return all_passed ? 0 : 1;
}

int cmd_verify_ne(const Options& o) {
  require_format(o, false);
  if (o.state_file.empty()) {
    throw std::invalid_argument("verify-ne requires --state FILE");
  }
  const qgt::GameDefinition g = make_game(o);
  const qgt::CMatrix rho = qgt::candidate_density_from_json(qgt::load_json_file(o.state_file));
  const qgt::PayoffTensor h1 = qgt::build_payoff_tensor(g, 1);
  const qgt::PayoffTensor h2 = qgt::build_payoff_tensor(g, 2);
  const qgt::StrategySet set = qgt::strategy_set_from_name(o.set);
  const qgt::EquilibriumReport rep = qgt::verify_ne(g, h1, h2, rho, set, o.tol_ne, o.probes);
  if (o.format == "text") {
    write_output(o, std::string("kind: ") + qgt::equilibrium_kind_name(rep.kind) + "\nE=(" +
                        qgt::format_double(rep.payoffs[0]) + "," +
                        qgt::format_double(rep.payoffs[1]) +
                        ") margin=" + qgt::format_double(rep.deviation_margin) + "\n");
    return 0;
  }
  qgt::ordered_json j;
  j["set"] = qgt::strategy_set_name(set);
  j["tol"] = o.tol_ne;
  j["is_ne"] = rep.deviation_margin <= o.tol_ne;
  j["report"] = qgt::equilibrium_json(rep);
  emit_json(o, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Quantum game payoff tensors, spectra, and equilibrium analysis"};
  app.require_subcommand(1);

  auto add_common = [&o](CLI::App* c) {
    c->add_option("--r", o.r, "Reward payoff (canonical game)");
    c->add_option("--s", o.s, "Sucker payoff (canonical game)");
    c->add_option("--t", o.t, "Temptation payoff (canonical game)");
    c->add_option("--p", o.p, "Punishment payoff (canonical game)");
    c->add_option("--game", o.game_file, "Game definition JSON file (overrides --r/--s/--t/--p)");
    c->add_option("--output", o.output, "Output file (default stdout)");
    c->add_option("--format", o.format, "Output format: json, text, or csv (scan tables)")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    c->add_option("--tol.ne", o.tol_ne, "Deviation-margin tolerance for NE verdicts")
        ->check(CLI::PositiveNumber);
    c->add_option("--tol.cluster", o.tol_cluster, "Eigenvalue clustering tolerance")
        ->check(CLI::PositiveNumber);
    c->add_option("--tol.theorem", o.tol_theorem, "Relative tolerance for payoff-form agreement")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* build = app.add_subcommand("build", "Emit both payoff tensors and classical submatrices");
  add_common(build);

  CLI::App* spectrum = app.add_subcommand("spectrum", "Eigenvalues and degenerate clusters of a payoff tensor");
  add_common(spectrum);
  spectrum->add_option("--player", o.player, "Player index")->check(CLI::IsMember({1, 2}));

  CLI::App* payoff = app.add_subcommand("payoff", "Payoffs for a pair of strategies");
  add_common(payoff);
  payoff->add_option("--u1", o.u1, "Player 1 strategy: Nc|Fc|Nq|Fq, theta=..,phi=.., or alpha=..,beta=..,gamma=..")
      ->required();
  payoff->add_option("--u2", o.u2, "Player 2 strategy (same forms as --u1)")->required();

  CLI::App* best = app.add_subcommand("best-response", "Best response against a fixed opponent");
  add_common(best);
  best->add_option("--player", o.player, "Responding player")->check(CLI::IsMember({1, 2}));
  best->add_option("--opponent", o.opponent, "Opponent strategy (same forms as --u1)")->required();
  best->add_option("--set", o.set, "Strategy set: unitary or full")
      ->check(CLI::IsMember({"unitary", "full"}));
  best->add_option("--grid", o.grid, "Angle grid resolution")->check(CLI::Range(2, 1024));

  CLI::App* scan = app.add_subcommand("ne-scan", "Scan strategy profiles for Nash equilibria");
  add_common(scan);
  scan->add_option("--grid", o.grid, "Angle grid resolution per axis")->check(CLI::Range(2, 64));
  scan->add_option("--set", o.set, "Profile family: unitary or classical");

  CLI::App* ges = app.add_subcommand("ges", "Search for common eigenstates and a globally stable one");
  add_common(ges);

  CLI::App* vt = app.add_subcommand("verify-theorem", "Check operator-form vs tensor-form payoff agreement on random strategies");
  add_common(vt);
  vt->add_option("--samples", o.samples, "Random operator pairs per family")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
  vt->add_option("--seed", o.seed, "RNG seed");
  vt->add_option("--family", o.family, "Sampling family: arbitrary, unitary, or both")
      ->check(CLI::IsMember({"arbitrary", "unitary", "both"}));

  CLI::App* vn = app.add_subcommand("verify-ne", "Verify a candidate strategy state against deviations");
  add_common(vn);
  vn->add_option("--state", o.state_file, "Candidate JSON file: {\"state\": [16 x [re,im]]} or {\"density\": 16x16}")
      ->required();
  vn->add_option("--set", o.set, "Deviation set: full, unitary, or classical");
  vn->add_option("--samples", o.probes, "Extra random deviation probes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return cmd_build(o);
    if (spectrum->parsed()) return cmd_spectrum(o);
    if (payoff->parsed()) return cmd_payoff(o);
    if (best->parsed()) return cmd_best_response(o);
    if (scan->parsed()) return cmd_ne_scan(o);
    if (ges->parsed()) return cmd_ges(o);
    if (vt->parsed()) return cmd_verify_theorem(o);
    if (vn->parsed()) return cmd_verify_ne(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
