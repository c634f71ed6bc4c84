#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "qgt/json_io.hpp"

using qgt::CMatrix;
using qgt::Complex;
using qgt::CVector;
using qgt::GameDefinition;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + QGT_CLI_PATH + "\" " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, n);
  const int status = pclose(pipe);
  REQUIRE(status != -1);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qgt_test_" + name);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << text;
}

std::string error_message(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("json round trip of game definitions") {
  const GameDefinition g = qgt::canonical_pd(3, 0, 5, 1);
  const qgt::plain_json parsed = qgt::parse_json_text(qgt::game_json(g).dump(), "canonical");
  const GameDefinition back = qgt::game_from_json(parsed);
  REQUIRE(back.params.has_value());
  REQUIRE(back.params->r == 3.0);
  REQUIRE(back.params->s == 0.0);
  REQUIRE(back.params->t == 5.0);
  REQUIRE(back.params->p == 1.0);
  REQUIRE(qgt::frobenius_norm(back.p1 - g.p1) == 0.0);
  REQUIRE(qgt::frobenius_norm(back.rho0 - g.rho0) == 0.0);

  // General form: explicit matrices, no payoff-parameter tag
  CMatrix rho0(4, 4);
  rho0(0, 0) = 0.25;
  rho0(1, 1) = 0.75;
  rho0(0, 1) = Complex(0.1, 0.2);
  rho0(1, 0) = Complex(0.1, -0.2);
  CMatrix p1(4, 4), p2(4, 4);
  p1(0, 0) = 1.0 / 3.0;
  p1(2, 3) = Complex(0.5, -1.25);
  p1(3, 2) = Complex(0.5, 1.25);
  p2(1, 1) = M_PI;
  const GameDefinition general = qgt::general_game(rho0, p1, p2);
  const qgt::plain_json parsed2 = qgt::parse_json_text(qgt::game_json(general).dump(), "general");
  const GameDefinition back2 = qgt::game_from_json(parsed2);
  REQUIRE_FALSE(back2.params.has_value());
  REQUIRE(qgt::frobenius_norm(back2.rho0 - rho0) == 0.0);
  REQUIRE(qgt::frobenius_norm(back2.p1 - p1) == 0.0);
  REQUIRE(qgt::frobenius_norm(back2.p2 - p2) == 0.0);
}

TEST_CASE("scalar serialization round trips exactly") {
  for (double x : {1.0 / 3.0, M_PI, 1e-300, -2.5e17, 0.0}) {
    const std::string s = qgt::format_double(x);
    REQUIRE(std::strtod(s.c_str(), nullptr) == x);
  }

  const Complex z(1.5, -2.0);
  const qgt::ordered_json j = qgt::complex_json(z);
  REQUIRE(j.is_array());
  REQUIRE(j[0].get<double>() == 1.5);
  REQUIRE(j[1].get<double>() == -2.0);
  REQUIRE(qgt::complex_from_json(qgt::parse_json_text(j.dump(), "z"), "z") == z);
  // A bare number is accepted as a real scalar
  REQUIRE(qgt::complex_from_json(qgt::parse_json_text("2.5", "z"), "z") == Complex(2.5, 0.0));
}

TEST_CASE("parse errors carry the failing path") {
  REQUIRE_THROWS_AS(qgt::parse_json_text("{not json", "cfg.json"), std::invalid_argument);
  REQUIRE(error_message([] { qgt::parse_json_text("{not json", "cfg.json"); })
              .find("cfg.json") != std::string::npos);

  const qgt::plain_json bad_entry =
      qgt::parse_json_text(R"([[0,0,0,0],[0,0,"x",0],[0,0,0,0],[0,0,0,0]])", "m");
  REQUIRE(error_message([&] { qgt::matrix_from_json(bad_entry, "P1", 4, 4); })
              .find("P1[1][2]") != std::string::npos);

  const qgt::plain_json short_vec = qgt::parse_json_text("[1, 2, 3]", "v");
  REQUIRE(error_message([&] { qgt::cvector_from_json(short_vec, "state", 16); })
              .find("16") != std::string::npos);

  const qgt::plain_json missing = qgt::parse_json_text(R"({"r": 1, "s": 2, "p": 3})", "g");
  REQUIRE(error_message([&] { qgt::game_from_json(missing); }).find("'t'") != std::string::npos);

  const qgt::plain_json no_p2 =
      qgt::parse_json_text(R"({"rho0": [[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})", "g");
  REQUIRE(error_message([&] { qgt::game_from_json(no_p2); }).find("'P1'") != std::string::npos);

  REQUIRE_THROWS_AS(qgt::game_from_json(qgt::parse_json_text("[]", "g")), std::invalid_argument);
  REQUIRE_THROWS_AS(qgt::number_from_json(qgt::parse_json_text("\"q\"", "n"), "n"),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(qgt::load_json_file("/nonexistent/qgt-missing.json"), std::invalid_argument);
  REQUIRE_THROWS_AS(qgt::candidate_density_from_json(qgt::parse_json_text("{}", "c")),
                    std::invalid_argument);
}

TEST_CASE("candidate parsing accepts a pure state or a density") {
  CVector f(16, Complex(0.0, 0.0));
  f[5] = 1.0;
  qgt::ordered_json with_state;
  with_state["state"] = qgt::vector_json(f);
  const CMatrix rho =
      qgt::candidate_density_from_json(qgt::parse_json_text(with_state.dump(), "c"));
  REQUIRE(rho.rows() == 16);
  REQUIRE(rho(5, 5) == Complex(1.0, 0.0));
  REQUIRE(std::abs(qgt::trace(rho) - 1.0) < 1e-15);

  qgt::ordered_json with_density;
  with_density["density"] = qgt::matrix_json(rho);
  const CMatrix rho2 =
      qgt::candidate_density_from_json(qgt::parse_json_text(with_density.dump(), "c"));
  REQUIRE(qgt::frobenius_norm(rho2 - rho) == 0.0);
}

TEST_CASE("scan csv layout") {
  const qgt::UnitaryScanResult scan = qgt::unitary_profile_scan(qgt::canonical_pd(3, 0, 5, 1), 4);
  const std::string csv = qgt::scan_csv(scan);
  REQUIRE(csv.rfind("gamma1,gamma2,E1,E2,margin\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : csv) lines += (c == '\n');
  REQUIRE(lines == 17);  // header + 16 cells
}

TEST_CASE("cli emits the tensors") {
  const CliResult res = run_cli("build");
  REQUIRE(res.exit_code == 0);
  const qgt::plain_json j = qgt::parse_json_text(res.out, "cli");
  REQUIRE(j["game"]["r"].get<double>() == 3.0);
  REQUIRE(j["H1"][0][0][0].get<double>() == Catch::Approx(3.0));
  REQUIRE(j["H1"][0][0][1].get<double>() == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(j["H1"][4][4][0].get<double>() == Catch::Approx(5.0));
  // Entry (4,12) is purely imaginary with weight t
  REQUIRE(j["H1"][4][12][0].get<double>() == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(j["H1"][4][12][1].get<double>() == Catch::Approx(5.0));
  // Player 2 swaps the off-diagonal payoffs
  REQUIRE(j["H2"][1][1][0].get<double>() == Catch::Approx(5.0));
  REQUIRE(j["H1_classical"].size() == 4);
  REQUIRE(j["H1_classical"][1][1][0].get<double>() == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("cli payoff evaluation") {
  const CliResult mutual = run_cli(
      "payoff --u1 theta=0,phi=1.5707963267948966 --u2 theta=0,phi=1.5707963267948966");
  REQUIRE(mutual.exit_code == 0);
  const qgt::plain_json j = qgt::parse_json_text(mutual.out, "cli");
  REQUIRE(j["E1"].get<double>() == Catch::Approx(3.0).margin(1e-9));
  REQUIRE(j["E2"].get<double>() == Catch::Approx(3.0).margin(1e-9));

  const CliResult defect = run_cli("payoff --u1 Fc --u2 Fc");
  REQUIRE(defect.exit_code == 0);
  const qgt::plain_json jd = qgt::parse_json_text(defect.out, "cli");
  REQUIRE(jd["E1"].get<double>() == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(jd["E2"].get<double>() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("cli spectrum output") {
  const CliResult res = run_cli("spectrum --player 1");
  REQUIRE(res.exit_code == 0);
  const qgt::plain_json j = qgt::parse_json_text(res.out, "cli");
  REQUIRE(j["player"].get<int>() == 1);
  REQUIRE(j["spectrum"]["eigenvalues"][0].get<double>() == Catch::Approx(20.0));
  REQUIRE(j["spectrum"]["eigenvalues"][1].get<double>() == Catch::Approx(12.0));
  REQUIRE(j["spectrum"]["eigenvalues"][2].get<double>() == Catch::Approx(4.0));
  REQUIRE(j["spectrum"]["cluster_values"].size() == 4);

  const CliResult text = run_cli("spectrum --player 2 --format text");
  REQUIRE(text.exit_code == 0);
  REQUIRE(text.out.find("clusters:") != std::string::npos);
}

TEST_CASE("cli theorem verification") {
  const CliResult res = run_cli("verify-theorem --samples 50 --seed 7");
  REQUIRE(res.exit_code == 0);
  const qgt::plain_json j = qgt::parse_json_text(res.out, "cli");
  REQUIRE(j["passed"].get<bool>());
  REQUIRE(j["runs"].size() == 2);
  REQUIRE(j["runs"][0]["result"]["max_relative_gap"].get<double>() < 1e-10);
}

TEST_CASE("cli usage and config errors exit with code 2") {
  REQUIRE(run_cli("--definitely-not-a-flag").exit_code == 2);
  REQUIRE(run_cli("spectrum --player 3").exit_code == 2);
  REQUIRE(run_cli("payoff --u1 Nc").exit_code == 2);
  REQUIRE(run_cli("ne-scan --set classical --format csv").exit_code == 2);
  REQUIRE(run_cli("payoff --u1 theta=0,phi=0,gamma=1 --u2 Nc").exit_code == 2);

  const std::filesystem::path bad_game = temp_file("bad_game.json");
  write_file(bad_game,
             R"({"rho0": [[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],
                 "P1": [[0,1,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],
                 "P2": [[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})");
  REQUIRE(run_cli("build --game " + bad_game.string()).exit_code == 2);

  const std::filesystem::path malformed = temp_file("malformed.json");
  write_file(malformed, "{this is not json");
  REQUIRE(run_cli("build --game " + malformed.string()).exit_code == 2);
}

TEST_CASE("cli scan is deterministic") {
  const CliResult first = run_cli("ne-scan --grid 4");
  const CliResult second = run_cli("ne-scan --grid 4");
  REQUIRE(first.exit_code == 0);
  REQUIRE(second.exit_code == 0);
  REQUIRE_FALSE(first.out.empty());
  REQUIRE(first.out == second.out);

  const qgt::plain_json j = qgt::parse_json_text(first.out, "cli");
  REQUIRE(j["equilibria"].size() == 1);

  const CliResult csv = run_cli("ne-scan --grid 4 --format csv");
  REQUIRE(csv.exit_code == 0);
  REQUIRE(csv.out.rfind("gamma1,gamma2,E1,E2,margin\n", 0) == 0);
}

TEST_CASE("cli common eigenstate search") {
  const CliResult res = run_cli("ges");
  REQUIRE(res.exit_code == 0);
  const qgt::plain_json j = qgt::parse_json_text(res.out, "cli");
  REQUIRE(j["kind"].get<std::string>() == "none");
  REQUIRE(j["top_intersection_dim"].get<int>() == 0);
  REQUIRE(j["common_eigenstates"].size() == 16);
  REQUIRE(j["ges_state"].is_null());
}

TEST_CASE("cli candidate verification") {
  // Mutual gamma=pi profile: an NE of the unitary set
  const CVector u1 = qgt::to_cvector(qgt::unitary_general_coeffs({0.3, -0.7, M_PI}));
  const CVector u2 = qgt::to_cvector(qgt::unitary_general_coeffs({-1.1, 0.2, M_PI}));
  qgt::ordered_json candidate;
  candidate["state"] = qgt::vector_json(qgt::kron_vec(u1, u2));
  const std::filesystem::path pi_file = temp_file("profile_pi.json");
  write_file(pi_file, candidate.dump());

  const CliResult ne = run_cli("verify-ne --state " + pi_file.string() + " --set unitary");
  REQUIRE(ne.exit_code == 0);
  const qgt::plain_json j = qgt::parse_json_text(ne.out, "cli");
  REQUIRE(j["is_ne"].get<bool>());
  REQUIRE(j["report"]["kind"].get<std::string>() == "unitary-NE");
  REQUIRE(j["report"]["payoffs"][0].get<double>() == Catch::Approx(1.0));

  // Shared second eigenstate: rejected against unconstrained deviations
  CVector sm(16, Complex(0.0, 0.0));
  sm[0] = sm[2] = sm[8] = sm[10] = 0.5;
  qgt::ordered_json candidate2;
  candidate2["state"] = qgt::vector_json(sm);
  const std::filesystem::path sm_file = temp_file("projector_state.json");
  write_file(sm_file, candidate2.dump());

  const CliResult not_ne = run_cli("verify-ne --state " + sm_file.string() + " --set full");
  REQUIRE(not_ne.exit_code == 0);
  const qgt::plain_json j2 = qgt::parse_json_text(not_ne.out, "cli");
  REQUIRE_FALSE(j2["is_ne"].get<bool>());
  REQUIRE(j2["report"]["deviation_margin"].get<double>() == Catch::Approx(8.0));
}

TEST_CASE("cli writes to a file when asked") {
  const std::filesystem::path out_file = temp_file("ges_out.json");
  std::filesystem::remove(out_file);
  const CliResult res = run_cli("ges --output " + out_file.string());
  REQUIRE(res.exit_code == 0);
  REQUIRE(res.out.empty());
  std::ifstream in(out_file);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  const qgt::plain_json j = qgt::parse_json_text(buf.str(), "file");
  REQUIRE(j["kind"].get<std::string>() == "none");
}
