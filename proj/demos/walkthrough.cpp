// Tour of the library on the canonical game (r=3, s=0, t=5, p=1): build the
// payoff tensors, inspect their spectra, evaluate a few profiles, scan the
// strategy families for equilibria, and search for shared eigenstates.

#include <cstdio>

#include "qgt/equilibrium.hpp"
#include "qgt/game.hpp"

int main() {
  const qgt::GameDefinition g = qgt::canonical_pd(3, 0, 5, 1);
  const qgt::PayoffTensor h1 = qgt::build_payoff_tensor(g, 1);
  const qgt::PayoffTensor h2 = qgt::build_payoff_tensor(g, 2);

  std::printf("== payoff tensors ==\n");
  int nonzero = 0;
  for (std::size_t i = 0; i < 16; ++i) {
    for (std::size_t j = 0; j < 16; ++j) nonzero += std::abs(h1.matrix(i, j)) > 1e-12;
  }
  std::printf("H1 is 16x16 with %d nonzero entries; H1[0][0]=%.1f, H1[4][4]=%.1f\n", nonzero,
              h1.matrix(0, 0).real(), h1.matrix(4, 4).real());

  std::printf("\n== spectra ==\n");
  for (int player = 1; player <= 2; ++player) {
    const qgt::SpectrumReport s = qgt::spectrum(player == 1 ? h1 : h2);
    std::printf("player %d clusters:", player);
    for (std::size_t c = 0; c < s.clusters.size(); ++c) {
      std::printf(" %.6g(x%zu)", s.cluster_values[c], s.clusters[c].size());
    }
    std::printf("\n");
  }

  std::printf("\n== named profiles ==\n");
  const qgt::CMatrix nc = qgt::base_operator(qgt::BaseStrategy::Nc);
  const qgt::CMatrix fc = qgt::base_operator(qgt::BaseStrategy::Fc);
  const qgt::CMatrix q = qgt::unitary_theta_phi({0.0, M_PI / 2.0});
  std::printf("cooperate/cooperate: E=(%.1f, %.1f)\n", qgt::payoff_operator_form(g, nc, nc, 1),
              qgt::payoff_operator_form(g, nc, nc, 2));
  std::printf("defect/defect:       E=(%.1f, %.1f)\n", qgt::payoff_operator_form(g, fc, fc, 1),
              qgt::payoff_operator_form(g, fc, fc, 2));
  std::printf("quantum/quantum:     E=(%.1f, %.1f)\n", qgt::payoff_operator_form(g, q, q, 1),
              qgt::payoff_operator_form(g, q, q, 2));

  std::printf("\n== best responses to theta=pi/3 ==\n");
  const qgt::ThetaPhi opp{M_PI / 3.0, 0.0};
  const qgt::UnitaryBestResponse ubr = qgt::best_response_unitary(g, opp, 1);
  std::printf("within the unitary set: value %.6g at angle %.6g\n", ubr.value,
              qgt::family_angle(ubr.params));
  const qgt::CVector oc = qgt::to_cvector(qgt::expand(qgt::unitary_theta_phi(opp)));
  const qgt::BestResponse fbr =
      qgt::best_response_full(qgt::reduced_payoff(h1, qgt::outer(oc, oc), 1));
  std::printf("unconstrained:          value %.6g\n", fbr.value);

  std::printf("\n== classical profile scan ==\n");
  const qgt::ClassicalScanResult classical = qgt::classical_ne_scan(g);
  for (const qgt::ClassicalProfile& pr : classical.profiles) {
    std::printf("%s,%s: E=(%.1f, %.1f) margin=%.6g%s\n", qgt::base_strategy_name(pr.s1),
                qgt::base_strategy_name(pr.s2), pr.e1, pr.e2, pr.margin, pr.ne ? "  <- NE" : "");
  }

  std::printf("\n== unitary profile scan (16x16x16 grid) ==\n");
  const qgt::UnitaryScanResult scan = qgt::unitary_profile_scan(g, 16);
  std::printf("%zu cells scanned, equilibrium cells: %zu\n", scan.rows.size(),
              scan.equilibria.size());
  for (const qgt::ScanEquilibrium& eq : scan.equilibria) {
    std::printf("NE at gamma=(%.6g, %.6g): E=(%.1f, %.1f), margin %.3g\n", eq.params1.gamma,
                eq.params2.gamma, eq.report.payoffs[0], eq.report.payoffs[1],
                eq.report.deviation_margin);
  }

  std::printf("\n== shared eigenstates ==\n");
  const qgt::GesReport ges = qgt::ges_search(h1, h2);
  std::printf("verdict: %s, top values (%.6g, %.6g), top intersection dim %zu\n",
              qgt::equilibrium_kind_name(ges.kind), ges.top_value1, ges.top_value2,
              ges.top_intersection_dim);
  for (const qgt::CommonEigenstate& c : ges.common_eigenstates) {
    if (std::abs(c.value1) < 1e-9 && std::abs(c.value2) < 1e-9) continue;  // skip the null block
    std::printf("shared state at values (%.6g, %.6g), product=%s, unitary factors=(%s,%s)\n",
                c.value1, c.value2, c.product_state ? "yes" : "no",
                c.unitary_flags[0] ? "yes" : "no", c.unitary_flags[1] ? "yes" : "no");
  }
  return 0;
}
