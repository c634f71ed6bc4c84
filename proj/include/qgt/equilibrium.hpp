#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>
#include <variant>
#include <vector>

#include "qgt/cmatrix.hpp"
#include "qgt/eig.hpp"
#include "qgt/game.hpp"
#include "qgt/strategy.hpp"

namespace qgt {

// ---------------------------------------------------------------------------
// Spectrum analysis

// Eigendecomposition of a payoff tensor with degenerate eigenvalues grouped
// into clusters. Individual eigenvectors inside a degenerate cluster are not
// canonical; subspace comparisons must go through the projectors.
struct SpectrumReport {
  EigenDecomposition decomposition;
  std::vector<std::vector<std::size_t>> clusters;  // index groups, descending value
  std::vector<double> cluster_values;              // representative value per cluster
  std::vector<CMatrix> projectors;                 // spectral projector per cluster
};

inline SpectrumReport spectrum(const PayoffTensor& h, double cluster_tol = 1e-8) {
  if (cluster_tol <= 0.0) {
    throw std::invalid_argument("qgt::spectrum: cluster_tol must be positive");
  }
  SpectrumReport out;
  out.decomposition = eig_hermitian(h.matrix);
  const std::vector<double>& vals = out.decomposition.eigenvalues;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (k == 0 || std::abs(vals[k] - vals[k - 1]) > cluster_tol) {
      out.clusters.emplace_back();
    }
    out.clusters.back().push_back(k);
  }
  const std::size_t n = h.matrix.rows();
  for (const std::vector<std::size_t>& cluster : out.clusters) {
    double mean = 0.0;
    CMatrix proj(n, n);
    for (std::size_t k : cluster) {
      mean += vals[k];
      const CVector v = eigenvector(out.decomposition, k);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          proj(i, j) += v[i] * std::conj(v[j]);
        }
      }
    }
    out.cluster_values.push_back(mean / static_cast<double>(cluster.size()));
    out.projectors.push_back(std::move(proj));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Product-state factorization

// Attempt to split a 16-dim system state into a tensor product a x b of two
// 4-dim single-player states, by a rank test on the 4x4 coefficient matrix.
struct ProductFactors {
  bool is_product = false;
  CVector a;
  CVector b;
};

inline ProductFactors factor_product_state(const CVector& v, double tol = 1e-8) {
  if (v.size() != 16) {
    throw std::invalid_argument("qgt::factor_product_state: system state has 16 components");
  }
  ProductFactors out;
  const double nrm = norm(v);
  if (nrm <= tol) return out;
  CMatrix m(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      m(i, j) = v[4 * i + j];
    }
  }
  // v = a x b iff m = a b^T (rank one). The top eigenvector of m^dagger m is
  // conj(b) up to phase, and m conj(b) recovers a.
  const EigenDecomposition ed = eig_hermitian(matmul(dagger(m), m));
  const CVector top = eigenvector(ed, 0);
  out.b.resize(4);
  for (std::size_t j = 0; j < 4; ++j) out.b[j] = std::conj(top[j]);
  out.a = matvec(m, top);
  double residual = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      residual += std::norm(m(i, j) - out.a[i] * out.b[j]);
    }
  }
  out.is_product = std::sqrt(residual) <= tol * nrm;
  return out;
}

// Unitarity of the operator forms of a product state's two factors. A factor
// of norm 1 is the coefficient vector of a unitary iff its reconstruction
// passes the Frobenius test.
inline std::array<bool, 2> factor_unitary_flags(const ProductFactors& f, double tol = 1e-8) {
  if (!f.is_product) return {false, false};
  std::array<bool, 2> flags = {false, false};
  const std::array<const CVector*, 2> factors = {&f.a, &f.b};
  for (std::size_t k = 0; k < 2; ++k) {
    CVector c = *factors[k];
    const double n = norm(c);
    if (n <= 0.0) continue;
    for (Complex& z : c) z /= n;
    flags[k] = is_unitary(reconstruct(from_cvector(c)), tol);
  }
  return flags;
}

// ---------------------------------------------------------------------------
// Equilibrium reports

enum class EquilibriumKind { ClassicalNe, UnitaryNe, NonUnitaryCandidate, Ges, None };

inline const char* equilibrium_kind_name(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::ClassicalNe: return "classical-NE";
    case EquilibriumKind::UnitaryNe: return "unitary-NE";
    case EquilibriumKind::NonUnitaryCandidate: return "non-unitary-candidate";
    case EquilibriumKind::Ges: return "GES";
    case EquilibriumKind::None: return "none";
  }
  throw std::invalid_argument("qgt::equilibrium_kind_name: unknown kind");
}

// Verdict on one candidate state. deviation_margin is the best payoff gain
// any single player can reach by replacing their own marginal (deviations
// normalized to unit Hilbert-Schmidt norm); at or below tolerance means no
// profitable deviation exists in the examined strategy set.
struct EquilibriumReport {
  EquilibriumKind kind = EquilibriumKind::None;
  CMatrix state;  // 16x16 system strategy density
  std::array<double, 2> payoffs = {0.0, 0.0};
  std::array<bool, 2> unitary_flags = {false, false};
  double deviation_margin = 0.0;
  std::array<double, 2> player_margins = {0.0, 0.0};
};

// ---------------------------------------------------------------------------
// Reduced payoff and best responses

// Payoff tensor contracted against a fixed opponent density: the quadratic
// form <s|H_R|s> is the player's payoff for strategy coefficients s.
struct ReducedPayoff {
  CMatrix matrix;  // 4x4 Hermitian
  int player = 0;
  CMatrix opponent_density;  // 4x4
};

inline ReducedPayoff reduced_payoff(const PayoffTensor& h, const CMatrix& opponent, int player) {
  if (player != 1 && player != 2) {
    throw std::invalid_argument("qgt::reduced_payoff: player must be 1 or 2");
  }
  if (opponent.rows() != 4 || opponent.cols() != 4) {
    throw std::invalid_argument("qgt::reduced_payoff: opponent density is 4x4");
  }
  validate_density(opponent);
  ReducedPayoff out;
  out.player = player;
  out.opponent_density = opponent;
  out.matrix = CMatrix(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      Complex sum(0.0, 0.0);
      for (std::size_t b = 0; b < 4; ++b) {
        for (std::size_t d = 0; d < 4; ++d) {
          const Complex& w = opponent(b, d);
          if (w == Complex(0.0, 0.0)) continue;
          if (player == 1) {
            sum += w * h.matrix(4 * i + d, 4 * j + b);
          } else {
            sum += w * h.matrix(4 * d + i, 4 * b + j);
          }
        }
      }
      out.matrix(i, j) = sum;
    }
  }
  return out;
}

// Unconstrained best response: the top eigenvector of H_R over unit-norm
// coefficient vectors. Generally a non-unitary operator.
struct BestResponse {
  StrategyVector strategy;
  double value = 0.0;
};

inline BestResponse best_response_full(const ReducedPayoff& hr) {
  const EigenDecomposition ed = eig_hermitian(hr.matrix);
  BestResponse out;
  out.value = ed.eigenvalues[0];
  out.strategy = from_cvector(eigenvector(ed, 0));
  return out;
}

namespace detail {

// Every unitary strategy's coefficient vector is diag(1,-i,-i,-i) * a with a
// real and unit norm, so the payoff restricted to the unitary manifold is the
// real quadratic form a^T Re(T^dagger H_R T) a.
inline CMatrix unitary_form_matrix(const CMatrix& hr) {
  const std::array<Complex, 4> tdiag = {Complex(1.0, 0.0), Complex(0.0, -1.0),
                                        Complex(0.0, -1.0), Complex(0.0, -1.0)};
  CMatrix s(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const Complex m = std::conj(tdiag[i]) * hr(i, j) * tdiag[j];
      s(i, j) = Complex(m.real(), 0.0);
    }
  }
  // Symmetrize away roundoff so the eigensolver sees an exact real form.
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      const double avg = 0.5 * (s(i, j).real() + s(j, i).real());
      s(i, j) = avg;
      s(j, i) = avg;
    }
  }
  return s;
}

inline CVector unitary_coeffs_from_real(const std::array<double, 4>& a) {
  return CVector{Complex(a[0], 0.0), Complex(0.0, -a[1]), Complex(0.0, -a[2]),
                 Complex(0.0, -a[3])};
}

// Real unit vector maximizing a^T S a. Ties in the top eigenvalue are broken
// toward the largest a0^2 + a2^2 (the smallest-gamma representative).
inline std::array<double, 4> top_real_direction(const CMatrix& s) {
  const EigenDecomposition ed = eig_hermitian(s);
  const double scale = std::max(1.0, std::abs(ed.eigenvalues[0]));
  std::size_t mult = 1;
  while (mult < 4 && ed.eigenvalues[0] - ed.eigenvalues[mult] <= 1e-12 * scale) ++mult;

  std::array<double, 4> a{};
  if (mult == 1) {
    for (std::size_t i = 0; i < 4; ++i) a[i] = ed.eigenvectors(i, 0).real();
  } else {
    // Maximize a0^2 + a2^2 inside the degenerate top eigenspace: top
    // eigenvector of the projected form V^T diag(1,0,1,0) V.
    CMatrix b(mult, mult);
    for (std::size_t u = 0; u < mult; ++u) {
      for (std::size_t w = 0; w < mult; ++w) {
        Complex sum(0.0, 0.0);
        for (std::size_t i : {std::size_t{0}, std::size_t{2}}) {
          sum += std::conj(ed.eigenvectors(i, u)) * ed.eigenvectors(i, w);
        }
        b(u, w) = sum;
      }
    }
    const EigenDecomposition bd = eig_hermitian(b);
    for (std::size_t i = 0; i < 4; ++i) {
      Complex sum(0.0, 0.0);
      for (std::size_t u = 0; u < mult; ++u) {
        sum += ed.eigenvectors(i, u) * bd.eigenvectors(u, 0);
      }
      a[i] = sum.real();
    }
  }
  double nrm = 0.0;
  for (double x : a) nrm += x * x;
  nrm = std::sqrt(nrm);
  if (nrm <= 0.0) {
    a = {1.0, 0.0, 0.0, 0.0};
    nrm = 1.0;
  }
  for (double& x : a) x /= nrm;
  return a;
}

inline double wrap_pi(double x) {
  while (x > M_PI) x -= 2.0 * M_PI;
  while (x < -M_PI) x += 2.0 * M_PI;
  return x;
}

// Recover (alpha, beta, gamma) from a real coefficient direction
//   a = (cos(g/2)cos(sg), sin(g/2)sin(dl), cos(g/2)sin(sg), sin(g/2)cos(dl))
// with sg = (alpha+beta)/2 and dl = (alpha-beta)/2. The overall sign of a is
// a global phase and does not matter.
inline EulerAngles euler_from_real_direction(const std::array<double, 4>& a) {
  const double cg = std::hypot(a[0], a[2]);
  const double sg = std::hypot(a[1], a[3]);
  EulerAngles p;
  p.gamma = 2.0 * std::atan2(sg, cg);
  const double sum = (cg > 1e-15) ? std::atan2(a[2], a[0]) : 0.0;
  const double dif = (sg > 1e-15) ? std::atan2(a[1], a[3]) : 0.0;
  p.alpha = wrap_pi(sum + dif);
  p.beta = wrap_pi(sum - dif);
  return p;
}

inline double quadratic_form(const CMatrix& h, const CVector& c) {
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < h.cols(); ++j) {
      sum += std::conj(c[i]) * h(i, j) * c[j];
    }
  }
  return sum.real();
}

}  // namespace detail

// Exact maximum of <u|H_R|u> over coefficient vectors of unitary operators.
inline double unitary_max_value(const CMatrix& hr) {
  const std::array<double, 4> a = detail::top_real_direction(detail::unitary_form_matrix(hr));
  return detail::quadratic_form(hr, detail::unitary_coeffs_from_real(a));
}

// Parameters achieving that maximum.
inline EulerAngles unitary_argmax(const CMatrix& hr) {
  const std::array<double, 4> a = detail::top_real_direction(detail::unitary_form_matrix(hr));
  return detail::euler_from_real_direction(a);
}

// Best response restricted to the unitary families. For the canonical game
// the closed-form payoff makes the argmax immediate (only the opponent's
// theta/gamma matters); otherwise the exact manifold maximum is used and the
// response is reported in (alpha, beta, gamma) form. The grid argument is
// kept for interface compatibility with scan-based callers; the maximization
// itself is exact.
struct UnitaryBestResponse {
  UnitaryParams params;
  double value = 0.0;
};

inline double family_angle(const UnitaryParams& p) {
  if (std::holds_alternative<ThetaPhi>(p)) return std::get<ThetaPhi>(p).theta;
  return std::get<EulerAngles>(p).gamma;
}

inline UnitaryBestResponse best_response_unitary(const GameDefinition& g,
                                                 const UnitaryParams& opponent, int player,
                                                 int grid = 16) {
  if (player != 1 && player != 2) {
    throw std::invalid_argument("qgt::best_response_unitary: player must be 1 or 2");
  }
  if (grid < 2) {
    throw std::invalid_argument("qgt::best_response_unitary: grid resolution must be >= 2");
  }
  UnitaryBestResponse out;
  if (g.params) {
    const double opp = family_angle(opponent);
    const double co = std::cos(0.5 * opp) * std::cos(0.5 * opp);
    const double so = 1.0 - co;
    const double eps1 = g.params->r * co + g.params->s * so;
    const double eps2 = g.params->t * co + g.params->p * so;
    // Own payoff is eps1*cos^2(x/2) + eps2*sin^2(x/2); ties resolve to the
    // smaller angle.
    const double angle = (eps2 > eps1) ? M_PI : 0.0;
    out.value = std::max(eps1, eps2);
    if (std::holds_alternative<ThetaPhi>(opponent)) {
      out.params = ThetaPhi{angle, 0.0};
    } else {
      out.params = EulerAngles{0.0, 0.0, angle};
    }
    return out;
  }
  const PayoffTensor h = build_payoff_tensor(g, player);
  const CVector oppc = to_cvector(expand(unitary_operator(opponent)));
  const ReducedPayoff hr = reduced_payoff(h, outer(oppc, oppc), player);
  const std::array<double, 4> a =
      detail::top_real_direction(detail::unitary_form_matrix(hr.matrix));
  out.params = detail::euler_from_real_direction(a);
  out.value = detail::quadratic_form(hr.matrix, detail::unitary_coeffs_from_real(a));
  return out;
}

// ---------------------------------------------------------------------------
// NE verification

enum class StrategySet { Full, Unitary, Classical };

inline const char* strategy_set_name(StrategySet s) {
  switch (s) {
    case StrategySet::Full: return "full";
    case StrategySet::Unitary: return "unitary";
    case StrategySet::Classical: return "classical";
  }
  throw std::invalid_argument("qgt::strategy_set_name: unknown strategy set");
}

inline StrategySet strategy_set_from_name(const std::string& name) {
  if (name == "full") return StrategySet::Full;
  if (name == "unitary") return StrategySet::Unitary;
  if (name == "classical") return StrategySet::Classical;
  throw std::invalid_argument("qgt::strategy_set_from_name: unknown set '" + name + "'");
}

namespace detail {

inline double best_in_set(const CMatrix& hr, StrategySet set) {
  switch (set) {
    case StrategySet::Full:
      return eig_hermitian(hr).eigenvalues[0];
    case StrategySet::Unitary:
      return unitary_max_value(hr);
    case StrategySet::Classical:
      return std::max(hr(0, 0).real(), hr(1, 1).real());
  }
  throw std::invalid_argument("qgt::detail::best_in_set: unknown strategy set");
}

// Random unit-norm probes from a strategy set, as a bug guard on the exact
// maximizers; a probe can only raise the computed margin.
inline double probe_best(const CMatrix& hr, StrategySet set, std::size_t samples,
                         std::mt19937_64& rng) {
  double best = -std::numeric_limits<double>::infinity();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> ab(-M_PI, M_PI);
  std::uniform_real_distribution<double> gm(0.0, M_PI);
  std::uniform_real_distribution<double> pr(0.0, 1.0);
  for (std::size_t k = 0; k < samples; ++k) {
    CVector c(4);
    if (set == StrategySet::Full) {
      for (Complex& z : c) z = Complex(u(rng), u(rng));
      const double n = norm(c);
      if (n <= 0.0) continue;
      for (Complex& z : c) z /= n;
    } else if (set == StrategySet::Unitary) {
      c = to_cvector(unitary_general_coeffs(EulerAngles{ab(rng), ab(rng), gm(rng)}));
    } else {
      c = CVector(4, Complex(0.0, 0.0));
      c[pr(rng) < 0.5 ? 0 : 1] = 1.0;
    }
    best = std::max(best, quadratic_form(hr, c));
  }
  return best;
}

inline std::array<bool, 2> density_unitary_flags(const CMatrix& rho) {
  const EigenDecomposition ed = eig_hermitian(rho);
  if (ed.eigenvalues[0] < 1.0 - 1e-8) return {false, false};  // mixed state
  return factor_unitary_flags(factor_product_state(eigenvector(ed, 0)));
}

}  // namespace detail

// Check a candidate 16x16 strategy density against the equilibrium condition:
// no single player may gain by swapping their own marginal for any strategy
// in the chosen set. Margins are computed from the exact per-set maxima of
// the reduced payoff, plus optional random probing.
inline EquilibriumReport verify_ne(const GameDefinition& g, const PayoffTensor& h1,
                                   const PayoffTensor& h2, const CMatrix& rho,
                                   StrategySet set, double tol = 1e-9,
                                   std::size_t samples = 0) {
  (void)g;
  if (tol <= 0.0) {
    throw std::invalid_argument("qgt::verify_ne: tol must be positive");
  }
  if (rho.rows() != 16 || rho.cols() != 16) {
    throw std::invalid_argument("qgt::verify_ne: system density is 16x16");
  }
  validate_density(rho);

  EquilibriumReport out;
  out.state = rho;
  out.payoffs = {detail::check_real(trace(matmul(rho, h1.matrix)), kScalarTol, "qgt::verify_ne"),
                 detail::check_real(trace(matmul(rho, h2.matrix)), kScalarTol, "qgt::verify_ne")};

  std::mt19937_64 rng(20250819u);
  for (int player = 1; player <= 2; ++player) {
    // Marginal of the *other* player: tracing out player i leaves the
    // opponent's density, which is what the deviating player plays against.
    const CMatrix marginal = partial_trace(rho, 4, 4, player == 1 ? 0 : 1);
    const ReducedPayoff hr = reduced_payoff(player == 1 ? h1 : h2, marginal, player);
    double best = detail::best_in_set(hr.matrix, set);
    if (samples > 0) {
      best = std::max(best, detail::probe_best(hr.matrix, set, samples, rng));
    }
    out.player_margins[player - 1] = best - out.payoffs[player - 1];
  }
  out.deviation_margin = std::max(out.player_margins[0], out.player_margins[1]);
  out.unitary_flags = detail::density_unitary_flags(rho);

  if (out.deviation_margin <= tol) {
    switch (set) {
      case StrategySet::Classical:
        out.kind = EquilibriumKind::ClassicalNe;
        break;
      case StrategySet::Unitary:
        out.kind = EquilibriumKind::UnitaryNe;
        break;
      case StrategySet::Full:
        out.kind = (out.unitary_flags[0] && out.unitary_flags[1])
                       ? EquilibriumKind::UnitaryNe
                       : EquilibriumKind::NonUnitaryCandidate;
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// GES search

// One common eigenvector of both payoff tensors, with its eigenvalue under
// each and the unitarity of its factors when it splits as a product.
struct CommonEigenstate {
  double value1 = 0.0;
  double value2 = 0.0;
  CVector state;
  bool product_state = false;
  std::array<bool, 2> unitary_flags = {false, false};
};

struct GesReport {
  EquilibriumKind kind = EquilibriumKind::None;  // Ges or None
  double top_value1 = 0.0;
  double top_value2 = 0.0;
  std::size_t top_intersection_dim = 0;
  std::vector<CommonEigenstate> common_eigenstates;
  std::optional<EquilibriumReport> ges_state;
};

// A GES exists iff the two top eigenspaces share a state. All cluster-pair
// intersections are reported so shared sub-maximal eigenvectors show up too.
// Intersections are computed from the projector product P1 P2 P1, whose
// eigenvalues near 1 count the common directions.
inline GesReport ges_search(const PayoffTensor& h1, const PayoffTensor& h2, double tol = 1e-8) {
  if (tol <= 0.0) {
    throw std::invalid_argument("qgt::ges_search: tol must be positive");
  }
  const SpectrumReport s1 = spectrum(h1, tol);
  const SpectrumReport s2 = spectrum(h2, tol);
  GesReport out;
  out.top_value1 = s1.cluster_values[0];
  out.top_value2 = s2.cluster_values[0];
  for (std::size_t i = 0; i < s1.clusters.size(); ++i) {
    for (std::size_t j = 0; j < s2.clusters.size(); ++j) {
      const CMatrix q = matmul(s1.projectors[i], matmul(s2.projectors[j], s1.projectors[i]));
      const EigenDecomposition ed = eig_hermitian(q);
      for (std::size_t k = 0; k < ed.eigenvalues.size(); ++k) {
        if (ed.eigenvalues[k] < 1.0 - tol) break;
        CommonEigenstate c;
        c.value1 = s1.cluster_values[i];
        c.value2 = s2.cluster_values[j];
        c.state = eigenvector(ed, k);
        const ProductFactors f = factor_product_state(c.state);
        c.product_state = f.is_product;
        c.unitary_flags = factor_unitary_flags(f);
        if (i == 0 && j == 0) ++out.top_intersection_dim;
        out.common_eigenstates.push_back(std::move(c));
      }
    }
  }
  if (out.top_intersection_dim > 0) {
    out.kind = EquilibriumKind::Ges;
    // Use the first witness state for the summary report.
    for (const CommonEigenstate& c : out.common_eigenstates) {
      if (c.value1 == out.top_value1 && c.value2 == out.top_value2) {
        EquilibriumReport rep;
        rep.kind = EquilibriumKind::Ges;
        rep.state = pure_density(c.state);
        rep.payoffs = {c.value1, c.value2};
        rep.unitary_flags = c.unitary_flags;
        for (int player = 1; player <= 2; ++player) {
          const CMatrix marginal = partial_trace(rep.state, 4, 4, player == 1 ? 0 : 1);
          const ReducedPayoff hr =
              reduced_payoff(player == 1 ? h1 : h2, marginal, player);
          rep.player_margins[player - 1] =
              eig_hermitian(hr.matrix).eigenvalues[0] - rep.payoffs[player - 1];
        }
        rep.deviation_margin = std::max(rep.player_margins[0], rep.player_margins[1]);
        out.ges_state = std::move(rep);
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Closed-form payoff for unitary product profiles

// For the canonical game only the polar angles matter:
//   E = (r cos^2(o/2) + s sin^2(o/2)) cos^2(w/2)
//     + (t cos^2(o/2) + p sin^2(o/2)) sin^2(w/2)
// with w the player's own theta/gamma and o the opponent's.
inline double closed_form_payoff(const UnitaryParams& u1, const UnitaryParams& u2,
                                 const PayoffParams& k, int player) {
  if (player != 1 && player != 2) {
    throw std::invalid_argument("qgt::closed_form_payoff: player must be 1 or 2");
  }
  const double own = family_angle(player == 1 ? u1 : u2);
  const double opp = family_angle(player == 1 ? u2 : u1);
  const double co = std::cos(0.5 * opp) * std::cos(0.5 * opp);
  const double so = 1.0 - co;
  const double cw = std::cos(0.5 * own) * std::cos(0.5 * own);
  const double sw = 1.0 - cw;
  return (k.r * co + k.s * so) * cw + (k.t * co + k.p * so) * sw;
}

// ---------------------------------------------------------------------------
// Profile scans

// One (gamma1, gamma2) cell of the unitary scan. e1/e2 are the payoffs at the
// cell's first (alpha, beta) grid combination; margin is the worst deviation
// margin across every (alpha, beta) combination in the cell, so a cell at or
// below tolerance certifies the whole alpha/beta family on the grid.
struct ScanRow {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double margin = 0.0;
};

struct ScanEquilibrium {
  EulerAngles params1;
  EulerAngles params2;
  EquilibriumReport report;
};

struct UnitaryScanResult {
  int grid = 0;
  double tol = 0.0;
  std::vector<ScanRow> rows;               // grid x grid cells, row-major in (gamma1, gamma2)
  std::vector<ScanEquilibrium> equilibria; // cells whose worst margin passes
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    out[static_cast<std::size_t>(k)] =
        lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace detail

// Scan product profiles of the three-angle unitary family on a grid and
// verify the equilibrium condition at every pair, with margins taken against
// the exact unitary-manifold best response. Grid order is gamma-major, so the
// first profile in a passing cell is its smallest-(alpha, beta)
// representative.
inline UnitaryScanResult unitary_profile_scan(const GameDefinition& g, int grid = 16,
                                              double tol = 1e-9) {
  if (grid < 2) {
    throw std::invalid_argument("qgt::unitary_profile_scan: grid resolution must be >= 2");
  }
  if (tol <= 0.0) {
    throw std::invalid_argument("qgt::unitary_profile_scan: tol must be positive");
  }
  const PayoffTensor h1 = build_payoff_tensor(g, 1);
  const PayoffTensor h2 = build_payoff_tensor(g, 2);
  const std::vector<double> gammas = detail::linspace(0.0, M_PI, grid);
  const std::vector<double> alphas = detail::linspace(-M_PI, M_PI, grid);
  const std::vector<double>& betas = alphas;

  const std::size_t n = static_cast<std::size_t>(grid);
  const std::size_t points = n * n * n;
  std::vector<EulerAngles> params(points);
  std::vector<std::array<Complex, 4>> coeffs(points);
  {
    std::size_t k = 0;
    for (std::size_t ig = 0; ig < n; ++ig) {
      for (std::size_t ia = 0; ia < n; ++ia) {
        for (std::size_t ib = 0; ib < n; ++ib, ++k) {
          params[k] = EulerAngles{alphas[ia], betas[ib], gammas[ig]};
          coeffs[k] = unitary_general_coeffs(params[k]).coeffs;
        }
      }
    }
  }

  // Reduced payoffs (flattened 4x4) and exact unitary maxima per opponent
  // point, for both players.
  std::vector<std::array<Complex, 16>> hr1(points), hr2(points);
  std::vector<double> umax1(points), umax2(points);
  for (std::size_t k = 0; k < points; ++k) {
    const std::array<Complex, 4>& u = coeffs[k];
    CMatrix m1(4, 4), m2(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) {
        Complex s1(0.0, 0.0), s2(0.0, 0.0);
        for (std::size_t b = 0; b < 4; ++b) {
          const Complex ub = u[b];
          if (ub == Complex(0.0, 0.0)) continue;
          for (std::size_t d = 0; d < 4; ++d) {
            const Complex w = ub * std::conj(u[d]);
            s1 += w * h1.matrix(4 * i + d, 4 * j + b);
            s2 += w * h2.matrix(4 * d + i, 4 * b + j);
          }
        }
        m1(i, j) = s1;
        m2(i, j) = s2;
      }
    }
    for (std::size_t e = 0; e < 16; ++e) {
      hr1[k][e] = m1.data()[e];
      hr2[k][e] = m2.data()[e];
    }
    umax1[k] = unitary_max_value(m1);
    umax2[k] = unitary_max_value(m2);
  }

  const std::size_t cell_pts = n * n;  // (alpha, beta) combinations per gamma
  UnitaryScanResult out;
  out.grid = grid;
  out.tol = tol;
  out.rows.resize(n * n);
  std::vector<double> worst1(n * n), worst2(n * n);

  for (std::size_t g1 = 0; g1 < n; ++g1) {
    for (std::size_t g2 = 0; g2 < n; ++g2) {
      const std::size_t cell = g1 * n + g2;
      double w1 = -std::numeric_limits<double>::infinity();
      double w2 = w1;
      ScanRow row;
      row.gamma1 = gammas[g1];
      row.gamma2 = gammas[g2];
      bool first = true;
      for (std::size_t a = g1 * cell_pts; a < (g1 + 1) * cell_pts; ++a) {
        const std::array<Complex, 4>& ca = coeffs[a];
        for (std::size_t b = g2 * cell_pts; b < (g2 + 1) * cell_pts; ++b) {
          const std::array<Complex, 4>& cb = coeffs[b];
          // e1 = <ca| hr1[b] |ca>, e2 = <cb| hr2[a] |cb>
          Complex acc1(0.0, 0.0), acc2(0.0, 0.0);
          const std::array<Complex, 16>& ra = hr1[b];
          const std::array<Complex, 16>& rb = hr2[a];
          for (std::size_t i = 0; i < 4; ++i) {
            Complex row1(0.0, 0.0), row2(0.0, 0.0);
            for (std::size_t j = 0; j < 4; ++j) {
              row1 += ra[4 * i + j] * ca[j];
              row2 += rb[4 * i + j] * cb[j];
            }
            acc1 += std::conj(ca[i]) * row1;
            acc2 += std::conj(cb[i]) * row2;
          }
          const double e1 = acc1.real();
          const double e2 = acc2.real();
          w1 = std::max(w1, umax1[b] - e1);
          w2 = std::max(w2, umax2[a] - e2);
          if (first) {
            row.e1 = e1;
            row.e2 = e2;
            first = false;
          }
        }
      }
      row.margin = std::max(w1, w2);
      out.rows[cell] = row;
      worst1[cell] = w1;
      worst2[cell] = w2;
    }
  }

  for (std::size_t g1 = 0; g1 < n; ++g1) {
    for (std::size_t g2 = 0; g2 < n; ++g2) {
      const std::size_t cell = g1 * n + g2;
      if (out.rows[cell].margin > tol) continue;
      const std::size_t a = g1 * cell_pts;
      const std::size_t b = g2 * cell_pts;
      ScanEquilibrium eq;
      eq.params1 = params[a];
      eq.params2 = params[b];
      EquilibriumReport rep;
      rep.kind = EquilibriumKind::UnitaryNe;
      const CVector state =
          kron_vec(CVector(coeffs[a].begin(), coeffs[a].end()),
                   CVector(coeffs[b].begin(), coeffs[b].end()));
      rep.state = pure_density(state);
      rep.payoffs = {out.rows[cell].e1, out.rows[cell].e2};
      rep.unitary_flags = {true, true};
      rep.player_margins = {worst1[cell], worst2[cell]};
      rep.deviation_margin = out.rows[cell].margin;
      eq.report = std::move(rep);
      out.equilibria.push_back(std::move(eq));
    }
  }
  return out;
}

// The NE profiles found by the unitary scan, one report per passing
// (gamma1, gamma2) cell.
inline std::vector<EquilibriumReport> ne_family_scan(const GameDefinition& g, int grid = 16,
                                                     double tol = 1e-9) {
  const UnitaryScanResult scan = unitary_profile_scan(g, grid, tol);
  std::vector<EquilibriumReport> out;
  out.reserve(scan.equilibria.size());
  for (const ScanEquilibrium& eq : scan.equilibria) out.push_back(eq.report);
  return out;
}

// Pure-profile scan of the classical restriction (the 2x2 bimatrix game on
// Nc/Fc). Mixtures cannot beat the best pure deviation, so pure margins
// certify the full classical set.
struct ClassicalProfile {
  BaseStrategy s1 = BaseStrategy::Nc;
  BaseStrategy s2 = BaseStrategy::Nc;
  double e1 = 0.0;
  double e2 = 0.0;
  double margin = 0.0;
  bool ne = false;
};

struct ClassicalScanResult {
  std::vector<ClassicalProfile> profiles;  // all four pure profiles
  std::vector<EquilibriumReport> equilibria;
};

inline ClassicalScanResult classical_ne_scan(const GameDefinition& g, double tol = 1e-9) {
  if (tol <= 0.0) {
    throw std::invalid_argument("qgt::classical_ne_scan: tol must be positive");
  }
  const std::array<BaseStrategy, 2> options = {BaseStrategy::Nc, BaseStrategy::Fc};
  double e1[2][2], e2[2][2];
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      const CMatrix sa = base_operator(options[a]);
      const CMatrix sb = base_operator(options[b]);
      e1[a][b] = payoff_operator_form(g, sa, sb, 1);
      e2[a][b] = payoff_operator_form(g, sa, sb, 2);
    }
  }
  ClassicalScanResult out;
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      ClassicalProfile prof;
      prof.s1 = options[a];
      prof.s2 = options[b];
      prof.e1 = e1[a][b];
      prof.e2 = e2[a][b];
      const double m1 = std::max(e1[0][b], e1[1][b]) - e1[a][b];
      const double m2 = std::max(e2[a][0], e2[a][1]) - e2[a][b];
      prof.margin = std::max(m1, m2);
      prof.ne = prof.margin <= tol;
      if (prof.ne) {
        EquilibriumReport rep;
        rep.kind = EquilibriumKind::ClassicalNe;
        CVector va(4, Complex(0.0, 0.0)), vb(4, Complex(0.0, 0.0));
        va[a] = 1.0;
        vb[b] = 1.0;
        rep.state = pure_density(kron_vec(va, vb));
        rep.payoffs = {prof.e1, prof.e2};
        rep.unitary_flags = {true, true};
        rep.player_margins = {m1, m2};
        rep.deviation_margin = prof.margin;
        out.equilibria.push_back(std::move(rep));
      }
      out.profiles.push_back(prof);
    }
  }
  return out;
}

}  // namespace qgt
