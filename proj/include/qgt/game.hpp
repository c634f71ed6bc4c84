#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>

#include "qgt/cmatrix.hpp"
#include "qgt/eig.hpp"
#include "qgt/strategy.hpp"

namespace qgt {

// Scalar payoff parameters of the canonical game. The dilemma ordering is
// t > r > p > s; construction does not enforce it, equilibrium analysis cares.
struct PayoffParams {
  double r = 0.0;
  double s = 0.0;
  double t = 0.0;
  double p = 0.0;
};

// Throws unless rho is Hermitian, positive semidefinite and unit-trace,
// all within tol.
inline void validate_density(const CMatrix& rho, double tol = 1e-10) {
  if (rho.rows() != rho.cols()) {
    throw std::invalid_argument("qgt::validate_density: density must be square");
  }
  if (!is_hermitian(rho, tol)) {
    throw std::invalid_argument("qgt::validate_density: density is not Hermitian");
  }
  const Complex tr = trace(rho);
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    throw std::invalid_argument("qgt::validate_density: trace is not 1");
  }
  const EigenDecomposition ed = eig_hermitian(rho);
  if (ed.eigenvalues.back() < -tol) {
    throw std::invalid_argument("qgt::validate_density: density has a negative eigenvalue");
  }
}

// A two-player game: initial 4x4 density of the shared quantum object and a
// Hermitian 4x4 payoff scale matrix per player, both expressed in the product
// basis (|UU>, |UD>, |DU>, |DD>). params is set when the game was built as
// the canonical Prisoner's Dilemma.
struct GameDefinition {
  CMatrix rho0;
  CMatrix p1;
  CMatrix p2;
  std::optional<PayoffParams> params;
};

// Canonical Prisoner's Dilemma: both particles start in |U>, player 1 is paid
// by diag(r,s,t,p) and player 2 by diag(r,t,s,p) over (UU,UD,DU,DD).
inline GameDefinition canonical_pd(double r, double s, double t, double p) {
  GameDefinition g;
  g.rho0 = CMatrix(4, 4);
  g.rho0(0, 0) = 1.0;
  g.p1 = CMatrix(4, 4);
  g.p2 = CMatrix(4, 4);
  const std::array<double, 4> d1 = {r, s, t, p};
  const std::array<double, 4> d2 = {r, t, s, p};
  for (std::size_t i = 0; i < 4; ++i) {
    g.p1(i, i) = d1[i];
    g.p2(i, i) = d2[i];
  }
  g.params = PayoffParams{r, s, t, p};
  return g;
}

inline GameDefinition general_game(CMatrix rho0, CMatrix p1, CMatrix p2) {
  if (rho0.rows() != 4 || p1.rows() != 4 || p2.rows() != 4) {
    throw std::invalid_argument("qgt::general_game: two-particle game needs 4x4 matrices");
  }
  validate_density(rho0);
  if (!is_hermitian(p1, 1e-10) || !is_hermitian(p2, 1e-10)) {
    throw std::invalid_argument("qgt::general_game: payoff scale matrices must be Hermitian");
  }
  GameDefinition g;
  g.rho0 = std::move(rho0);
  g.p1 = std::move(p1);
  g.p2 = std::move(p2);
  return g;
}

inline const CMatrix& payoff_scale(const GameDefinition& g, int player) {
  if (player == 1) return g.p1;
  if (player == 2) return g.p2;
  throw std::invalid_argument("qgt::payoff_scale: player must be 1 or 2");
}

// Player i's payoff matrix on the 16-dim system strategy space; system index
// 4*a1 + a2 pairs base operator a1 of player 1 with a2 of player 2.
struct PayoffTensor {
  int player = 0;
  CMatrix matrix;
};

namespace detail {

// The 16 product base operators in system order.
inline std::array<CMatrix, 16> system_base_operators() {
  std::array<CMatrix, 16> ops;
  for (std::size_t a = 0; a < 4; ++a) {
    const CMatrix ba = base_operator(kBaseOrder[a]);
    for (std::size_t b = 0; b < 4; ++b) {
      ops[4 * a + b] = kron(ba, base_operator(kBaseOrder[b]));
    }
  }
  return ops;
}

// Frobenius inner product Tr(b a^dagger) = sum conj(a_ij) b_ij.
inline Complex fro_dot(const CMatrix& a, const CMatrix& b) {
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a.data()[i]) * b.data()[i];
  return sum;
}

inline double check_real(Complex value, double tol, const char* who) {
  if (std::abs(value.imag()) > tol) {
    throw std::runtime_error(std::string(who) +
                             ": payoff has non-negligible imaginary part " +
                             std::to_string(value.imag()));
  }
  return value.real();
}

}  // namespace detail

// H(row a, col b) = Tr(P (b1 x b2) rho0 (a1 x a2)^dagger); the row index
// carries the dagger.
inline PayoffTensor build_payoff_tensor(const GameDefinition& g, int player) {
  const CMatrix& scale = payoff_scale(g, player);
  const std::array<CMatrix, 16> ops = detail::system_base_operators();
  PayoffTensor h;
  h.player = player;
  h.matrix = CMatrix(16, 16);
  for (std::size_t b = 0; b < 16; ++b) {
    const CMatrix m = matmul(scale, matmul(ops[b], g.rho0));
    for (std::size_t a = 0; a < 16; ++a) {
      h.matrix(a, b) = detail::fro_dot(ops[a], m);
    }
  }
  return h;
}

// Tr(P (u1 x u2) rho0 (u1 x u2)^dagger). Operators need not be unitary.
inline double payoff_operator_form(const GameDefinition& g, const CMatrix& u1,
                                   const CMatrix& u2, int player) {
  if (u1.rows() != 2 || u1.cols() != 2 || u2.rows() != 2 || u2.cols() != 2) {
    throw std::invalid_argument("qgt::payoff_operator_form: strategy operators are 2x2");
  }
  const CMatrix l = kron(u1, u2);
  const Complex value = trace(matmul(payoff_scale(g, player), matmul(l, matmul(g.rho0, dagger(l)))));
  return detail::check_real(value, kScalarTol, "qgt::payoff_operator_form");
}

// <S|H|S> for a 16-dim system strategy state.
inline double payoff_state_form(const PayoffTensor& h, const CVector& state) {
  if (state.size() != 16) {
    throw std::invalid_argument("qgt::payoff_state_form: system state has 16 components");
  }
  const Complex value = vdot(state, matvec(h.matrix, state));
  return detail::check_real(value, kScalarTol, "qgt::payoff_state_form");
}

// Tr(rho H) for a 16x16 strategy density.
inline double payoff_density_form(const PayoffTensor& h, const CMatrix& rho) {
  if (rho.rows() != 16) {
    throw std::invalid_argument("qgt::payoff_density_form: system density is 16x16");
  }
  validate_density(rho);
  const Complex value = trace(matmul(rho, h.matrix));
  return detail::check_real(value, kScalarTol, "qgt::payoff_density_form");
}

// Restriction of H to the classical block spanned by Nc and Fc per player,
// system indices {0, 1, 4, 5}.
inline CMatrix classical_submatrix(const PayoffTensor& h) {
  const std::array<std::size_t, 4> idx = {0, 1, 4, 5};
  CMatrix out(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      out(i, j) = h.matrix(idx[i], idx[j]);
    }
  }
  return out;
}

inline CMatrix pure_density(const CVector& state) {
  const double n = norm(state);
  if (n <= 0.0) {
    throw std::invalid_argument("qgt::pure_density: zero state");
  }
  CVector unit = state;
  for (Complex& c : unit) c /= n;
  return outer(unit, unit);
}

inline CMatrix product_density(const CMatrix& rho1, const CMatrix& rho2) {
  if (rho1.rows() != 4 || rho2.rows() != 4) {
    throw std::invalid_argument("qgt::product_density: single-player densities are 4x4");
  }
  validate_density(rho1);
  validate_density(rho2);
  return kron(rho1, rho2);
}

// Classical mixture on one player's strategy space: p_nc on Nc, p_fc on Fc.
inline CMatrix classical_mixture_density(double p_nc, double p_fc) {
  if (p_nc < -1e-12 || p_fc < -1e-12 || std::abs(p_nc + p_fc - 1.0) > 1e-10) {
    throw std::invalid_argument("qgt::classical_mixture_density: probabilities must be >= 0 and sum to 1");
  }
  CMatrix rho(4, 4);
  rho(0, 0) = p_nc;
  rho(1, 1) = p_fc;
  return rho;
}

// Product system state |s1, s2> as 16 coefficients.
inline CVector system_state(const StrategyVector& v1, const StrategyVector& v2) {
  return kron_vec(to_cvector(v1), to_cvector(v2));
}

inline CVector system_state(const CMatrix& s1, const CMatrix& s2) {
  return system_state(expand(s1), expand(s2));
}

// Numerical check of the payoff-equivalence identity: operator-form and
// tensor-form payoffs agree for every pair of 2x2 strategy operators.
enum class SampleFamily { Arbitrary, Unitary };

struct TheoremCheck {
  double max_relative_gap = 0.0;
  std::size_t samples = 0;
  double tol = 0.0;
  bool passed = false;
};

namespace detail {

inline CMatrix random_operator(std::mt19937_64& rng, SampleFamily family) {
  if (family == SampleFamily::Unitary) {
    std::uniform_real_distribution<double> ab(-M_PI, M_PI);
    std::uniform_real_distribution<double> gm(0.0, M_PI);
    return unitary_general(EulerAngles{ab(rng), ab(rng), gm(rng)});
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMatrix m(2, 2);
  for (Complex& c : m.data()) c = Complex(u(rng), u(rng));
  return m;
}

}  // namespace detail

inline TheoremCheck theorem_check(const GameDefinition& g, std::size_t n,
                                  SampleFamily family, unsigned long seed,
                                  double tol = 1e-10) {
  const PayoffTensor h1 = build_payoff_tensor(g, 1);
  const PayoffTensor h2 = build_payoff_tensor(g, 2);
  std::mt19937_64 rng(seed);
  TheoremCheck out;
  out.samples = n;
  out.tol = tol;
  for (std::size_t k = 0; k < n; ++k) {
    const CMatrix s1 = detail::random_operator(rng, family);
    const CMatrix s2 = detail::random_operator(rng, family);
    const CVector state = system_state(s1, s2);
    for (int player = 1; player <= 2; ++player) {
      const double a = payoff_operator_form(g, s1, s2, player);
      const double b = payoff_state_form(player == 1 ? h1 : h2, state);
      const double gap = std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
      if (gap > out.max_relative_gap) out.max_relative_gap = gap;
    }
  }
  out.passed = out.max_relative_gap <= tol;
  return out;
}

}  // namespace qgt
