#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "qgt/cmatrix.hpp"

namespace qgt {

// The four base strategy operators, in canonical order. Nc/Fc act classically
// (keep / flip the particle), Nq/Fq are their phase-carrying counterparts.
enum class BaseStrategy { Nc = 0, Fc = 1, Nq = 2, Fq = 3 };

inline constexpr std::array<BaseStrategy, 4> kBaseOrder = {
    BaseStrategy::Nc, BaseStrategy::Fc, BaseStrategy::Nq, BaseStrategy::Fq};

inline const char* base_strategy_name(BaseStrategy b) {
  switch (b) {
    case BaseStrategy::Nc: return "Nc";
    case BaseStrategy::Fc: return "Fc";
    case BaseStrategy::Nq: return "Nq";
    case BaseStrategy::Fq: return "Fq";
  }
  throw std::invalid_argument("qgt::base_strategy_name: unknown base strategy");
}

inline BaseStrategy base_strategy_from_name(const std::string& name) {
  if (name == "Nc") return BaseStrategy::Nc;
  if (name == "Fc") return BaseStrategy::Fc;
  if (name == "Nq") return BaseStrategy::Nq;
  if (name == "Fq") return BaseStrategy::Fq;
  throw std::invalid_argument("qgt::base_strategy_from_name: unknown name '" + name + "'");
}

// Nc = identity, Fc = bit flip, Nq = phase flip, Fq = i * bit-and-phase flip.
inline CMatrix base_operator(BaseStrategy b) {
  CMatrix m(2, 2);
  switch (b) {
    case BaseStrategy::Nc:
      m(0, 0) = 1.0;
      m(1, 1) = 1.0;
      return m;
    case BaseStrategy::Fc:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      return m;
    case BaseStrategy::Nq:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      return m;
    case BaseStrategy::Fq:
      m(0, 1) = Complex(0.0, -1.0);
      m(1, 0) = Complex(0.0, 1.0);
      return m;
  }
  throw std::invalid_argument("qgt::base_operator: unknown base strategy");
}

// Trace inner product (s,t) = Tr(s^dagger t) / Tr(I), conjugate-linear in the
// first argument. The four base operators are orthonormal under it.
inline Complex inner_product(const CMatrix& s, const CMatrix& t) {
  if (s.rows() != s.cols() || t.rows() != t.cols() || s.rows() != t.rows()) {
    throw std::invalid_argument("qgt::inner_product: operators must be square and same size");
  }
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = 0; j < s.cols(); ++j) {
      sum += std::conj(s(i, j)) * t(i, j);
    }
  }
  return sum / static_cast<double>(s.rows());
}

// Parameters of the two unitary strategy families.
struct ThetaPhi {
  double theta = 0.0;
  double phi = 0.0;
};

struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

using UnitaryParams = std::variant<ThetaPhi, EulerAngles>;

// Coefficients of a strategy operator over the base operators, stored in the
// canonical order (Nc, Fc, Nq, Fq). Note: in the (xi, x, y, z) naming, y is
// the Fq coefficient and z the Nq coefficient, so storage is (xi, x, z, y).
struct StrategyVector {
  std::array<Complex, 4> coeffs{};

  Complex& operator[](std::size_t k) { return coeffs[k]; }
  const Complex& operator[](std::size_t k) const { return coeffs[k]; }

  double norm_sq() const {
    double sum = 0.0;
    for (const Complex& c : coeffs) sum += std::norm(c);
    return sum;
  }
};

inline CVector to_cvector(const StrategyVector& v) {
  return CVector(v.coeffs.begin(), v.coeffs.end());
}

inline StrategyVector from_cvector(const CVector& v) {
  if (v.size() != 4) {
    throw std::invalid_argument("qgt::from_cvector: strategy vector needs 4 coefficients");
  }
  StrategyVector out;
  for (std::size_t k = 0; k < 4; ++k) out[k] = v[k];
  return out;
}

// Two-parameter unitary family:
//   [[ e^{i phi} cos(theta/2),  sin(theta/2)            ],
//    [ -sin(theta/2),           e^{-i phi} cos(theta/2) ]]
// (theta, phi) = (0, 0) is Nc; theta = pi gives i*Fq for every phi.
inline CMatrix unitary_theta_phi(const ThetaPhi& p) {
  if (!std::isfinite(p.theta) || !std::isfinite(p.phi)) {
    throw std::invalid_argument("qgt::unitary_theta_phi: angles must be finite");
  }
  const double c = std::cos(0.5 * p.theta);
  const double s = std::sin(0.5 * p.theta);
  const Complex eip(std::cos(p.phi), std::sin(p.phi));
  CMatrix m(2, 2);
  m(0, 0) = eip * c;
  m(0, 1) = s;
  m(1, 0) = -s;
  m(1, 1) = std::conj(eip) * c;
  return m;
}

// Three-parameter unitary family, built from its expansion over the base
// operators:
//   cos(g/2)cos((a+b)/2) Nc - i sin(g/2)sin((a-b)/2) Fc
//   - i cos(g/2)sin((a+b)/2) Nq - i sin(g/2)cos((a-b)/2) Fq
// gamma = pi collapses onto the span of Fc and Fq for every alpha, beta.
inline StrategyVector unitary_general_coeffs(const EulerAngles& p) {
  if (!std::isfinite(p.alpha) || !std::isfinite(p.beta) || !std::isfinite(p.gamma)) {
    throw std::invalid_argument("qgt::unitary_general_coeffs: angles must be finite");
  }
  const double cg = std::cos(0.5 * p.gamma);
  const double sg = std::sin(0.5 * p.gamma);
  const double sum = 0.5 * (p.alpha + p.beta);
  const double dif = 0.5 * (p.alpha - p.beta);
  StrategyVector v;
  v[0] = cg * std::cos(sum);
  v[1] = Complex(0.0, -1.0) * (sg * std::sin(dif));
  v[2] = Complex(0.0, -1.0) * (cg * std::sin(sum));
  v[3] = Complex(0.0, -1.0) * (sg * std::cos(dif));
  return v;
}

// Linear combination of base operators with the given coefficients.
inline CMatrix reconstruct(const StrategyVector& v) {
  CMatrix m(2, 2);
  for (std::size_t k = 0; k < 4; ++k) {
    if (v[k] == Complex(0.0, 0.0)) continue;
    const CMatrix b = base_operator(kBaseOrder[k]);
    for (std::size_t i = 0; i < 4; ++i) m.data()[i] += v[k] * b.data()[i];
  }
  return m;
}

inline CMatrix unitary_general(const EulerAngles& p) {
  return reconstruct(unitary_general_coeffs(p));
}

inline CMatrix unitary_operator(const UnitaryParams& p) {
  if (std::holds_alternative<ThetaPhi>(p)) return unitary_theta_phi(std::get<ThetaPhi>(p));
  return unitary_general(std::get<EulerAngles>(p));
}

// Coefficients of s over the base operators: coeffs[k] = (base_k, s).
inline StrategyVector expand(const CMatrix& s) {
  if (s.rows() != 2 || s.cols() != 2) {
    throw std::invalid_argument("qgt::expand: strategy operators are 2x2");
  }
  StrategyVector v;
  for (std::size_t k = 0; k < 4; ++k) {
    v[k] = inner_product(base_operator(kBaseOrder[k]), s);
  }
  return v;
}

inline bool is_unitary(const CMatrix& s, double tol = 1e-10) {
  if (tol <= 0.0) {
    throw std::invalid_argument("qgt::is_unitary: tol must be positive");
  }
  if (s.rows() != s.cols()) return false;
  const CMatrix g = matmul(dagger(s), s);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const Complex want = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      sum += std::norm(g(i, j) - want);
    }
  }
  return std::sqrt(sum) <= tol;
}

}  // namespace qgt
