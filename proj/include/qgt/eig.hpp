#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "qgt/cmatrix.hpp"

namespace qgt {

// Result of a Hermitian eigendecomposition. eigenvalues[k] pairs with column k
// of eigenvectors; values are sorted in descending order.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  CMatrix eigenvectors;
};

namespace detail {

inline double off_diagonal_norm(const CMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

}  // namespace detail

// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//
// Each sweep visits every off-diagonal pair (p,q) and applies a unitary
// plane rotation G chosen to zero a(p,q):
//   G = [[c, -s e^{i tau}], [s e^{-i tau}, c]]  with tau = arg(a(p,q)),
//   t = s/c the smaller-magnitude root of t^2 - 2 mu t - 1 = 0,
//   mu = (a(q,q) - a(p,p)) / (2 |a(p,q)|).
// Sweeps repeat until the off-diagonal Frobenius norm falls below
// tol * ||a||_F. Accumulated rotations give the eigenvector matrix.
//
// Eigenvector phases are fixed by making each column's largest-modulus
// component (lowest index on ties) real and positive, so results are
// reproducible run to run.
//
// Throws std::invalid_argument if a is not square or not Hermitian to within
// 1e-10 (relative), std::runtime_error if max_sweeps pass without convergence.
inline EigenDecomposition eig_hermitian(const CMatrix& a, double tol = 1e-12,
                                        int max_sweeps = 100) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("qgt::eig_hermitian: matrix is not square");
  }
  if (!is_hermitian(a, 1e-10)) {
    throw std::invalid_argument("qgt::eig_hermitian: matrix is not Hermitian");
  }
  const std::size_t n = a.rows();
  const double fro = frobenius_norm(a);

  // Work on the Hermitian part so roundoff asymmetry in the input cannot
  // drift the iteration.
  CMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    w(i, i) = Complex(a(i, i).real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      const Complex avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
      w(i, j) = avg;
      w(j, i) = std::conj(avg);
    }
  }

  CMatrix v = CMatrix::identity(n);

  bool converged = detail::off_diagonal_norm(w) <= tol * fro;
  int sweep = 0;
  for (; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double mag = std::abs(w(p, q));
        if (mag <= 1e-300) {
          w(p, q) = Complex(0.0, 0.0);
          w(q, p) = Complex(0.0, 0.0);
          continue;
        }
        const double tau = std::arg(w(p, q));
        const double mu = (w(q, q).real() - w(p, p).real()) / (2.0 * mag);
        const double root = std::sqrt(mu * mu + 1.0);
        const double t = (mu >= 0.0) ? -1.0 / (mu + root) : 1.0 / (-mu + root);
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex eip(std::cos(tau), std::sin(tau));   // e^{i tau}
        const Complex eim = std::conj(eip);                // e^{-i tau}

        // w <- G^dagger w  (rows p and q)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex wpk = w(p, k);
          const Complex wqk = w(q, k);
          w(p, k) = c * wpk + s * eip * wqk;
          w(q, k) = -s * eim * wpk + c * wqk;
        }
        // w <- w G  (columns p and q)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex wkp = w(k, p);
          const Complex wkq = w(k, q);
          w(k, p) = c * wkp + s * eim * wkq;
          w(k, q) = -s * eip * wkp + c * wkq;
        }
        // v <- v G
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp + s * eim * vkq;
          v(k, q) = -s * eip * vkp + c * vkq;
        }
        // The rotation zeroes this pair exactly in theory; pin it so roundoff
        // residue does not count against convergence.
        w(p, q) = Complex(0.0, 0.0);
        w(q, p) = Complex(0.0, 0.0);
      }
    }
    converged = detail::off_diagonal_norm(w) <= tol * fro;
  }
  if (!converged) {
    throw std::runtime_error("qgt::eig_hermitian: no convergence after " +
                             std::to_string(max_sweeps) + " sweeps");
  }

  std::vector<double> vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = w(i, i).real();

  // Descending order, stable so equal values keep the iteration's ordering.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(),
                   [&vals](std::size_t i, std::size_t j) { return vals[i] > vals[j]; });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = CMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = vals[perm[k]];
    // Locate the largest-modulus component for the phase convention.
    std::size_t pivot = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = std::abs(v(i, perm[k]));
      if (m > best + 1e-15) {
        best = m;
        pivot = i;
      }
    }
    Complex phase(1.0, 0.0);
    const Complex pv = v(pivot, perm[k]);
    if (std::abs(pv) > 0.0) phase = std::conj(pv) / std::abs(pv);
    for (std::size_t i = 0; i < n; ++i) {
      out.eigenvectors(i, k) = phase * v(i, perm[k]);
    }
  }
  return out;
}

// Convenience accessor: column k of an eigendecomposition as a vector.
inline CVector eigenvector(const EigenDecomposition& ed, std::size_t k) {
  CVector out(ed.eigenvectors.rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ed.eigenvectors(i, k);
  return out;
}

}  // namespace qgt
