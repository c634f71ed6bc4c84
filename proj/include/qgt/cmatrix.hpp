#pragma once

#include <complex>
#include <cstddef>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgt {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Default tolerance for scalar comparisons throughout the library.
inline constexpr double kScalarTol = 1e-10;

// Dense complex matrix, row-major storage.
class CMatrix {
 public:
  CMatrix() : rows_(0), cols_(0) {}

  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {
    if (rows_ == 0 || cols_ == 0) {
      throw std::invalid_argument("qgt::CMatrix: dimensions must be positive");
    }
  }

  CMatrix(std::size_t rows, std::size_t cols, CVector data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows_ == 0 || cols_ == 0) {
      throw std::invalid_argument("qgt::CMatrix: dimensions must be positive");
    }
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("qgt::CMatrix: data size does not match dimensions");
    }
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Complex(1.0, 0.0);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Complex& at(std::size_t r, std::size_t c) {
    check_index(r, c);
    return data_[r * cols_ + c];
  }
  const Complex& at(std::size_t r, std::size_t c) const {
    check_index(r, c);
    return data_[r * cols_ + c];
  }

  const CVector& data() const { return data_; }
  CVector& data() { return data_; }

 private:
  void check_index(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw std::out_of_range("qgt::CMatrix: index (" + std::to_string(r) + "," +
                              std::to_string(c) + ") out of range");
    }
  }

  std::size_t rows_;
  std::size_t cols_;
  CVector data_;
};

inline CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("qgt::operator+: shape mismatch");
  }
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

inline CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("qgt::operator-: shape mismatch");
  }
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

inline CMatrix operator*(const Complex& s, const CMatrix& a) {
  CMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = s * a.data()[i];
  return out;
}

inline CMatrix operator*(const CMatrix& a, const Complex& s) { return s * a; }

// Matrix product a*b.
inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("qgt::matmul: inner dimensions do not match");
  }
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out(i, j) += aik * b(k, j);
      }
    }
  }
  return out;
}

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

// Conjugate transpose.
inline CMatrix dagger(const CMatrix& a) {
  CMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(j, i) = std::conj(a(i, j));
    }
  }
  return out;
}

// Kronecker product a ⊗ b. Index convention: (a⊗b)(i*p+k, j*q+l) = a(i,j)*b(k,l)
// where b is p×q, so the left factor owns the slow index.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
      }
    }
  }
  return out;
}

inline Complex trace(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("qgt::trace: matrix is not square");
  }
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) sum += a(i, i);
  return sum;
}

// Partial trace of a on a bipartite space of dimension d1*d2 (first factor d1,
// second factor d2, slow-index-first as in kron). traced selects which factor
// is summed out: 0 removes the first factor (result d2×d2), 1 removes the
// second (result d1×d1).
inline CMatrix partial_trace(const CMatrix& a, std::size_t d1, std::size_t d2, int traced) {
  if (a.rows() != a.cols() || a.rows() != d1 * d2) {
    throw std::invalid_argument("qgt::partial_trace: matrix dimension is not d1*d2");
  }
  if (traced != 0 && traced != 1) {
    throw std::invalid_argument("qgt::partial_trace: traced must be 0 or 1");
  }
  if (traced == 1) {
    CMatrix out(d1, d1);
    for (std::size_t i = 0; i < d1; ++i) {
      for (std::size_t j = 0; j < d1; ++j) {
        Complex sum(0.0, 0.0);
        for (std::size_t k = 0; k < d2; ++k) sum += a(i * d2 + k, j * d2 + k);
        out(i, j) = sum;
      }
    }
    return out;
  }
  CMatrix out(d2, d2);
  for (std::size_t k = 0; k < d2; ++k) {
    for (std::size_t l = 0; l < d2; ++l) {
      Complex sum(0.0, 0.0);
      for (std::size_t i = 0; i < d1; ++i) sum += a(i * d2 + k, i * d2 + l);
      out(k, l) = sum;
    }
  }
  return out;
}

inline CVector matvec(const CMatrix& a, const CVector& v) {
  if (a.cols() != v.size()) {
    throw std::invalid_argument("qgt::matvec: vector length does not match columns");
  }
  CVector out(a.rows(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex sum(0.0, 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) sum += a(i, j) * v[j];
    out[i] = sum;
  }
  return out;
}

// Inner product ⟨a|b⟩, conjugate-linear in the first argument.
inline Complex vdot(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("qgt::vdot: length mismatch");
  }
  Complex sum(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum;
}

inline double norm(const CVector& v) { return std::sqrt(std::abs(vdot(v, v))); }

// Outer product |a⟩⟨b|.
inline CMatrix outer(const CVector& a, const CVector& b) {
  CMatrix out(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out(i, j) = a[i] * std::conj(b[j]);
    }
  }
  return out;
}

// Kronecker product of column vectors, same index convention as kron.
inline CVector kron_vec(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      out[i * b.size() + k] = a[i] * b[k];
    }
  }
  return out;
}

inline double frobenius_norm(const CMatrix& a) {
  double sum = 0.0;
  for (const Complex& z : a.data()) sum += std::norm(z);
  return std::sqrt(sum);
}

inline bool is_hermitian(const CMatrix& a, double tol = kScalarTol) {
  if (a.rows() != a.cols()) return false;
  double scale = frobenius_norm(a);
  if (scale < 1.0) scale = 1.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i; j < a.cols(); ++j) {
      if (std::abs(a(i, j) - std::conj(a(j, i))) > tol * scale) return false;
    }
  }
  return true;
}

inline bool approx_equal(const CMatrix& a, const CMatrix& b, double tol = kScalarTol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.data()[i] - b.data()[i]) > tol) return false;
  }
  return true;
}

inline bool is_finite(const CMatrix& a) {
  for (const Complex& z : a.data()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace qgt
