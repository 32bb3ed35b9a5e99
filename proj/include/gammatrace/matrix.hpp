#pragma once

#include "gammatrace/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gammatrace {

/// Dense row-major matrix over an exact scalar type.
template <typename T>
class ExactMatrix {
 public:
  using value_type = T;

  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("ExactMatrix: dimensions must be positive");
  }
  ExactMatrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    if (rows_ == 0 || cols_ == 0) throw std::invalid_argument("ExactMatrix: dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("ExactMatrix: ragged initializer");
      for (const auto& v : r) data_.push_back(v);
    }
  }

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] bool is_zero() const {
    for (const auto& v : data_)
      if (!gammatrace::is_zero(v)) return false;
    return true;
  }

  ExactMatrix& operator+=(const ExactMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ExactMatrix& operator-=(const ExactMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ExactMatrix& operator*=(const T& s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix& b) { return a += b; }
  friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix& b) { return a -= b; }
  friend ExactMatrix operator*(ExactMatrix a, const T& s) { return a *= s; }
  friend ExactMatrix operator*(const T& s, ExactMatrix a) { return a *= s; }
  friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

 private:
  void require_same_shape(const ExactMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("ExactMatrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Exact product. Zero entries of either factor are skipped, which matters
/// for the block-sparse spinor matrices.
template <typename T>
ExactMatrix<T> mat_mul(const ExactMatrix<T>& a, const ExactMatrix<T>& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("mat_mul: dimension mismatch (" + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                                std::to_string(b.cols()) + ")");
  ExactMatrix<T> c(a.rows(), b.cols());
  std::vector<char> b_nonzero(b.rows() * b.cols());
  for (std::size_t k = 0; k < b.rows(); ++k)
    for (std::size_t j = 0; j < b.cols(); ++j) b_nonzero[k * b.cols() + j] = !is_zero(b(k, j));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (is_zero(aik)) continue;
      const char* nz = &b_nonzero[k * b.cols()];
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (nz[j]) fused_add_mul(c(i, j), aik, b(k, j));
    }
  }
  return c;
}

template <typename T>
T mat_trace(const ExactMatrix<T>& a) {
  if (!a.is_square()) throw std::invalid_argument("mat_trace: matrix is not square");
  T t{};
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

/// Tr(a·b) without forming the product.
template <typename T>
T trace_of_product(const ExactMatrix<T>& a, const ExactMatrix<T>& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw std::invalid_argument("trace_of_product: dimension mismatch");
  T t{};
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (is_zero(a(i, k))) continue;
      fused_add_mul(t, a(i, k), b(k, i));
    }
  return t;
}

/// a^k by binary exponentiation; k = 0 gives the identity.
template <typename T>
ExactMatrix<T> mat_pow(ExactMatrix<T> base, unsigned k) {
  if (!base.is_square()) throw std::invalid_argument("mat_pow: matrix is not square");
  std::optional<ExactMatrix<T>> acc;
  while (k) {
    if (k & 1u) acc = acc ? mat_mul(*acc, base) : base;
    k >>= 1u;
    if (k) base = mat_mul(base, base);
  }
  return acc ? std::move(*acc) : ExactMatrix<T>::identity(base.rows());
}

/// Raised when elimination finds no usable pivot. Carries the rank found
/// and the offending matrix.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(std::size_t rank, ExactMatrix<Rational> matrix)
      : std::runtime_error("rank-deficient system: rank " + std::to_string(rank) + " of " +
                           std::to_string(matrix.rows())),
        rank_(rank),
        matrix_(std::move(matrix)) {}

  [[nodiscard]] std::size_t rank() const { return rank_; }
  [[nodiscard]] const ExactMatrix<Rational>& matrix() const { return matrix_; }

 private:
  std::size_t rank_;
  ExactMatrix<Rational> matrix_;
};

/// Solves Z·x = T exactly by Gauss-Jordan elimination with full pivoting.
/// The pivot is the nonzero entry of smallest height in the remaining block.
inline std::vector<Rational> solve_rational_system(const ExactMatrix<Rational>& z,
                                                   const std::vector<Rational>& t) {
  if (!z.is_square()) throw std::invalid_argument("solve_rational_system: matrix is not square");
  const std::size_t p = z.rows();
  if (t.size() != p) throw std::invalid_argument("solve_rational_system: right-hand side has wrong length");

  ExactMatrix<Rational> a = z;
  std::vector<Rational> rhs = t;
  std::vector<std::size_t> col_of(p);  // column permutation: position -> unknown
  for (std::size_t j = 0; j < p; ++j) col_of[j] = j;

  for (std::size_t k = 0; k < p; ++k) {
    std::size_t pr = p, pc = p, best = 0;
    for (std::size_t i = k; i < p; ++i)
      for (std::size_t j = k; j < p; ++j) {
        if (a(i, j).is_zero()) continue;
        const std::size_t h = a(i, j).bit_size();
        if (pr == p || h < best) {
          pr = i;
          pc = j;
          best = h;
        }
      }
    if (pr == p) throw RankDeficientError(k, z);

    if (pr != k) {
      for (std::size_t j = 0; j < p; ++j) std::swap(a(k, j), a(pr, j));
      std::swap(rhs[k], rhs[pr]);
    }
    if (pc != k) {
      for (std::size_t i = 0; i < p; ++i) std::swap(a(i, k), a(i, pc));
      std::swap(col_of[k], col_of[pc]);
    }

    const Rational inv = Rational(1) / a(k, k);
    for (std::size_t j = k; j < p; ++j) a(k, j) *= inv;
    rhs[k] *= inv;
    for (std::size_t i = 0; i < p; ++i) {
      if (i == k || a(i, k).is_zero()) continue;
      const Rational f = a(i, k);
      for (std::size_t j = k; j < p; ++j) a(i, j) -= f * a(k, j);
      rhs[i] -= f * rhs[k];
    }
  }

  std::vector<Rational> x(p);
  for (std::size_t k = 0; k < p; ++k) x[col_of[k]] = rhs[k];
  return x;
}

template <typename T>
std::vector<T> mat_vec(const ExactMatrix<T>& a, const std::vector<T>& v) {
  if (a.cols() != v.size()) throw std::invalid_argument("mat_vec: dimension mismatch");
  std::vector<T> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) fused_add_mul(out[i], a(i, j), v[j]);
  return out;
}

}  // namespace gammatrace
