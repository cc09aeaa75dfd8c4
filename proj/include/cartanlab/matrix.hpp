#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "cartanlab/errors.hpp"

namespace cartanlab {

/// Dense square matrix over an exact scalar ring (mpz_class or mpq_class).
/// Row-major storage; value semantics throughout.
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, T(0)) {}

  static SquareMatrix identity(std::size_t dim) {
    SquareMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t dim() const noexcept { return dim_; }

  T& operator()(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }

  T trace() const {
    T t = 0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  bool is_identity() const { return *this == identity(dim_); }

  friend bool operator==(const SquareMatrix& x, const SquareMatrix& y) {
    return x.dim_ == y.dim_ && x.a_ == y.a_;
  }

  friend SquareMatrix operator*(const SquareMatrix& x, const SquareMatrix& y) {
    check_same(x, y);
    const std::size_t n = x.dim_;
    SquareMatrix out(n);
    T acc;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        acc = 0;
        for (std::size_t k = 0; k < n; ++k) acc += x(i, k) * y(k, j);
        out(i, j) = acc;
      }
    }
    return out;
  }

  friend SquareMatrix operator+(const SquareMatrix& x, const SquareMatrix& y) {
    check_same(x, y);
    SquareMatrix out(x);
    for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] += y.a_[i];
    return out;
  }

  friend SquareMatrix operator-(const SquareMatrix& x, const SquareMatrix& y) {
    check_same(x, y);
    SquareMatrix out(x);
    for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= y.a_[i];
    return out;
  }

 private:
  static void check_same(const SquareMatrix& x, const SquareMatrix& y) {
    if (x.dim_ != y.dim_) {
      throw Error(ErrorKind::DimensionMismatch,
                  "matrix dimensions differ: " + std::to_string(x.dim_) + " vs " +
                      std::to_string(y.dim_));
    }
  }

  std::size_t dim_ = 0;
  std::vector<T> a_;
};

using IntMatrix = SquareMatrix<mpz_class>;
using RatMatrix = SquareMatrix<mpq_class>;

IntMatrix int_matrix(std::initializer_list<std::initializer_list<long>> rows);
IntMatrix int_matrix(const std::vector<std::vector<long long>>& rows);

/// Fraction-free Gaussian elimination (Bareiss); exact.
mpz_class determinant(const IntMatrix& m);
IntMatrix adjugate(const IntMatrix& m);
/// Exact inverse of a matrix with determinant +-1.
IntMatrix unimodular_inverse(const IntMatrix& m);
/// Exact power; negative exponents require |det| = 1.
IntMatrix power(const IntMatrix& m, long exponent);
/// Block-diagonal direct sum.
IntMatrix direct_sum(const IntMatrix& a, const IntMatrix& b);

bool commute(const IntMatrix& m1, const IntMatrix& m2);

Eigen::MatrixXd to_eigen(const IntMatrix& m);
std::vector<std::vector<std::string>> to_strings(const IntMatrix& m);

}  // namespace cartanlab
