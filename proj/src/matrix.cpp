#include "cartanlab/matrix.hpp"

#include <utility>

namespace cartanlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::UnsupportedDegree: return "unsupported-degree";
    case ErrorKind::NotRealSplit: return "not-real-split";
    case ErrorKind::NotCommuting: return "not-commuting";
    case ErrorKind::Tolerance: return "tolerance";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::ZeroFunctional: return "zero-functional";
    case ErrorKind::NoSeparator: return "no-separator";
    case ErrorKind::Obstruction: return "obstruction";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Dependent: return "dependent";
    case ErrorKind::Schema: return "schema";
  }
  return "unknown";
}

IntMatrix int_matrix(std::initializer_list<std::initializer_list<long>> rows) {
  const std::size_t n = rows.size();
  IntMatrix m(n);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != n) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
    std::size_t j = 0;
    for (long v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

IntMatrix int_matrix(const std::vector<std::vector<long long>>& rows) {
  const std::size_t n = rows.size();
  IntMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = mpz_class(std::to_string(rows[i][j]));
  }
  return m;
}

mpz_class determinant(const IntMatrix& m) {
  const std::size_t n = m.dim();
  if (n == 0) return 1;
  IntMatrix a = m;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        mpz_class num = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

IntMatrix adjugate(const IntMatrix& m) {
  const std::size_t n = m.dim();
  IntMatrix adj(n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  IntMatrix minor(n - 1);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t i = 0, mi = 0; i < n; ++i) {
        if (i == r) continue;
        for (std::size_t j = 0, mj = 0; j < n; ++j) {
          if (j == c) continue;
          minor(mi, mj++) = m(i, j);
        }
        ++mi;
      }
      mpz_class cof = determinant(minor);
      if ((r + c) % 2 == 1) cof = -cof;
      adj(c, r) = cof;  // transpose of the cofactor matrix
    }
  }
  return adj;
}

IntMatrix unimodular_inverse(const IntMatrix& m) {
  const mpz_class det = determinant(m);
  if (det != 1 && det != -1) {
    throw Error(ErrorKind::Domain, "matrix is not unimodular (det = " + det.get_str() + ")");
  }
  IntMatrix inv = adjugate(m);
  if (det == -1) {
    for (std::size_t i = 0; i < inv.dim(); ++i)
      for (std::size_t j = 0; j < inv.dim(); ++j) inv(i, j) = -inv(i, j);
  }
  return inv;
}

IntMatrix power(const IntMatrix& m, long exponent) {
  IntMatrix base = exponent < 0 ? unimodular_inverse(m) : m;
  unsigned long e = exponent < 0 ? static_cast<unsigned long>(-exponent)
                                 : static_cast<unsigned long>(exponent);
  IntMatrix result = IntMatrix::identity(m.dim());
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

IntMatrix direct_sum(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t n = a.dim() + b.dim();
  IntMatrix out(n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) out(a.dim() + i, a.dim() + j) = b(i, j);
  return out;
}

bool commute(const IntMatrix& m1, const IntMatrix& m2) {
  if (m1.dim() != m2.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "commute: generators have different dimensions");
  }
  return m1 * m2 == m2 * m1;
}

Eigen::MatrixXd to_eigen(const IntMatrix& m) {
  Eigen::MatrixXd out(m.dim(), m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out(i, j) = m(i, j).get_d();
  return out;
}

std::vector<std::vector<std::string>> to_strings(const IntMatrix& m) {
  std::vector<std::vector<std::string>> rows(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) rows[i].push_back(m(i, j).get_str());
  return rows;
}

}  // namespace cartanlab
