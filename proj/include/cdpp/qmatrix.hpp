#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "cdpp/error.hpp"
#include "cdpp/rational.hpp"

namespace cdpp {

/// Dense matrix of exact rationals. Minimal surface: the exact backend only
/// needs construction, element access and determinants.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static QMatrix identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  /// Exact: doubles are dyadic rationals.
  static QMatrix from_double(const Eigen::MatrixXd& d) {
    QMatrix m(static_cast<int>(d.rows()), static_cast<int>(d.cols()));
    for (int i = 0; i < m.rows_; ++i)
      for (int j = 0; j < m.cols_; ++j) m(i, j) = rational_from_double(d(i, j));
    return m;
  }

  static QMatrix from_int(const Eigen::MatrixXi& d) {
    QMatrix m(static_cast<int>(d.rows()), static_cast<int>(d.cols()));
    for (int i = 0; i < m.rows_; ++i)
      for (int j = 0; j < m.cols_; ++j) m(i, j) = d(i, j);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& operator()(int i, int j) {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }
  const Rational& operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  Eigen::MatrixXd to_double() const {
    Eigen::MatrixXd d(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) d(i, j) = (*this)(i, j).get_d();
    return d;
  }

  QMatrix transpose() const {
    QMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

/// Fraction-free Bareiss elimination with row pivoting; exact on integers
/// and avoids denominator blowup.
inline Integer det_integer_bareiss(std::vector<Integer> a, int n) {
  if (n == 0) return Integer(1);
  auto at = [&](int i, int j) -> Integer& {
    return a[static_cast<std::size_t>(i) * n + j];
  };
  int sign = 1;
  Integer prev(1);
  for (int k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (at(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return Integer(0);
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Integer t = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        at(i, j) = t;
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  Integer d = at(n - 1, n - 1);
  return sign > 0 ? d : Integer(-d);
}

/// Exact determinant of a square rational matrix: clears denominators per
/// row, then runs integer Bareiss.
inline Rational det_rational(const QMatrix& m) {
  require(m.rows() == m.cols(), ErrorCode::DimensionMismatch,
          "determinant of non-square matrix");
  int n = m.rows();
  if (n == 0) return Rational(1);
  std::vector<Integer> ints(static_cast<std::size_t>(n) * n);
  Integer scale(1);
  for (int i = 0; i < n; ++i) {
    Integer d(1);
    for (int j = 0; j < n; ++j)
      mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), m(i, j).get_den().get_mpz_t());
    for (int j = 0; j < n; ++j) {
      Integer q;
      mpz_divexact(q.get_mpz_t(), d.get_mpz_t(),
                   m(i, j).get_den().get_mpz_t());
      ints[static_cast<std::size_t>(i) * n + j] = m(i, j).get_num() * q;
    }
    scale *= d;
  }
  Rational result(det_integer_bareiss(std::move(ints), n), scale);
  result.canonicalize();
  return result;
}

/// Exact rank over the rationals (fraction-free elimination).
inline int rational_rank(QMatrix m) {
  int rows = m.rows(), cols = m.cols();
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int i = rank; i < rows; ++i)
      if (m(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (int j = 0; j < cols; ++j) std::swap(m(piv, j), m(rank, j));
    Rational inv = m(rank, col);
    for (int i = rank + 1; i < rows; ++i) {
      if (m(i, col) == 0) continue;
      Rational f = m(i, col) / inv;
      for (int j = col; j < cols; ++j) m(i, j) -= f * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

inline int integer_rank(const Eigen::MatrixXi& a) {
  return rational_rank(QMatrix::from_int(a));
}

/// Pivoted rational Cholesky: returns V with V V^T = L exactly, or nullopt
/// when some pivot has no rational square root. Zero pivots drop columns.
std::optional<QMatrix> rational_cholesky(const QMatrix& l);

}  // namespace cdpp
