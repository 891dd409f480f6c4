#include "cdpp/genpoly.hpp"

#include <cmath>

namespace cdpp::genpoly {

FeatureMatrix cholesky_factor(const Kernel& kernel, const PsdOptions& opts) {
  const int m = kernel.size();
  require(m >= 1, ErrorCode::DimensionMismatch, "kernel must be at least 1x1");
  require(kernel.entries.cols() == m, ErrorCode::NotSymmetric,
          "kernel must be square");
  const Eigen::MatrixXd& l = kernel.entries;
  double scale = l.cwiseAbs().maxCoeff();
  double sym_defect = (l - l.transpose()).cwiseAbs().maxCoeff();
  require(sym_defect <= opts.tau_chol * std::max(scale, 1.0),
          ErrorCode::NotSymmetric, "kernel is not symmetric");
  const double tol = opts.tau_psd * std::max(scale, 1.0);

  Eigen::MatrixXd a = (l + l.transpose()) / 2.0;
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  Eigen::MatrixXd fac = Eigen::MatrixXd::Zero(m, m);
  int rank = 0;
  for (int k = 0; k < m; ++k) {
    int best = k;
    for (int j = k; j < m; ++j)
      if (a(j, j) > a(best, best)) best = j;
    double pivot = a(best, best);
    if (pivot < -tol)
      fail(ErrorCode::NotPSD, "negative pivot in Cholesky factorization");
    if (pivot <= tol) break;  // remaining eigenvalues clipped to zero
    if (best != k) {
      a.row(k).swap(a.row(best));
      a.col(k).swap(a.col(best));
      fac.row(k).swap(fac.row(best));
      std::swap(perm[k], perm[best]);
    }
    double root = std::sqrt(pivot);
    fac(k, rank) = root;
    for (int i = k + 1; i < m; ++i) fac(i, rank) = a(i, k) / root;
    for (int i = k + 1; i < m; ++i)
      for (int j = k + 1; j <= i; ++j) {
        a(i, j) -= fac(i, rank) * fac(j, rank);
        a(j, i) = a(i, j);
      }
    ++rank;
  }
  FeatureMatrix v;
  v.entries = Eigen::MatrixXd::Zero(m, rank);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < rank; ++j) v.entries(perm[i], j) = fac(i, j);
  return v;
}

GenPolyOracle<Complex> dpp_oracle(const FeatureMatrix& v) {
  const int m = v.ground_size();
  const int n = v.rank();
  GenPolyOracle<Complex> g;
  g.arity = m;
  g.cost_hint =
      static_cast<double>(m) * n * n + static_cast<double>(n) * n * n;
  auto vc = std::make_shared<Eigen::MatrixXcd>(v.entries.cast<Complex>());
  auto vt = std::make_shared<Eigen::MatrixXcd>(vc->transpose());
  g.eval = [vc, vt, m, n](std::span<const Complex> x) -> Complex {
    if (n == 0) return Complex(1.0, 0.0);
    Eigen::VectorXcd xv(m);
    for (int i = 0; i < m; ++i) xv(i) = x[i];
    Eigen::MatrixXcd scaled = xv.asDiagonal() * (*vc);
    Eigen::MatrixXcd mat = (*vt) * scaled;
    mat += Eigen::MatrixXcd::Identity(n, n);
    return Eigen::PartialPivLU<Eigen::MatrixXcd>(mat).determinant();
  };
  return g;
}

GenPolyOracle<Rational> dpp_oracle_exact(const QMatrix& kernel) {
  const int m = kernel.rows();
  require(kernel.cols() == m, ErrorCode::NotSymmetric, "kernel must be square");
  require(kernel.is_symmetric(), ErrorCode::NotSymmetric,
          "kernel must be symmetric");
  // Clear the global denominator once: L = Lint / den.
  Integer den(1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(),
              kernel(i, j).get_den().get_mpz_t());
  auto lint = std::make_shared<std::vector<Integer>>(
      static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Integer q;
      mpz_divexact(q.get_mpz_t(), den.get_mpz_t(),
                   kernel(i, j).get_den().get_mpz_t());
      (*lint)[static_cast<std::size_t>(i) * m + j] = kernel(i, j).get_num() * q;
    }
  auto den_ptr = std::make_shared<Integer>(den);

  GenPolyOracle<Rational> g;
  g.arity = m;
  g.cost_hint = static_cast<double>(m) * m * m;
  g.eval = [lint, den_ptr, m](std::span<const Rational> x) -> Rational {
    // Row i of X L + I scaled by den * q_i is integral:
    //   p_i * Lint_ij + delta_ij * den * q_i.
    std::vector<Integer> mat(static_cast<std::size_t>(m) * m);
    Integer scale(1);
    for (int i = 0; i < m; ++i) {
      const Integer& p = x[i].get_num();
      const Integer& q = x[i].get_den();
      for (int j = 0; j < m; ++j) {
        Integer v = p * (*lint)[static_cast<std::size_t>(i) * m + j];
        if (i == j) v += *den_ptr * q;
        mat[static_cast<std::size_t>(i) * m + j] = v;
      }
      scale *= *den_ptr * q;
    }
    Rational r(det_integer_bareiss(std::move(mat), m), scale);
    r.canonicalize();
    return r;
  };
  return g;
}

GenPolyOracle<Rational> dpp_oracle_exact_factor(const QMatrix& v) {
  const int m = v.rows();
  const int n = v.cols();
  auto rows = std::make_shared<QMatrix>(v);
  GenPolyOracle<Rational> g;
  g.arity = m;
  g.cost_hint = static_cast<double>(m) * n * n + static_cast<double>(n) * n * n;
  g.eval = [rows, m, n](std::span<const Rational> x) -> Rational {
    if (n == 0) return Rational(1);
    QMatrix mat = QMatrix::identity(n);
    for (int e = 0; e < m; ++e) {
      if (x[e] == 0) continue;
      for (int i = 0; i < n; ++i) {
        const Rational& vei = (*rows)(e, i);
        if (vei == 0) continue;
        Rational xit = x[e] * vei;
        for (int j = 0; j < n; ++j) {
          const Rational& vej = (*rows)(e, j);
          if (vej == 0) continue;
          mat(i, j) += xit * vej;
        }
      }
    }
    return det_rational(mat);
  };
  return g;
}

}  // namespace cdpp::genpoly
