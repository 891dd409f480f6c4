#include "cdpp/qmatrix.hpp"

namespace cdpp {

std::optional<QMatrix> rational_cholesky(const QMatrix& l) {
  if (!l.is_symmetric()) return std::nullopt;
  int m = l.rows();
  QMatrix a = l;  // working Schur complement
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = i;
  QMatrix fac(m, m);  // columns filled as pivots are accepted
  int rank = 0;
  for (int k = 0; k < m; ++k) {
    int best = -1;
    for (int j = k; j < m; ++j) {
      if (a(j, j) < 0) return std::nullopt;
      if (a(j, j) > 0 && (best < 0 || a(j, j) > a(best, best))) best = j;
    }
    if (best < 0) break;  // remaining diagonal is zero
    if (best != k) {
      for (int j = 0; j < m; ++j) std::swap(a(k, j), a(best, j));
      for (int i = 0; i < m; ++i) std::swap(a(i, k), a(i, best));
      for (int j = 0; j < rank; ++j) std::swap(fac(k, j), fac(best, j));
      std::swap(perm[k], perm[best]);
    }
    auto root = rational_sqrt_exact(a(k, k));
    if (!root) return std::nullopt;
    Rational piv = *root;
    fac(k, rank) = piv;
    for (int i = k + 1; i < m; ++i) fac(i, rank) = a(i, k) / piv;
    for (int i = k + 1; i < m; ++i)
      for (int j = k + 1; j < m; ++j)
        a(i, j) -= fac(i, rank) * fac(j, rank);
    ++rank;
  }
  // With all remaining diagonal entries zero, PSD forces the whole residual
  // block to vanish; anything else is not exactly factorable.
  for (int i = rank; i < m; ++i)
    for (int j = rank; j < m; ++j)
      if (a(i, j) != 0) return std::nullopt;
  QMatrix v(m, rank);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < rank; ++j) v(perm[i], j) = fac(i, j);
  return v;
}

}  // namespace cdpp
