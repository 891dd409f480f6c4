#pragma once

#include "cdpp/counting.hpp"

namespace cdpp::mixed {

/// Tuple of symmetric PSD d x d matrices.
struct MatrixTuple {
  std::vector<Eigen::MatrixXd> mats;
  int dim = 0;
};

MatrixTuple make_tuple(std::vector<Eigen::MatrixXd> mats,
                       const genpoly::PsdOptions& opts = {});

struct MixedOptions {
  counting::CountOptions count;
  long long cost_budget = 1 << 21;   // max interpolation degree for ECount
  int dimension_budget = 8;          // max dimension for polarization sums
};

/// Normalized mixed discriminant D(A_1..A_d) = (1/d!) d^d/dz_1..dz_d
/// det(sum z_i A_i), by polarization inclusion-exclusion over 2^d terms.
/// The 1/d! normalization makes det(A) = d! D(v_1 v_1^T, ..., v_d v_d^T).
double mixed_discriminant_bruteforce(const MatrixTuple& t);

/// Lemma-style constructive route: Cholesky each A_i into rank-one summands,
/// view them as an n^2-element determinantal ground set with one combined
/// cost vector (base n^2+1), and read the discriminant off one equality
/// count, divided by n!.
double mixed_disc_via_ecount(const MatrixTuple& t, const MixedOptions& opts = {});

/// Dbar(A_1..A_k) for d-dimensional matrices: the restricted mixed
/// discriminant appearing in the x^{d-k} coefficients, equal to the partition
/// count of the stacked Cholesky rows with quotas (1,..,1,d-k).
double restricted_mixed_disc(const std::vector<Eigen::MatrixXd>& a, int d,
                             const MixedOptions& opts = {});

/// Exact path; every matrix must admit a rational Cholesky factor.
Rational restricted_mixed_disc_exact(const std::vector<QMatrix>& a, int d,
                                     const MixedOptions& opts = {});

/// Coefficients of x^{d-k} for k = 0..k_max in the mixed characteristic
/// polynomial: (-1)^k sum_{|S|=k} Dbar((A_i)_{i in S}).
struct MixedCharCoeffs {
  int dim = 0;
  std::vector<double> coeffs;  // index k -> coefficient of x^{d-k}
};

MixedCharCoeffs mixed_char_top_coeffs(const MatrixTuple& t, int k_max,
                                      const MixedOptions& opts = {});

std::vector<Rational> mixed_char_top_coeffs_exact(const std::vector<QMatrix>& mats,
                                                  int dim, int k_max,
                                                  const MixedOptions& opts = {});

/// sum_{|S|=k} Dbar((A_i)_{i in S}) evaluated as a single mixed discriminant
/// of block matrices A_i + I_{m-k} and I_d + 0_{m-k}, divided by
/// (m-k)!(d-k)!.
double block_reduction_sum(const MatrixTuple& t, int k,
                           const MixedOptions& opts = {});

/// Independent oracle from the defining product prod_i (1 - d/dz_i) applied
/// to det(xI + sum z_i A_i) at z = 0; extracts every mixed partial by small
/// dedicated interpolations, sharing nothing with the counting engine.
/// Returns coefficients indexed as in MixedCharCoeffs (k -> x^{d-k}).
std::vector<double> mixed_char_bruteforce(const MatrixTuple& t);

}  // namespace cdpp::mixed
