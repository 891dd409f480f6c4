#pragma once

#include <random>

#include "cdpp/counting.hpp"
#include "cdpp/graph.hpp"
#include "cdpp/sampling.hpp"

namespace cdpp::matroid {

/// Totally unimodular linear representation of a regular matroid: rows are
/// ground-set elements, r = full column rank. Bases are the row subsets S of
/// size r with det(A_S) in {-1, +1}.
struct TUMatrix {
  Eigen::MatrixXi a;
  int ground_size() const { return static_cast<int>(a.rows()); }
  int rank() const { return static_cast<int>(a.cols()); }
};

/// Validates entries in {-1,0,1} and full column rank; total unimodularity
/// itself is the caller's responsibility (see spot_check_unimodular).
TUMatrix make_tu(const Eigen::MatrixXi& a);

/// Samples random square submatrices (up to max_size) and checks their
/// determinants lie in {-1,0,1}.
bool spot_check_unimodular(const Eigen::MatrixXi& a, std::uint64_t seed,
                           int trials = 200, int max_size = 6);

/// Signed incidence matrix with the last vertex row deleted; r = n-1, bases
/// correspond to spanning trees.
TUMatrix graphic_representation(const Graph& g);

/// Drops linearly dependent columns until the representation has full column
/// rank; row-subset independence is preserved.
TUMatrix reduce_to_basis_columns(const Eigen::MatrixXi& a);

/// Number of bases: det(A^T A) by Cauchy-Binet (exact integer arithmetic).
Integer count_bases(const TUMatrix& a);

struct MatroidOptions {
  Backend backend = Backend::Float;
  counting::CountOptions count;
  long long degree_budget = 1 << 21;  // max interpolation degree
};

Integer count_bases_budgeted(const TUMatrix& a, std::span<const long long> c,
                             long long C, const MatroidOptions& opts = {});

/// Bases of exact total cost C (the equality variant used by the reduction).
Integer count_bases_exact_cost(const TUMatrix& a, std::span<const long long> c,
                               long long C, const MatroidOptions& opts = {});

/// Uniform sample over feasible bases.
std::vector<int> sample_basis_budgeted(const TUMatrix& a,
                                       std::span<const long long> c, long long C,
                                       std::uint64_t seed,
                                       const MatroidOptions& opts = {});

/// Perfect-matching counting instance: G' = G plus one cost-0 edge per vertex
/// pair, edge costs b^i + b^j in base b = |E'|+1, target cost C = sum_i b^i.
/// alpha_inv counts the spanning trees of cost C per perfect matching: each
/// matching contracts to n/2 supernodes joined by 4 parallel cost-0 edges, so
/// alpha_inv = 4^{n/2-1} (n/2)^{n/2-2} by the multigraph Cayley formula.
struct PMReductionInstance {
  Graph gprime;
  long long base = 0;         // b
  long long target_cost = 0;  // C
  Rational alpha_inv;
};

PMReductionInstance pm_to_st_instance(const Graph& g,
                                      const MatroidOptions& opts = {});

/// PM(G) = ST_C(G') / alpha_inv, computed through the budgeted spanning-tree
/// counter; exact integer out, NumericalResolutionExceeded if it is not.
Integer count_pm_via_reduction(const Graph& g, const MatroidOptions& opts = {});

}  // namespace cdpp::matroid
