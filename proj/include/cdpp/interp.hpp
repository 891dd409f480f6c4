#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cdpp/error.hpp"
#include "cdpp/scalar.hpp"

namespace cdpp::interp {

template <class S>
struct UnivariateCoefficients {
  std::vector<S> coeffs;  // index d holds the coefficient of z^d
};

template <class S>
struct CoefficientTensor {
  std::vector<int> dims;  // per-axis size D_j + 1
  std::vector<S> entries;  // row-major

  std::size_t flat_index(std::span<const int> idx) const {
    std::size_t f = 0;
    for (std::size_t a = 0; a < dims.size(); ++a)
      f = f * static_cast<std::size_t>(dims[a]) + static_cast<std::size_t>(idx[a]);
    return f;
  }
  const S& at(std::span<const int> idx) const { return entries[flat_index(idx)]; }
};

struct RecoverOptions {
  double residual_tol = 1e-6;          // held-out / tail check, relative
  long long grid_budget = 100'000'000;  // max total evaluations
  bool check_degree = true;
};

/// Float backend: evaluates at the N-th roots of unity (N = smallest power of
/// two >= D+1) and inverts by FFT. Real Vandermonde nodes are exponentially
/// ill-conditioned; the unitary DFT is not.
UnivariateCoefficients<Complex> recover_univariate(
    const std::function<Complex(const Complex&)>& eval, int degree_bound,
    const RecoverOptions& opts = {});

/// Exact backend: evaluates at the integer nodes 1..D+1 (zero is avoided so
/// substituted oracles with negative exponents stay well defined) and solves
/// by Lagrange interpolation.
UnivariateCoefficients<Rational> recover_univariate(
    const std::function<Rational(const Rational&)>& eval, int degree_bound,
    const RecoverOptions& opts = {});

/// Tensor-product grids, inverted axis by axis.
CoefficientTensor<Complex> recover_multivariate(
    const std::function<Complex(std::span<const Complex>)>& eval,
    std::span<const int> degree_bounds, const RecoverOptions& opts = {});

CoefficientTensor<Rational> recover_multivariate(
    const std::function<Rational(std::span<const Rational>)>& eval,
    std::span<const int> degree_bounds, const RecoverOptions& opts = {});

/// Rounds a value that must be an integer; deviation beyond 0.25 means the
/// digits can no longer be trusted.
Integer round_to_integer(double value);
Integer round_to_integer(const Rational& value);

namespace detail {
std::size_t next_pow2(std::size_t n);
void fft_inplace(std::vector<Complex>& a, bool inverse);
}  // namespace detail

}  // namespace cdpp::interp
