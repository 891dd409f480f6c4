#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <span>
#include <sstream>
#include <vector>

#include "cdpp/error.hpp"
#include "cdpp/qmatrix.hpp"
#include "cdpp/scalar.hpp"

namespace cdpp::genpoly {

/// PSD similarity kernel L; mu(S) = det(L_{S,S}).
struct Kernel {
  Eigen::MatrixXd entries;
  int size() const { return static_cast<int>(entries.rows()); }
};

/// Factor V with V V^T = L (m rows, n = rank columns).
struct FeatureMatrix {
  Eigen::MatrixXd entries;
  int ground_size() const { return static_cast<int>(entries.rows()); }
  int rank() const { return static_cast<int>(entries.cols()); }
};

/// Full table of a set function on 2^[m], mask-indexed. m <= 20.
struct ExplicitSetFunction {
  int m = 0;
  std::vector<Rational> table;
};

/// Immutable evaluation oracle for g_mu(x) = sum_S mu(S) x^S.
/// eval must be a pure function of the point; transformed oracles compose by
/// wrapping, so captured state is shared and never mutated.
template <class S>
struct GenPolyOracle {
  int arity = 0;
  double cost_hint = 1.0;
  std::function<S(std::span<const S>)> eval;
};

template <class S>
S evaluate(const GenPolyOracle<S>& g, std::span<const S> point) {
  if (static_cast<int>(point.size()) != g.arity) {
    std::ostringstream os;
    os << "oracle arity " << g.arity << ", point has " << point.size()
       << " coordinates";
    fail(ErrorCode::ArityMismatch, os.str());
  }
  return g.eval(point);
}

template <class S>
S evaluate(const GenPolyOracle<S>& g, const std::vector<S>& point) {
  return evaluate(g, std::span<const S>(point));
}

/// Relative tolerances for PSD validation and factor reconstruction.
struct PsdOptions {
  double tau_psd = 1e-10;   // pivot / eigenvalue slack, relative to max|L|
  double tau_chol = 1e-9;   // allowed entrywise defect of V V^T - L
};

/// Pivoted Cholesky with zero-pivot column dropping. Pivots below
/// -tau_psd*max|L| raise NotPSD; pivots in (-tau, tau] are clipped to zero.
FeatureMatrix cholesky_factor(const Kernel& kernel, const PsdOptions& opts = {});

/// x -> det(V^T X V + I_n); one n x n determinant per evaluation.
GenPolyOracle<Complex> dpp_oracle(const FeatureMatrix& v);

/// Exact backends. det(X L + I_m) and det(V^T X V + I_n) agree by the
/// Sylvester identity; the kernel form avoids the (generally irrational)
/// Cholesky factor.
GenPolyOracle<Rational> dpp_oracle_exact(const QMatrix& kernel);
GenPolyOracle<Rational> dpp_oracle_exact_factor(const QMatrix& v);

/// x -> det(A^T X A) for a full-column-rank representation A (m x r).
/// At the all-ones point the value is the number of bases (Cauchy-Binet).
template <class S>
GenPolyOracle<S> matroid_oracle(const Eigen::MatrixXi& a);

/// Direct summation over all 2^m subsets; test scaffolding backend.
template <class S>
GenPolyOracle<S> explicit_oracle(const ExplicitSetFunction& f);

/// Coordinate transformation program applied to an oracle:
///   - coordinates in `zeroed` are fixed to 0 and removed from the point;
///   - coordinates in `tagged` are multiplied by an auxiliary variable y,
///     which becomes the first coordinate of the new oracle;
///   - when `exponents` is nonempty (m rows, p columns), every surviving
///     coordinate x_i is replaced by prod_j aux_j^{exponents[i][j]} and the
///     oracle value gains the global factor prod_j aux_j^{axis_shifts[j]}.
/// New point layout: (y if tagged nonempty), then the p aux variables, or the
/// surviving x coordinates in increasing index order when no substitution.
struct TransformProgram {
  int source_arity = 0;
  std::vector<int> zeroed;
  std::vector<int> tagged;
  std::vector<std::vector<int>> exponents;
  std::vector<long long> axis_shifts;
};

template <class S>
GenPolyOracle<S> transform(const GenPolyOracle<S>& g, const TransformProgram& prog);

// ---------------------------------------------------------------------------
// implementation

template <class S>
GenPolyOracle<S> matroid_oracle(const Eigen::MatrixXi& a) {
  const int m = static_cast<int>(a.rows());
  const int r = static_cast<int>(a.cols());
  if (r > 0) {
    require(integer_rank(a) == r, ErrorCode::RankDeficient,
            "representation matrix does not have full column rank");
  }
  GenPolyOracle<S> g;
  g.arity = m;
  g.cost_hint = static_cast<double>(m) * r * r + static_cast<double>(r) * r * r;
  if constexpr (scalar_traits<S>::is_exact) {
    auto rows = std::make_shared<Eigen::MatrixXi>(a);
    g.eval = [rows, m, r](std::span<const Rational> x) -> Rational {
      if (r == 0) return Rational(1);
      QMatrix mat(r, r);
      for (int e = 0; e < m; ++e) {
        if (x[e] == 0) continue;
        for (int i = 0; i < r; ++i) {
          int aei = (*rows)(e, i);
          if (aei == 0) continue;
          for (int j = 0; j < r; ++j) {
            int aej = (*rows)(e, j);
            if (aej == 0) continue;
            mat(i, j) += x[e] * (aei * aej);
          }
        }
      }
      return det_rational(mat);
    };
  } else {
    auto ac = std::make_shared<Eigen::MatrixXcd>(a.cast<Complex>());
    g.eval = [ac, m, r](std::span<const Complex> x) -> Complex {
      if (r == 0) return Complex(1.0, 0.0);
      Eigen::VectorXcd xv(m);
      for (int i = 0; i < m; ++i) xv(i) = x[i];
      Eigen::MatrixXcd scaled = xv.asDiagonal() * (*ac);
      Eigen::MatrixXcd mat = ac->transpose() * scaled;
      return Eigen::PartialPivLU<Eigen::MatrixXcd>(mat).determinant();
    };
  }
  return g;
}

template <class S>
GenPolyOracle<S> explicit_oracle(const ExplicitSetFunction& f) {
  require(f.m <= 20, ErrorCode::TooLarge,
          "explicit set functions support at most 20 elements");
  require(f.table.size() == (std::size_t{1} << f.m), ErrorCode::DimensionMismatch,
          "table must cover all 2^m subsets");
  for (const auto& mass : f.table)
    require(mass >= 0, ErrorCode::ParseError, "explicit masses must be nonnegative");
  GenPolyOracle<S> g;
  g.arity = f.m;
  g.cost_hint = static_cast<double>(std::size_t{1} << f.m) * (f.m + 1);
  const int m = f.m;
  if constexpr (scalar_traits<S>::is_exact) {
    auto table = std::make_shared<std::vector<Rational>>(f.table);
    g.eval = [table, m](std::span<const Rational> x) -> Rational {
      Rational total(0);
      const std::size_t n = table->size();
      for (std::size_t mask = 0; mask < n; ++mask) {
        const Rational& mass = (*table)[mask];
        if (mass == 0) continue;
        Rational prod = mass;
        for (int i = 0; i < m; ++i)
          if (mask >> i & 1u) prod *= x[i];
        total += prod;
      }
      return total;
    };
  } else {
    auto table = std::make_shared<std::vector<double>>();
    table->reserve(f.table.size());
    for (const auto& q : f.table) table->push_back(q.get_d());
    g.eval = [table, m](std::span<const Complex> x) -> Complex {
      Complex total(0.0, 0.0);
      const std::size_t n = table->size();
      for (std::size_t mask = 0; mask < n; ++mask) {
        double mass = (*table)[mask];
        if (mass == 0.0) continue;
        Complex prod(mass, 0.0);
        for (int i = 0; i < m; ++i)
          if (mask >> i & 1u) prod *= x[i];
        total += prod;
      }
      return total;
    };
  }
  return g;
}

template <class S>
GenPolyOracle<S> transform(const GenPolyOracle<S>& g, const TransformProgram& prog) {
  const int m = prog.source_arity;
  require(m == g.arity, ErrorCode::ArityMismatch,
          "transform program arity does not match oracle");
  std::vector<char> is_zeroed(m, 0), is_tagged(m, 0);
  for (int i : prog.zeroed) {
    require(i >= 0 && i < m, ErrorCode::ArityMismatch, "zeroed index out of range");
    is_zeroed[i] = 1;
  }
  for (int i : prog.tagged) {
    require(i >= 0 && i < m, ErrorCode::ArityMismatch, "tagged index out of range");
    require(!is_zeroed[i], ErrorCode::VariableClash,
            "coordinate is both zeroed and tagged");
    is_tagged[i] = 1;
  }
  const bool has_sub = !prog.exponents.empty();
  int p = 0;
  if (has_sub) {
    require(static_cast<int>(prog.exponents.size()) == m, ErrorCode::ArityMismatch,
            "exponent matrix must have one row per coordinate");
    p = static_cast<int>(prog.exponents.front().size());
    for (int i = 0; i < m; ++i) {
      require(static_cast<int>(prog.exponents[i].size()) == p,
              ErrorCode::ArityMismatch, "ragged exponent matrix");
      if (is_zeroed[i])
        for (int e : prog.exponents[i])
          require(e == 0, ErrorCode::VariableClash,
                  "coordinate is both zeroed and substituted");
    }
    require(static_cast<int>(prog.axis_shifts.size()) == p ||
                prog.axis_shifts.empty(),
            ErrorCode::ArityMismatch, "axis_shifts size mismatch");
  } else {
    require(prog.axis_shifts.empty(), ErrorCode::ArityMismatch,
            "axis_shifts require a substitution");
  }

  const bool has_tag = !prog.tagged.empty();
  std::vector<long long> shifts = prog.axis_shifts;
  if (has_sub && shifts.empty()) shifts.assign(static_cast<std::size_t>(p), 0);

  // Surviving coordinate slots for the no-substitution case.
  std::vector<int> slot_of(m, -1);
  int n_free = 0;
  if (!has_sub) {
    for (int i = 0; i < m; ++i)
      if (!is_zeroed[i]) slot_of[i] = n_free++;
  }

  GenPolyOracle<S> out;
  out.arity = (has_tag ? 1 : 0) + (has_sub ? p : n_free);
  out.cost_hint = g.cost_hint + static_cast<double>(m) * (has_sub ? 8 : 1);
  auto base = std::make_shared<GenPolyOracle<S>>(g);
  auto exps = std::make_shared<std::vector<std::vector<int>>>(prog.exponents);
  auto zflags = std::make_shared<std::vector<char>>(is_zeroed);
  auto tflags = std::make_shared<std::vector<char>>(is_tagged);
  auto slots = std::make_shared<std::vector<int>>(slot_of);
  auto shift_vec = std::make_shared<std::vector<long long>>(shifts);

  out.eval = [base, exps, zflags, tflags, slots, shift_vec, m, p, has_sub,
              has_tag](std::span<const S> pt) -> S {
    const int off = has_tag ? 1 : 0;
    std::vector<S> x(static_cast<std::size_t>(m), scalar_traits<S>::from_long(0));
    for (int i = 0; i < m; ++i) {
      if ((*zflags)[i]) continue;
      S value = scalar_traits<S>::from_long(1);
      if (has_sub) {
        for (int j = 0; j < p; ++j) {
          int e = (*exps)[i][j];
          if (e == 0) continue;
          const S& aux = pt[static_cast<std::size_t>(off + j)];
          if (e < 0 && aux == scalar_traits<S>::from_long(0))
            fail(ErrorCode::NumericalResolutionExceeded,
                 "evaluation at zero with a negative substitution exponent");
          value *= scalar_pow(aux, e);
        }
      } else {
        value = pt[static_cast<std::size_t>(off + (*slots)[i])];
      }
      if ((*tflags)[i]) value *= pt[0];
      x[static_cast<std::size_t>(i)] = value;
    }
    S result = base->eval(std::span<const S>(x));
    if (has_sub) {
      for (int j = 0; j < p; ++j) {
        long long s = (*shift_vec)[static_cast<std::size_t>(j)];
        if (s == 0) continue;
        const S& aux = pt[static_cast<std::size_t>(off + j)];
        if (s < 0 && aux == scalar_traits<S>::from_long(0))
          fail(ErrorCode::NumericalResolutionExceeded,
               "evaluation at zero with a negative shift exponent");
        result *= scalar_pow(aux, s);
      }
    }
    return result;
  };
  return out;
}

}  // namespace cdpp::genpoly
