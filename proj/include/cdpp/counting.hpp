#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cdpp/genpoly.hpp"
#include "cdpp/interp.hpp"

namespace cdpp::counting {

using genpoly::GenPolyOracle;

/// Finite description of a set K of admissible integer values: an explicit
/// set or a closed interval (clipped to the reachable cost range on use).
class IntSet {
 public:
  static IntSet of(std::vector<long long> values) {
    IntSet k;
    k.values_ = std::move(values);
    std::sort(k.values_->begin(), k.values_->end());
    return k;
  }
  static IntSet interval(long long lo, long long hi) {
    IntSet k;
    k.lo_ = lo;
    k.hi_ = hi;
    return k;
  }
  static IntSet at_most(long long hi) {
    return interval(std::numeric_limits<long long>::min(), hi);
  }
  static IntSet singleton(long long v) { return of({v}); }

  bool contains(long long v) const {
    if (values_)
      return std::binary_search(values_->begin(), values_->end(), v);
    return v >= lo_ && v <= hi_;
  }

 private:
  std::optional<std::vector<long long>> values_;
  long long lo_ = 0, hi_ = 0;
};

struct BudgetConstraint {
  std::vector<long long> c;
  long long C = 0;
};

struct LinearConstraint {
  std::vector<long long> c;
  IntSet K;
};

struct LinearFamily {
  int arity = 0;
  std::vector<LinearConstraint> constraints;
};

struct PartitionFamily {
  int arity = 0;
  std::vector<std::vector<int>> parts;  // 0-based, disjoint, covering [m]
  std::vector<int> quotas;
};

/// Constraint system attached to a measure; monostate = unconstrained.
using FamilySpec =
    std::variant<std::monostate, BudgetConstraint, LinearFamily, PartitionFamily>;

void validate_partition(const PartitionFamily& fam);

LinearFamily to_linear(const BudgetConstraint& b);
LinearFamily to_linear(const PartitionFamily& fam);
LinearFamily to_linear(const FamilySpec& fam, int arity);

/// Constrained mass with the backend's error information (zero when exact).
template <class R>
struct Mass {
  R value{};
  double error_bound = 0.0;
};

struct CountOptions {
  interp::RecoverOptions recover;
  double tau_neg = 1e-6;  // relative clamp window for tiny negative coefficients
};

// Core operations. S is Complex (float backend) or Rational (exact backend).
template <class S>
Mass<real_of_t<S>> bcount(const GenPolyOracle<S>& g, std::span<const long long> c,
                          long long C, const CountOptions& opts = {});

template <class S>
Mass<real_of_t<S>> ecount(const GenPolyOracle<S>& g, std::span<const long long> c,
                          long long C, const CountOptions& opts = {});

template <class S>
Mass<real_of_t<S>> set_count(const GenPolyOracle<S>& g,
                             std::span<const long long> c, const IntSet& K,
                             const CountOptions& opts = {});

template <class S>
Mass<real_of_t<S>> linear_family_count(const GenPolyOracle<S>& g,
                                       const LinearFamily& fam,
                                       const CountOptions& opts = {});

template <class S>
Mass<real_of_t<S>> partition_count(const GenPolyOracle<S>& g,
                                   const PartitionFamily& fam,
                                   const CountOptions& opts = {});

template <class S>
Mass<real_of_t<S>> total_mass(const GenPolyOracle<S>& g,
                              const CountOptions& opts = {});

/// Mass of sets S with Y subseteq S, N cap S = empty, S in fam.
/// Zeroes out N, tags Y with one auxiliary variable, and reads the top
/// y-coefficient by adding one interpolation axis (realized as the linear
/// constraint |S cap Y| = |Y|).
template <class S>
Mass<real_of_t<S>> conditioned_mass(const GenPolyOracle<S>& g,
                                    const LinearFamily& fam, std::uint64_t Y,
                                    std::uint64_t N,
                                    const CountOptions& opts = {});

// ---------------------------------------------------------------------------
// implementation

namespace detail {

inline long long l1_norm(std::span<const long long> c) {
  long long s = 0;
  for (long long v : c) s += std::llabs(v);
  return s;
}

inline long long positive_part(std::span<const long long> c) {
  long long s = 0;
  for (long long v : c)
    if (v > 0) s += v;
  return s;
}

/// Shared coefficient cleanup. The measures this engine works with are
/// nonnegative, so genuinely negative coefficients indicate lost precision
/// (float) or invalid input (exact).
inline std::vector<double> cleanup(const std::vector<Complex>& coeffs,
                                   const CountOptions& opts, double* err_out) {
  double scale = 0.0;
  for (const auto& z : coeffs) scale = std::max(scale, std::abs(z));
  double tau = opts.tau_neg * std::max(scale, 1e-300);
  std::vector<double> out(coeffs.size());
  double err = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    double re = coeffs[i].real();
    double im = std::abs(coeffs[i].imag());
    if (im > tau)
      fail(ErrorCode::NumericalResolutionExceeded,
           "coefficient has a non-real component beyond tolerance");
    err = std::max(err, im);
    if (re < 0.0) {
      if (re < -tau)
        fail(ErrorCode::NumericalResolutionExceeded,
             "negative coefficient on a nonnegative measure");
      err = std::max(err, -re);
      re = 0.0;
    }
    out[i] = re;
  }
  if (err_out) *err_out = err;
  return out;
}

inline std::vector<Rational> cleanup(const std::vector<Rational>& coeffs,
                                     const CountOptions&, double* err_out) {
  for (const auto& q : coeffs)
    if (q < 0)
      fail(ErrorCode::NumericalResolutionExceeded,
           "negative coefficient on a nonnegative measure");
  if (err_out) *err_out = 0.0;
  return coeffs;
}

/// Builds the cost-substituted univariate oracle h(z) = z^shift g(z^{c_i})
/// and recovers its coefficients; coefficient index d holds the mass at cost
/// d - shift.
template <class S>
struct CostCoefficients {
  std::vector<real_of_t<S>> coeffs;
  long long shift = 0;
  double error = 0.0;
};

template <class S>
CostCoefficients<S> univariate_cost_coefficients(const GenPolyOracle<S>& g,
                                                 std::span<const long long> c,
                                                 const CountOptions& opts) {
  require(static_cast<int>(c.size()) == g.arity, ErrorCode::ArityMismatch,
          "cost vector length does not match oracle arity");
  if (g.arity == 0) {
    // h(z) is the constant mu(empty set) at cost zero
    std::vector<S> value{g.eval(std::span<const S>())};
    CostCoefficients<S> out;
    out.coeffs = cleanup(value, opts, &out.error);
    return out;
  }
  bool has_negative = std::any_of(c.begin(), c.end(), [](long long v) { return v < 0; });
  long long shift = has_negative ? l1_norm(c) : 0;
  long long degree = shift + positive_part(c);

  genpoly::TransformProgram prog;
  prog.source_arity = g.arity;
  prog.exponents.resize(static_cast<std::size_t>(g.arity));
  for (int i = 0; i < g.arity; ++i)
    prog.exponents[static_cast<std::size_t>(i)] = {static_cast<int>(c[static_cast<std::size_t>(i)])};
  prog.axis_shifts = {shift};
  auto h = genpoly::transform(g, prog);

  CostCoefficients<S> out;
  out.shift = shift;
  if constexpr (scalar_traits<S>::is_exact) {
    auto eval = [&h](const Rational& z) -> Rational {
      std::vector<Rational> pt{z};
      return h.eval(std::span<const Rational>(pt));
    };
    auto rec = interp::recover_univariate(eval, static_cast<int>(degree), opts.recover);
    out.coeffs = cleanup(rec.coeffs, opts, &out.error);
  } else {
    auto eval = [&h](const Complex& z) -> Complex {
      std::vector<Complex> pt{z};
      return h.eval(std::span<const Complex>(pt));
    };
    auto rec = interp::recover_univariate(eval, static_cast<int>(degree), opts.recover);
    out.coeffs = cleanup(rec.coeffs, opts, &out.error);
  }
  return out;
}

template <class R>
Mass<R> sum_range(const std::vector<R>& coeffs, long long shift, long long lo_cost,
                  long long hi_cost, double err) {
  Mass<R> mass;
  mass.error_bound = err * static_cast<double>(coeffs.size());
  long long lo = std::max<long long>(0, lo_cost + shift);
  long long hi = std::min<long long>(static_cast<long long>(coeffs.size()) - 1,
                                     hi_cost + shift);
  for (long long d = lo; d <= hi; ++d)
    mass.value += coeffs[static_cast<std::size_t>(d)];
  return mass;
}

}  // namespace detail

template <class S>
Mass<real_of_t<S>> bcount(const GenPolyOracle<S>& g, std::span<const long long> c,
                          long long C, const CountOptions& opts) {
  auto cc = detail::univariate_cost_coefficients(g, c, opts);
  return detail::sum_range(cc.coeffs, cc.shift,
                           std::numeric_limits<long long>::min() / 2, C, cc.error);
}

template <class S>
Mass<real_of_t<S>> ecount(const GenPolyOracle<S>& g, std::span<const long long> c,
                          long long C, const CountOptions& opts) {
  auto cc = detail::univariate_cost_coefficients(g, c, opts);
  return detail::sum_range(cc.coeffs, cc.shift, C, C, cc.error);
}

template <class S>
Mass<real_of_t<S>> set_count(const GenPolyOracle<S>& g,
                             std::span<const long long> c, const IntSet& K,
                             const CountOptions& opts) {
  auto cc = detail::univariate_cost_coefficients(g, c, opts);
  Mass<real_of_t<S>> mass;
  mass.error_bound = cc.error * static_cast<double>(cc.coeffs.size());
  for (long long d = 0; d < static_cast<long long>(cc.coeffs.size()); ++d)
    if (K.contains(d - cc.shift))
      mass.value += cc.coeffs[static_cast<std::size_t>(d)];
  return mass;
}

template <class S>
Mass<real_of_t<S>> total_mass(const GenPolyOracle<S>& g, const CountOptions& opts) {
  std::vector<S> ones(static_cast<std::size_t>(g.arity),
                      scalar_traits<S>::from_long(1));
  S value = genpoly::evaluate(g, std::span<const S>(ones));
  std::vector<S> single{value};
  double err = 0.0;
  auto cleaned = detail::cleanup(single, opts, &err);
  Mass<real_of_t<S>> mass;
  mass.value = cleaned.front();
  mass.error_bound = err;
  return mass;
}

template <class S>
Mass<real_of_t<S>> linear_family_count(const GenPolyOracle<S>& g,
                                       const LinearFamily& fam,
                                       const CountOptions& opts) {
  require(fam.arity == g.arity, ErrorCode::ArityMismatch,
          "family arity does not match oracle");
  const int p = static_cast<int>(fam.constraints.size());
  if (p == 0) return total_mass(g, opts);
  if (g.arity == 0) {
    // only the empty set exists; it is feasible iff every K_j admits zero
    for (const auto& con : fam.constraints)
      if (!con.K.contains(0)) return Mass<real_of_t<S>>{};
    return total_mass(g, opts);
  }

  std::vector<long long> shifts(static_cast<std::size_t>(p), 0);
  std::vector<int> bounds(static_cast<std::size_t>(p), 0);
  genpoly::TransformProgram prog;
  prog.source_arity = g.arity;
  prog.exponents.assign(static_cast<std::size_t>(g.arity),
                        std::vector<int>(static_cast<std::size_t>(p), 0));
  for (int j = 0; j < p; ++j) {
    const auto& cj = fam.constraints[static_cast<std::size_t>(j)].c;
    require(static_cast<int>(cj.size()) == g.arity, ErrorCode::ArityMismatch,
            "constraint length does not match oracle arity");
    bool has_negative =
        std::any_of(cj.begin(), cj.end(), [](long long v) { return v < 0; });
    long long shift = has_negative ? detail::l1_norm(cj) : 0;
    shifts[static_cast<std::size_t>(j)] = shift;
    bounds[static_cast<std::size_t>(j)] =
        static_cast<int>(shift + detail::positive_part(cj));
    for (int i = 0; i < g.arity; ++i)
      prog.exponents[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          static_cast<int>(cj[static_cast<std::size_t>(i)]);
  }
  prog.axis_shifts = shifts;
  auto h = genpoly::transform(g, prog);

  Mass<real_of_t<S>> mass;
  auto accumulate = [&](const auto& tensor, double err) {
    mass.error_bound = err * static_cast<double>(tensor.entries.size());
    std::vector<int> idx(static_cast<std::size_t>(p), 0);
    const std::size_t total = tensor.entries.size();
    for (std::size_t f = 0; f < total; ++f) {
      std::size_t rem = f;
      bool match = true;
      for (int a = p - 1; a >= 0; --a) {
        idx[static_cast<std::size_t>(a)] =
            static_cast<int>(rem % static_cast<std::size_t>(tensor.dims[static_cast<std::size_t>(a)]));
        rem /= static_cast<std::size_t>(tensor.dims[static_cast<std::size_t>(a)]);
      }
      for (int j = 0; j < p && match; ++j) {
        long long cost = idx[static_cast<std::size_t>(j)] - shifts[static_cast<std::size_t>(j)];
        if (!fam.constraints[static_cast<std::size_t>(j)].K.contains(cost))
          match = false;
      }
      if (match) mass.value += tensor.entries[f];
    }
  };

  if constexpr (scalar_traits<S>::is_exact) {
    auto eval = [&h](std::span<const Rational> pt) -> Rational {
      return h.eval(pt);
    };
    auto tensor = interp::recover_multivariate(eval, bounds, opts.recover);
    double err = 0.0;
    tensor.entries = detail::cleanup(tensor.entries, opts, &err);
    accumulate(tensor, err);
  } else {
    auto eval = [&h](std::span<const Complex> pt) -> Complex {
      return h.eval(pt);
    };
    auto rec = interp::recover_multivariate(eval, bounds, opts.recover);
    double err = 0.0;
    auto cleaned = detail::cleanup(rec.entries, opts, &err);
    interp::CoefficientTensor<double> tensor;
    tensor.dims = rec.dims;
    tensor.entries = std::move(cleaned);
    accumulate(tensor, err);
  }
  return mass;
}

template <class S>
Mass<real_of_t<S>> partition_count(const GenPolyOracle<S>& g,
                                   const PartitionFamily& fam,
                                   const CountOptions& opts) {
  validate_partition(fam);
  return linear_family_count(g, to_linear(fam), opts);
}

template <class S>
Mass<real_of_t<S>> conditioned_mass(const GenPolyOracle<S>& g,
                                    const LinearFamily& fam, std::uint64_t Y,
                                    std::uint64_t N, const CountOptions& opts) {
  require((Y & N) == 0, ErrorCode::VariableClash,
          "forced-in and forced-out sets overlap");
  const int m = g.arity;
  require(fam.arity == m, ErrorCode::ArityMismatch,
          "family arity does not match oracle");
  require(m <= 63, ErrorCode::TooLarge, "conditioning uses 64-bit masks");

  std::vector<int> survivors;
  survivors.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    if (!(N >> i & 1ull)) survivors.push_back(i);

  GenPolyOracle<S> base = g;
  if (N != 0) {
    genpoly::TransformProgram zp;
    zp.source_arity = m;
    for (int i = 0; i < m; ++i)
      if (N >> i & 1ull) zp.zeroed.push_back(i);
    base = genpoly::transform(g, zp);
  }

  // Sets avoiding N keep their cost under coordinate restriction, so the
  // family simply reindexes onto the surviving coordinates.
  LinearFamily sub;
  sub.arity = static_cast<int>(survivors.size());
  for (const auto& con : fam.constraints) {
    LinearConstraint rc;
    rc.K = con.K;
    rc.c.reserve(survivors.size());
    for (int i : survivors) rc.c.push_back(con.c[static_cast<std::size_t>(i)]);
    sub.constraints.push_back(std::move(rc));
  }
  if (Y != 0) {
    LinearConstraint tag;
    tag.c.assign(survivors.size(), 0);
    int count = 0;
    for (std::size_t s = 0; s < survivors.size(); ++s)
      if (Y >> survivors[s] & 1ull) {
        tag.c[s] = 1;
        ++count;
      }
    tag.K = IntSet::singleton(count);
    sub.constraints.push_back(std::move(tag));
  }
  return linear_family_count(base, sub, opts);
}

}  // namespace cdpp::counting
