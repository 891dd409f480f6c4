#include "cdpp/interp.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cdpp/parallel.hpp"

namespace cdpp::interp {

namespace {

// Grid nodes for the float backend: w_k = exp(-2*pi*i*k/N), so that the value
// vector is the forward DFT of the coefficient vector and recovery is one
// inverse FFT.
Complex unit_node(std::size_t k, std::size_t n) {
  double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
               static_cast<double>(n);
  return Complex(std::cos(ang), std::sin(ang));
}

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

template <class S>
S horner(const std::vector<S>& coeffs, const S& z) {
  S acc = scalar_traits<S>::from_long(0);
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

// Columns of the inverse Vandermonde at the given nodes: coeffs = W * values.
// Column j holds the monomial coefficients of the Lagrange basis polynomial
// through node j.
std::vector<std::vector<Rational>> lagrange_matrix(
    const std::vector<Rational>& nodes) {
  const std::size_t n = nodes.size();
  // master polynomial prod (x - x_j)
  std::vector<Rational> master(n + 1);
  master[0] = 1;
  std::size_t deg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    master[deg + 1] = master[deg];
    for (std::size_t t = deg; t > 0; --t)
      master[t] = master[t - 1] - nodes[j] * master[t];
    master[0] = -nodes[j] * master[0];
    ++deg;
  }
  std::vector<std::vector<Rational>> w(n, std::vector<Rational>(n));
  for (std::size_t j = 0; j < n; ++j) {
    // synthetic division: q = master / (x - x_j)
    std::vector<Rational> q(n);
    Rational carry = master[n];
    for (std::size_t t = n; t-- > 0;) {
      q[t] = carry;
      carry = master[t] + nodes[j] * carry;
    }
    Rational denom(1);
    for (std::size_t k = 0; k < n; ++k)
      if (k != j) denom *= nodes[j] - nodes[k];
    for (std::size_t r = 0; r < n; ++r) w[r][j] = q[r] / denom;
  }
  return w;
}

std::vector<Rational> integer_nodes(int count) {
  std::vector<Rational> nodes(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) nodes[static_cast<std::size_t>(k)] = k + 1;
  return nodes;
}

}  // namespace

Integer round_to_integer(double value) {
  double r = std::round(value);
  if (std::abs(value - r) > 0.25 || !std::isfinite(value))
    fail(ErrorCode::NumericalResolutionExceeded,
         "value is too far from an integer to round safely");
  Integer out;
  mpz_set_d(out.get_mpz_t(), r);
  return out;
}

Integer round_to_integer(const Rational& value) {
  if (value.get_den() != 1)
    fail(ErrorCode::NumericalResolutionExceeded,
         "exact value is not an integer");
  return value.get_num();
}

UnivariateCoefficients<Complex> recover_univariate(
    const std::function<Complex(const Complex&)>& eval, int degree_bound,
    const RecoverOptions& opts) {
  require(degree_bound >= 0, ErrorCode::DegreeExceeded, "negative degree bound");
  const std::size_t n =
      detail::next_pow2(static_cast<std::size_t>(degree_bound) + 1);
  require(static_cast<long long>(n) <= opts.grid_budget, ErrorCode::GridTooLarge,
          "interpolation grid exceeds the evaluation budget");
  std::vector<Complex> values(n);
  parallel_for(n, [&](std::size_t k) { values[k] = eval(unit_node(k, n)); });
  double value_scale = max_abs(values);
  std::vector<Complex> coeffs = values;
  detail::fft_inplace(coeffs, /*inverse=*/true);
  double coeff_scale = max_abs(coeffs);
  double tol = opts.residual_tol * std::max({value_scale, coeff_scale, 1.0});
  if (opts.check_degree) {
    for (std::size_t j = static_cast<std::size_t>(degree_bound) + 1; j < n; ++j)
      if (std::abs(coeffs[j]) > tol)
        fail(ErrorCode::DegreeExceeded,
             "recovered coefficients above the stated degree bound");
    // Held-out node at an irrational angle: aliasing cannot hide there.
    Complex z(std::cos(1.0), std::sin(1.0));
    std::vector<Complex> head(coeffs.begin(),
                              coeffs.begin() + degree_bound + 1);
    Complex predicted = horner(head, z);
    Complex actual = eval(z);
    if (std::abs(predicted - actual) >
        opts.residual_tol *
            std::max({std::abs(actual), value_scale, coeff_scale, 1.0}))
      fail(ErrorCode::DegreeExceeded,
           "held-out node residual exceeds tolerance (degree bound violated)");
  }
  UnivariateCoefficients<Complex> out;
  out.coeffs.assign(coeffs.begin(), coeffs.begin() + degree_bound + 1);
  return out;
}

UnivariateCoefficients<Rational> recover_univariate(
    const std::function<Rational(const Rational&)>& eval, int degree_bound,
    const RecoverOptions& opts) {
  require(degree_bound >= 0, ErrorCode::DegreeExceeded, "negative degree bound");
  const int n = degree_bound + 1;
  require(static_cast<long long>(n) <= opts.grid_budget, ErrorCode::GridTooLarge,
          "interpolation grid exceeds the evaluation budget");
  std::vector<Rational> nodes = integer_nodes(n);
  std::vector<Rational> values(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n),
               [&](std::size_t k) { values[k] = eval(nodes[k]); });
  auto w = lagrange_matrix(nodes);
  UnivariateCoefficients<Rational> out;
  out.coeffs.assign(static_cast<std::size_t>(n), Rational(0));
  for (int r = 0; r < n; ++r) {
    Rational acc(0);
    for (int j = 0; j < n; ++j) {
      if (values[static_cast<std::size_t>(j)] == 0) continue;
      acc += w[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] *
             values[static_cast<std::size_t>(j)];
    }
    out.coeffs[static_cast<std::size_t>(r)] = acc;
  }
  if (opts.check_degree) {
    Rational z(n + 1);
    Rational predicted = horner(out.coeffs, z);
    Rational actual = eval(z);
    if (predicted != actual)
      fail(ErrorCode::DegreeExceeded,
           "held-out node mismatch (degree bound violated)");
  }
  return out;
}

namespace {

template <class S>
struct GridShape {
  std::vector<int> grid_dims;   // evaluation grid sizes per axis
  std::vector<int> out_dims;    // D_j + 1
  std::size_t total = 1;
};

template <class S>
GridShape<S> make_shape(std::span<const int> bounds, const RecoverOptions& opts) {
  GridShape<S> shape;
  long long requested = 1;
  for (int d : bounds) {
    require(d >= 0, ErrorCode::DegreeExceeded, "negative degree bound");
    requested *= d + 1;
    require(requested <= opts.grid_budget, ErrorCode::GridTooLarge,
            "tensor grid exceeds the evaluation budget");
    shape.out_dims.push_back(d + 1);
  }
  long long padded = 1;
  for (int d : bounds) {
    int g;
    if constexpr (scalar_traits<S>::is_exact) {
      g = d + 1;
    } else {
      g = static_cast<int>(
          detail::next_pow2(static_cast<std::size_t>(d) + 1));
    }
    padded *= g;
    require(padded <= 4 * opts.grid_budget, ErrorCode::GridTooLarge,
            "padded tensor grid exceeds the evaluation budget");
    shape.grid_dims.push_back(g);
  }
  shape.total = 1;
  for (int g : shape.grid_dims) shape.total *= static_cast<std::size_t>(g);
  return shape;
}

void decode_index(std::size_t flat, const std::vector<int>& dims,
                  std::vector<int>& idx) {
  for (std::size_t a = dims.size(); a-- > 0;) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(dims[a]));
    flat /= static_cast<std::size_t>(dims[a]);
  }
}

// Applies a 1-D transform along each axis of a row-major tensor.
template <class S, class LineFn>
void transform_axis(std::vector<S>& data, const std::vector<int>& dims, int axis,
                    LineFn&& line_fn) {
  std::size_t stride = 1;
  for (std::size_t a = static_cast<std::size_t>(axis) + 1; a < dims.size(); ++a)
    stride *= static_cast<std::size_t>(dims[a]);
  const std::size_t len = static_cast<std::size_t>(dims[static_cast<std::size_t>(axis)]);
  const std::size_t block = stride * len;
  const std::size_t total = data.size();
  const std::size_t lines = total / len;
  parallel_for(lines, [&](std::size_t line) {
    std::size_t outer = line / stride;
    std::size_t inner = line % stride;
    std::size_t base = outer * block + inner;
    std::vector<S> buf(len);
    for (std::size_t k = 0; k < len; ++k) buf[k] = data[base + k * stride];
    line_fn(buf);
    for (std::size_t k = 0; k < len; ++k) data[base + k * stride] = buf[k];
  });
}

template <class S>
std::vector<S> slice_tensor(const std::vector<S>& data,
                            const std::vector<int>& dims,
                            const std::vector<int>& out_dims) {
  std::size_t out_total = 1;
  for (int d : out_dims) out_total *= static_cast<std::size_t>(d);
  std::vector<S> out(out_total);
  std::vector<int> idx(out_dims.size(), 0);
  for (std::size_t f = 0; f < out_total; ++f) {
    decode_index(f, out_dims, idx);
    std::size_t src = 0;
    for (std::size_t a = 0; a < dims.size(); ++a)
      src = src * static_cast<std::size_t>(dims[a]) + static_cast<std::size_t>(idx[a]);
    out[f] = data[src];
  }
  return out;
}

template <class S>
S tensor_horner(const std::vector<S>& entries, const std::vector<int>& dims,
                std::span<const S> point, std::size_t offset, std::size_t axis) {
  const std::size_t len = static_cast<std::size_t>(dims[axis]);
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < dims.size(); ++a)
    stride *= static_cast<std::size_t>(dims[a]);
  S acc = scalar_traits<S>::from_long(0);
  for (std::size_t k = len; k-- > 0;) {
    S term = (axis + 1 == dims.size())
                 ? entries[offset + k * stride]
                 : tensor_horner(entries, dims, point, offset + k * stride,
                                 axis + 1);
    acc = acc * point[axis] + term;
  }
  return acc;
}

}  // namespace

CoefficientTensor<Complex> recover_multivariate(
    const std::function<Complex(std::span<const Complex>)>& eval,
    std::span<const int> degree_bounds, const RecoverOptions& opts) {
  const std::size_t p = degree_bounds.size();
  if (p == 0) {
    CoefficientTensor<Complex> out;
    out.entries.push_back(eval(std::span<const Complex>()));
    return out;
  }
  auto shape = make_shape<Complex>(degree_bounds, opts);
  std::vector<Complex> data(shape.total);
  parallel_for(shape.total, [&](std::size_t f) {
    std::vector<int> idx(p, 0);
    decode_index(f, shape.grid_dims, idx);
    std::vector<Complex> point(p);
    for (std::size_t a = 0; a < p; ++a)
      point[a] = unit_node(static_cast<std::size_t>(idx[a]),
                           static_cast<std::size_t>(shape.grid_dims[a]));
    data[f] = eval(point);
  });
  double value_scale = max_abs(data);
  for (std::size_t a = 0; a < p; ++a)
    transform_axis(data, shape.grid_dims, static_cast<int>(a),
                   [](std::vector<Complex>& buf) {
                     detail::fft_inplace(buf, /*inverse=*/true);
                   });
  double coeff_scale = max_abs(data);
  double tol = opts.residual_tol * std::max({value_scale, coeff_scale, 1.0});
  CoefficientTensor<Complex> out;
  out.dims = shape.out_dims;
  out.entries = slice_tensor(data, shape.grid_dims, shape.out_dims);
  if (opts.check_degree) {
    // Residue outside the kept block signals a violated bound.
    std::vector<int> idx(p, 0);
    for (std::size_t f = 0; f < data.size(); ++f) {
      decode_index(f, shape.grid_dims, idx);
      bool inside = true;
      for (std::size_t a = 0; a < p; ++a)
        if (idx[a] >= shape.out_dims[a]) inside = false;
      if (!inside && std::abs(data[f]) > tol)
        fail(ErrorCode::DegreeExceeded,
             "tensor coefficients above the stated degree bounds");
    }
    std::vector<Complex> z(p);
    for (std::size_t a = 0; a < p; ++a) {
      double ang = 1.0 / static_cast<double>(a + 1);
      z[a] = Complex(std::cos(ang), std::sin(ang));
    }
    Complex predicted = tensor_horner(out.entries, out.dims,
                                      std::span<const Complex>(z), 0, 0);
    Complex actual = eval(z);
    if (std::abs(predicted - actual) >
        opts.residual_tol *
            std::max({std::abs(actual), value_scale, coeff_scale, 1.0}))
      fail(ErrorCode::DegreeExceeded,
           "held-out node residual exceeds tolerance (degree bounds violated)");
  }
  return out;
}

CoefficientTensor<Rational> recover_multivariate(
    const std::function<Rational(std::span<const Rational>)>& eval,
    std::span<const int> degree_bounds, const RecoverOptions& opts) {
  const std::size_t p = degree_bounds.size();
  if (p == 0) {
    CoefficientTensor<Rational> out;
    out.entries.push_back(eval(std::span<const Rational>()));
    return out;
  }
  auto shape = make_shape<Rational>(degree_bounds, opts);
  std::vector<std::vector<Rational>> axis_nodes(p);
  std::vector<std::vector<std::vector<Rational>>> axis_w(p);
  for (std::size_t a = 0; a < p; ++a) {
    axis_nodes[a] = integer_nodes(shape.grid_dims[a]);
    axis_w[a] = lagrange_matrix(axis_nodes[a]);
  }
  std::vector<Rational> data(shape.total);
  parallel_for(shape.total, [&](std::size_t f) {
    std::vector<int> idx(p, 0);
    decode_index(f, shape.grid_dims, idx);
    std::vector<Rational> point(p);
    for (std::size_t a = 0; a < p; ++a)
      point[a] = axis_nodes[a][static_cast<std::size_t>(idx[a])];
    data[f] = eval(point);
  });
  for (std::size_t a = 0; a < p; ++a) {
    const auto& w = axis_w[a];
    transform_axis(data, shape.grid_dims, static_cast<int>(a),
                   [&w](std::vector<Rational>& buf) {
                     const std::size_t n = buf.size();
                     std::vector<Rational> out(n, Rational(0));
                     for (std::size_t r = 0; r < n; ++r) {
                       Rational acc(0);
                       for (std::size_t j = 0; j < n; ++j) {
                         if (buf[j] == 0) continue;
                         acc += w[r][j] * buf[j];
                       }
                       out[r] = acc;
                     }
                     buf = std::move(out);
                   });
  }
  CoefficientTensor<Rational> out;
  out.dims = shape.out_dims;
  out.entries = std::move(data);
  if (opts.check_degree) {
    std::vector<Rational> z(p);
    for (std::size_t a = 0; a < p; ++a)
      z[a] = Rational(shape.grid_dims[a] + 1 + static_cast<int>(a));
    Rational predicted = tensor_horner(out.entries, out.dims,
                                       std::span<const Rational>(z), 0, 0);
    Rational actual = eval(z);
    if (predicted != actual)
      fail(ErrorCode::DegreeExceeded,
           "held-out node mismatch (degree bounds violated)");
  }
  return out;
}

}  // namespace cdpp::interp
