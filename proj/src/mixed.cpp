#include "cdpp/mixed.hpp"

#include <Eigen/Eigenvalues>

namespace cdpp::mixed {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

Integer factorial_exact(int n) {
  Integer f(1);
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_psd(const Eigen::MatrixXd& a, int dim, const genpoly::PsdOptions& opts) {
  require(a.rows() == dim && a.cols() == dim, ErrorCode::DimensionMismatch,
          "matrices in a tuple share one dimension");
  double scale = std::max(a.cwiseAbs().maxCoeff(), 1.0);
  require((a - a.transpose()).cwiseAbs().maxCoeff() <= opts.tau_chol * scale,
          ErrorCode::NotSymmetric, "tuple matrices must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  require(es.eigenvalues().minCoeff() >= -opts.tau_psd * scale,
          ErrorCode::NotPSD, "tuple matrices must be PSD");
}

/// Columns of the pivoted Cholesky factor, zero-padded to exactly d vectors.
std::vector<Eigen::VectorXd> rank_one_summands(const Eigen::MatrixXd& a, int d) {
  genpoly::Kernel k{a};
  genpoly::FeatureMatrix v = genpoly::cholesky_factor(k);
  std::vector<Eigen::VectorXd> out;
  out.reserve(static_cast<std::size_t>(d));
  for (int j = 0; j < v.rank(); ++j) out.push_back(v.entries.col(j));
  while (static_cast<int>(out.size()) < d)
    out.push_back(Eigen::VectorXd::Zero(a.rows()));
  return out;
}

}  // namespace

MatrixTuple make_tuple(std::vector<Eigen::MatrixXd> mats,
                       const genpoly::PsdOptions& opts) {
  require(!mats.empty(), ErrorCode::DimensionMismatch, "empty matrix tuple");
  MatrixTuple t;
  t.dim = static_cast<int>(mats.front().rows());
  for (const auto& a : mats) check_psd(a, t.dim, opts);
  t.mats = std::move(mats);
  return t;
}

double mixed_discriminant_bruteforce(const MatrixTuple& t) {
  const int d = t.dim;
  require(static_cast<int>(t.mats.size()) == d, ErrorCode::DimensionMismatch,
          "mixed discriminants take d matrices of dimension d");
  require(d <= 8, ErrorCode::DimensionMismatch,
          "polarization brute force supports d <= 8");
  double total = 0.0;
  const std::size_t subsets = std::size_t{1} << d;
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(d, d);
    int bits = 0;
    for (int i = 0; i < d; ++i)
      if (mask >> i & 1u) {
        sum += t.mats[static_cast<std::size_t>(i)];
        ++bits;
      }
    double det = bits == 0 ? 0.0 : sum.determinant();
    total += ((d - bits) % 2 == 0 ? 1.0 : -1.0) * det;
  }
  return total / factorial(d);
}

double mixed_disc_via_ecount(const MatrixTuple& t, const MixedOptions& opts) {
  const int n = t.dim;
  require(static_cast<int>(t.mats.size()) == n, ErrorCode::DimensionMismatch,
          "the ECount reduction takes n matrices of dimension n");
  // Ground set: n^2 rank-one vectors, n per part.
  Eigen::MatrixXd v(n * n, n);
  for (int i = 0; i < n; ++i) {
    auto vs = rank_one_summands(t.mats[static_cast<std::size_t>(i)], n);
    for (int j = 0; j < n; ++j) v.row(i * n + j) = vs[static_cast<std::size_t>(j)];
  }
  // One combined cost vector: c_e = B^{i+1} for e in part i, base B = n^2+1.
  const long long base = static_cast<long long>(n) * n + 1;
  std::vector<long long> costs(static_cast<std::size_t>(n) * n);
  long long target = 0;
  long long power = 1;
  long long degree = 0;
  for (int i = 0; i < n; ++i) {
    power *= base;
    target += power;
    for (int j = 0; j < n; ++j)
      costs[static_cast<std::size_t>(i * n + j)] = power;
    degree += static_cast<long long>(n) * power;
  }
  require(degree <= opts.cost_budget, ErrorCode::CostBudgetExceeded,
          "combined cost vector exceeds the interpolation budget");
  auto oracle = genpoly::dpp_oracle(genpoly::FeatureMatrix{v});
  auto mass = counting::ecount(oracle, std::span<const long long>(costs), target,
                               opts.count);
  return mass.value / factorial(n);
}

namespace {

/// Shared construction for the restricted mixed discriminant: the stacked
/// Cholesky rows of (A_1..A_k, I) with parts of size d and quotas
/// (1,..,1,d-k). The partition count equals Dbar directly.
counting::PartitionFamily restricted_family(int k, int d) {
  counting::PartitionFamily fam;
  fam.arity = (k + 1) * d;
  for (int i = 0; i <= k; ++i) {
    std::vector<int> part;
    for (int j = 0; j < d; ++j) part.push_back(i * d + j);
    fam.parts.push_back(std::move(part));
    fam.quotas.push_back(i < k ? 1 : d - k);
  }
  return fam;
}

}  // namespace

double restricted_mixed_disc(const std::vector<Eigen::MatrixXd>& a, int d,
                             const MixedOptions& opts) {
  const int k = static_cast<int>(a.size());
  require(k <= d, ErrorCode::DimensionMismatch,
          "restricted mixed discriminants need k <= d");
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero((k + 1) * d, d);
  for (int i = 0; i < k; ++i) {
    auto vs = rank_one_summands(a[static_cast<std::size_t>(i)], d);
    for (int j = 0; j < d; ++j) u.row(i * d + j) = vs[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j < d; ++j) u(k * d + j, j) = 1.0;  // identity part
  auto oracle = genpoly::dpp_oracle(genpoly::FeatureMatrix{u});
  auto mass = counting::partition_count(oracle, restricted_family(k, d),
                                        opts.count);
  return mass.value;
}

Rational restricted_mixed_disc_exact(const std::vector<QMatrix>& a, int d,
                                     const MixedOptions& opts) {
  const int k = static_cast<int>(a.size());
  require(k <= d, ErrorCode::DimensionMismatch,
          "restricted mixed discriminants need k <= d");
  QMatrix u((k + 1) * d, d);
  for (int i = 0; i < k; ++i) {
    auto fac = rational_cholesky(a[static_cast<std::size_t>(i)]);
    require(fac.has_value(), ErrorCode::NumericalResolutionExceeded,
            "matrix has no exact rational Cholesky factor");
    for (int j = 0; j < fac->cols(); ++j)
      for (int r = 0; r < d; ++r) u(i * d + j, r) = (*fac)(r, j);
  }
  for (int j = 0; j < d; ++j) u(k * d + j, j) = 1;
  auto oracle = genpoly::dpp_oracle_exact_factor(u);
  auto mass = counting::partition_count(oracle, restricted_family(k, d),
                                        opts.count);
  return mass.value;
}

namespace {

template <class Fn>
void for_each_subset(int m, int k, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k == 0) {
    fn(idx);
    return;
  }
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

MixedCharCoeffs mixed_char_top_coeffs(const MatrixTuple& t, int k_max,
                                      const MixedOptions& opts) {
  const int d = t.dim;
  const int m = static_cast<int>(t.mats.size());
  require(k_max >= 0 && k_max <= d, ErrorCode::DimensionMismatch,
          "k_max must lie in [0, d]");
  MixedCharCoeffs out;
  out.dim = d;
  for (int k = 0; k <= k_max; ++k) {
    double sum = 0.0;
    if (k <= m) {
      for_each_subset(m, k, [&](const std::vector<int>& idx) {
        std::vector<Eigen::MatrixXd> sel;
        sel.reserve(idx.size());
        for (int i : idx) sel.push_back(t.mats[static_cast<std::size_t>(i)]);
        sum += restricted_mixed_disc(sel, d, opts);
      });
    }
    out.coeffs.push_back((k % 2 == 0 ? 1.0 : -1.0) * sum);
  }
  return out;
}

std::vector<Rational> mixed_char_top_coeffs_exact(const std::vector<QMatrix>& mats,
                                                  int dim, int k_max,
                                                  const MixedOptions& opts) {
  const int m = static_cast<int>(mats.size());
  require(k_max >= 0 && k_max <= dim, ErrorCode::DimensionMismatch,
          "k_max must lie in [0, d]");
  std::vector<Rational> out;
  for (int k = 0; k <= k_max; ++k) {
    Rational sum(0);
    if (k <= m) {
      for_each_subset(m, k, [&](const std::vector<int>& idx) {
        std::vector<QMatrix> sel;
        sel.reserve(idx.size());
        for (int i : idx) sel.push_back(mats[static_cast<std::size_t>(i)]);
        sum += restricted_mixed_disc_exact(sel, dim, opts);
      });
    }
    out.push_back(k % 2 == 0 ? sum : Rational(-sum));
  }
  return out;
}

double block_reduction_sum(const MatrixTuple& t, int k, const MixedOptions& opts) {
  const int d = t.dim;
  const int m = static_cast<int>(t.mats.size());
  require(k >= 0 && k <= d && k <= m, ErrorCode::DimensionMismatch,
          "k must lie in [0, min(m, d)]");
  const int big = m + d - k;  // tuple length and block dimension
  require(big <= opts.dimension_budget, ErrorCode::DimensionBudgetExceeded,
          "block dimension exceeds the brute-force budget");
  std::vector<Eigen::MatrixXd> blocks;
  blocks.reserve(static_cast<std::size_t>(big));
  for (int i = 0; i < m; ++i) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(big, big);
    b.topLeftCorner(d, d) = t.mats[static_cast<std::size_t>(i)];
    b.bottomRightCorner(m - k, m - k) =
        Eigen::MatrixXd::Identity(m - k, m - k);
    blocks.push_back(std::move(b));
  }
  for (int i = 0; i < d - k; ++i) {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(big, big);
    b.topLeftCorner(d, d) = Eigen::MatrixXd::Identity(d, d);
    blocks.push_back(std::move(b));
  }
  MatrixTuple bt;
  bt.dim = big;
  bt.mats = std::move(blocks);
  // The defining derivative is the unnormalized discriminant: big! * D_norm.
  double unnorm = mixed_discriminant_bruteforce(bt) * factorial(big);
  return unnorm / (factorial(m - k) * factorial(d - k));
}

namespace {

// Self-contained double-precision Lagrange inversion at small integer nodes;
// deliberately not shared with the interp module.
std::vector<std::vector<double>> small_lagrange(const std::vector<double>& nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> master(n + 1, 0.0);
  master[0] = 1.0;
  std::size_t deg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    master[deg + 1] = master[deg];
    for (std::size_t t = deg; t > 0; --t)
      master[t] = master[t - 1] - nodes[j] * master[t];
    master[0] = -nodes[j] * master[0];
    ++deg;
  }
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> q(n, 0.0);
    double carry = master[n];
    for (std::size_t t = n; t-- > 0;) {
      q[t] = carry;
      carry = master[t] + nodes[j] * carry;
    }
    double denom = 1.0;
    for (std::size_t t = 0; t < n; ++t)
      if (t != j) denom *= nodes[j] - nodes[t];
    for (std::size_t r = 0; r < n; ++r) w[r][j] = q[r] / denom;
  }
  return w;
}

}  // namespace

std::vector<double> mixed_char_bruteforce(const MatrixTuple& t) {
  const int d = t.dim;
  const int m = static_cast<int>(t.mats.size());
  require(m <= 4 && d <= 4, ErrorCode::TooLarge,
          "mixed characteristic brute force supports m, d <= 4");
  const int nn = d + 1;  // nodes per axis
  std::vector<double> nodes(static_cast<std::size_t>(nn));
  for (int j = 0; j < nn; ++j)
    nodes[static_cast<std::size_t>(j)] = j - d / 2;  // small symmetric integers
  auto w = small_lagrange(nodes);

  // f(x, z) on the (m+1)-dimensional grid, x axis first.
  std::vector<int> dims(static_cast<std::size_t>(m) + 1, nn);
  std::size_t total = 1;
  for (int a = 0; a <= m; ++a) total *= static_cast<std::size_t>(nn);
  std::vector<double> data(total);
  std::vector<int> idx(static_cast<std::size_t>(m) + 1, 0);
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t rem = f;
    for (int a = m; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % nn);
      rem /= static_cast<std::size_t>(nn);
    }
    Eigen::MatrixXd mat = nodes[static_cast<std::size_t>(idx[0])] *
                          Eigen::MatrixXd::Identity(d, d);
    for (int i = 0; i < m; ++i)
      mat += nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(i) + 1])] *
             t.mats[static_cast<std::size_t>(i)];
    data[f] = mat.determinant();
  }

  // Invert axis by axis to monomial coefficients.
  for (int axis = 0; axis <= m; ++axis) {
    std::size_t stride = 1;
    for (int a = axis + 1; a <= m; ++a) stride *= static_cast<std::size_t>(nn);
    std::size_t block = stride * static_cast<std::size_t>(nn);
    for (std::size_t base = 0; base < total; ++base) {
      if ((base / stride) % nn != 0) continue;
      std::vector<double> buf(static_cast<std::size_t>(nn));
      for (int kk = 0; kk < nn; ++kk)
        buf[static_cast<std::size_t>(kk)] =
            data[base + static_cast<std::size_t>(kk) * stride];
      std::vector<double> coeff(static_cast<std::size_t>(nn), 0.0);
      for (int r = 0; r < nn; ++r)
        for (int j = 0; j < nn; ++j)
          coeff[static_cast<std::size_t>(r)] +=
              w[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] *
              buf[static_cast<std::size_t>(j)];
      for (int kk = 0; kk < nn; ++kk)
        data[base + static_cast<std::size_t>(kk) * stride] =
            coeff[static_cast<std::size_t>(kk)];
    }
    (void)block;
  }

  // mu(x) = sum_S (-1)^{|S|} [z^S] f; collect per x-power.
  std::vector<double> mu(static_cast<std::size_t>(d) + 1, 0.0);
  const std::size_t zsubsets = std::size_t{1} << m;
  for (std::size_t mask = 0; mask < zsubsets; ++mask) {
    int bits = 0;
    for (int i = 0; i < m; ++i)
      if (mask >> i & 1u) ++bits;
    double sign = bits % 2 == 0 ? 1.0 : -1.0;
    for (int xpow = 0; xpow <= d; ++xpow) {
      std::size_t f = static_cast<std::size_t>(xpow);
      for (int i = 0; i < m; ++i) {
        int zdeg = (mask >> i & 1u) ? 1 : 0;
        f = f * static_cast<std::size_t>(nn) + static_cast<std::size_t>(zdeg);
      }
      mu[static_cast<std::size_t>(xpow)] += sign * data[f];
    }
  }
  // Reindex: out[k] = coefficient of x^{d-k}.
  std::vector<double> out(static_cast<std::size_t>(d) + 1, 0.0);
  for (int k = 0; k <= d; ++k)
    out[static_cast<std::size_t>(k)] = mu[static_cast<std::size_t>(d - k)];
  return out;
}

}  // namespace cdpp::mixed
