#include "cdpp/matroid.hpp"

namespace cdpp::matroid {

TUMatrix make_tu(const Eigen::MatrixXi& a) {
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      require(a(i, j) >= -1 && a(i, j) <= 1, ErrorCode::ParseError,
              "TU representations have entries in {-1,0,1}");
  const int r = static_cast<int>(a.cols());
  if (r > 0)
    require(integer_rank(a) == r, ErrorCode::RankDeficient,
            "representation does not have full column rank");
  return TUMatrix{a};
}

bool spot_check_unimodular(const Eigen::MatrixXi& a, std::uint64_t seed,
                           int trials, int max_size) {
  const int m = static_cast<int>(a.rows());
  const int r = static_cast<int>(a.cols());
  if (m == 0 || r == 0) return true;
  std::mt19937_64 rng(seed);
  int limit = std::min({max_size, m, r});
  for (int t = 0; t < trials; ++t) {
    int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(limit));
    // sample k distinct rows and columns
    auto pick = [&](int total, int count) {
      std::vector<int> idx(static_cast<std::size_t>(total));
      for (int i = 0; i < total; ++i) idx[static_cast<std::size_t>(i)] = i;
      for (int i = 0; i < count; ++i) {
        int j = i + static_cast<int>(rng() % static_cast<std::uint64_t>(total - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
      }
      idx.resize(static_cast<std::size_t>(count));
      return idx;
    };
    auto rows = pick(m, k);
    auto cols = pick(r, k);
    QMatrix sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        sub(i, j) = a(rows[static_cast<std::size_t>(i)],
                      cols[static_cast<std::size_t>(j)]);
    Rational det = det_rational(sub);
    if (det != 0 && det != 1 && det != -1) return false;
  }
  return true;
}

TUMatrix graphic_representation(const Graph& g) {
  require(is_connected(g), ErrorCode::Disconnected,
          "graph must be connected for spanning-tree operations");
  for (const auto& [u, v] : g.edges)
    require(u != v, ErrorCode::ParseError, "self-loops are not supported");
  const int m = g.edge_count();
  const int r = g.n - 1;
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(m, std::max(r, 0));
  for (int e = 0; e < m; ++e) {
    auto [u, v] = g.edges[static_cast<std::size_t>(e)];
    if (u < r) a(e, u) = 1;
    if (v < r) a(e, v) = -1;
  }
  return TUMatrix{a};
}

TUMatrix reduce_to_basis_columns(const Eigen::MatrixXi& a) {
  const int m = static_cast<int>(a.rows());
  const int d = static_cast<int>(a.cols());
  // Greedy left-to-right column selection by exact rank.
  std::vector<int> keep;
  for (int j = 0; j < d; ++j) {
    Eigen::MatrixXi candidate(m, static_cast<int>(keep.size()) + 1);
    for (std::size_t t = 0; t < keep.size(); ++t)
      candidate.col(static_cast<int>(t)) = a.col(keep[t]);
    candidate.col(static_cast<int>(keep.size())) = a.col(j);
    if (integer_rank(candidate) == static_cast<int>(keep.size()) + 1)
      keep.push_back(j);
  }
  Eigen::MatrixXi reduced(m, static_cast<int>(keep.size()));
  for (std::size_t t = 0; t < keep.size(); ++t)
    reduced.col(static_cast<int>(t)) = a.col(keep[t]);
  return make_tu(reduced);
}

Integer count_bases(const TUMatrix& a) {
  const int r = a.rank();
  if (r == 0) return Integer(1);
  QMatrix gram(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      long long acc = 0;
      for (int e = 0; e < a.ground_size(); ++e)
        acc += static_cast<long long>(a.a(e, i)) * a.a(e, j);
      gram(i, j) = Rational(Integer(static_cast<long>(acc)));
    }
  Rational det = det_rational(gram);
  return det.get_num();
}

namespace {

Integer rounded_budget_count(const TUMatrix& a, std::span<const long long> c,
                             const counting::IntSet& k,
                             const MatroidOptions& opts) {
  long long degree = 0;
  for (long long v : c) degree += std::llabs(v);
  bool has_negative = false;
  for (long long v : c) has_negative |= v < 0;
  degree += has_negative ? degree : 0;
  require(degree <= opts.degree_budget, ErrorCode::GridTooLarge,
          "interpolation degree exceeds the configured budget");
  if (opts.backend == Backend::Exact) {
    auto oracle = genpoly::matroid_oracle<Rational>(a.a);
    auto mass = counting::set_count(oracle, c, k, opts.count);
    return interp::round_to_integer(mass.value);
  }
  auto oracle = genpoly::matroid_oracle<Complex>(a.a);
  auto mass = counting::set_count(oracle, c, k, opts.count);
  return interp::round_to_integer(mass.value);
}

}  // namespace

Integer count_bases_budgeted(const TUMatrix& a, std::span<const long long> c,
                             long long C, const MatroidOptions& opts) {
  return rounded_budget_count(a, c, counting::IntSet::at_most(C), opts);
}

Integer count_bases_exact_cost(const TUMatrix& a, std::span<const long long> c,
                               long long C, const MatroidOptions& opts) {
  return rounded_budget_count(a, c, counting::IntSet::singleton(C), opts);
}

std::vector<int> sample_basis_budgeted(const TUMatrix& a,
                                       std::span<const long long> c, long long C,
                                       std::uint64_t seed,
                                       const MatroidOptions& opts) {
  counting::BudgetConstraint budget;
  budget.c.assign(c.begin(), c.end());
  budget.C = C;
  auto fam = counting::to_linear(budget);
  if (opts.backend == Backend::Exact) {
    auto oracle = genpoly::matroid_oracle<Rational>(a.a);
    return sampling::sample(oracle, fam, seed, opts.count).subset;
  }
  auto oracle = genpoly::matroid_oracle<Complex>(a.a);
  return sampling::sample(oracle, fam, seed, opts.count).subset;
}

PMReductionInstance pm_to_st_instance(const Graph& g, const MatroidOptions&) {
  require(g.n >= 2, ErrorCode::ParseError, "need at least two vertices");
  require(g.n % 2 == 0, ErrorCode::OddVertexCount,
          "perfect matchings need an even vertex count");
  for (const auto& [u, v] : g.edges)
    require(u != v, ErrorCode::ParseError, "self-loops are not supported");

  PMReductionInstance inst;
  inst.gprime.n = g.n;
  inst.gprime.edges = g.edges;
  for (int u = 0; u < g.n; ++u)
    for (int v = u + 1; v < g.n; ++v) inst.gprime.edges.emplace_back(u, v);

  const long long mprime = inst.gprime.edge_count();
  const long long b = mprime + 1;
  inst.base = b;

  // costs b^{i+1} + b^{j+1} for original edges, 0 for the added clique
  long long degree_sum = 0;
  Integer c_target(0);
  std::vector<Integer> powers(static_cast<std::size_t>(g.n) + 1);
  Integer p(1);
  for (int i = 1; i <= g.n; ++i) {
    p *= static_cast<long>(b);
    powers[static_cast<std::size_t>(i)] = p;
    c_target += p;
  }
  require(c_target.fits_slong_p(), ErrorCode::GridTooLarge,
          "reduction costs overflow the supported range");
  inst.target_cost = c_target.get_si();
  inst.gprime.costs.assign(inst.gprime.edges.size(), 0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    auto [u, v] = g.edges[e];
    Integer cost = powers[static_cast<std::size_t>(u) + 1] +
                   powers[static_cast<std::size_t>(v) + 1];
    require(cost.fits_slong_p(), ErrorCode::GridTooLarge,
            "reduction costs overflow the supported range");
    inst.gprime.costs[e] = cost.get_si();
    degree_sum += inst.gprime.costs[e];
  }
  (void)degree_sum;  // the interpolation budget is enforced where it is spent

  const long long half = g.n / 2;
  inst.alpha_inv = rational_pow(Rational(4), static_cast<long>(half - 1)) *
                   rational_pow(Rational(static_cast<long>(half)), static_cast<long>(half - 2));
  return inst;
}

Integer count_pm_via_reduction(const Graph& g, const MatroidOptions& opts) {
  PMReductionInstance inst = pm_to_st_instance(g, opts);
  TUMatrix rep = graphic_representation(inst.gprime);
  Integer st_c = count_bases_exact_cost(
      rep, std::span<const long long>(inst.gprime.costs), inst.target_cost,
      opts);
  Rational pm = Rational(st_c) / inst.alpha_inv;
  pm.canonicalize();
  require(pm.get_den() == 1, ErrorCode::NumericalResolutionExceeded,
          "spanning-tree count is not a multiple of alpha_inv");
  return pm.get_num();
}

}  // namespace cdpp::matroid
