#include <doctest.h>

#include "cdpp/sampling.hpp"
#include "test_util.hpp"

using namespace cdpp;
using namespace cdpp::sampling;
using counting::IntSet;
using counting::LinearFamily;

namespace {

LinearFamily unconstrained(int m) {
  LinearFamily fam;
  fam.arity = m;
  return fam;
}

genpoly::GenPolyOracle<Rational> exact_oracle(const QMatrix& l) {
  return genpoly::dpp_oracle_exact(l);
}

QMatrix diag_kernel(std::initializer_list<long> diag) {
  int m = static_cast<int>(diag.size());
  QMatrix l(m, m);
  int i = 0;
  for (long v : diag) {
    l(i, i) = v;
    ++i;
  }
  return l;
}

}  // namespace

TEST_CASE("conditional inclusion probabilities on diag(2,1)") {
  auto g = exact_oracle(diag_kernel({2, 1}));
  auto fam = unconstrained(2);
  CHECK(conditional_inclusion_prob(g, fam, 0, 0, 0) == Rational(2, 3));
  CHECK(conditional_inclusion_prob(g, fam, 0, 1ull << 0, 0) == 0);  // e in N
  CHECK(conditional_inclusion_prob(g, fam, 1ull << 0, 0, 0) == 1);  // e in Y
}

TEST_CASE("sampler on a single feasible set always returns it") {
  auto g = exact_oracle(diag_kernel({1, 1, 1}));
  LinearFamily fam;
  fam.arity = 3;
  fam.constraints.push_back({{1, 0, 0}, IntSet::singleton(1)});
  fam.constraints.push_back({{0, 1, 0}, IntSet::singleton(0)});
  fam.constraints.push_back({{0, 0, 1}, IntSet::singleton(1)});
  Sampler<Rational> s(g, fam);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto out = s.draw(seed);
    CHECK(out.mask == 0b101ull);
  }
}

TEST_CASE("null mass raises NullMass") {
  auto g = exact_oracle(diag_kernel({1, 1}));
  LinearFamily fam;
  fam.arity = 2;
  fam.constraints.push_back({{1, 1}, IntSet::singleton(7)});  // infeasible
  Sampler<Rational> s(g, fam);
  CHECK_THROWS_AS(s.draw(1), Error);
}

TEST_CASE("chain products equal brute-force probabilities exactly") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 6; ++trial) {
    int m = 1 + static_cast<int>(rng() % 5);
    QMatrix lq = testutil::random_int_psd(rng, m);
    counting::FamilySpec spec = std::monostate{};
    if (trial % 3 == 1) {
      counting::BudgetConstraint b;
      b.c = testutil::random_costs(rng, m, 6, false);
      long long s = 0;
      for (long long v : b.c) s += v;
      b.C = s / 2;
      spec = b;
    } else if (trial % 3 == 2 && m >= 2) {
      counting::PartitionFamily p;
      p.arity = m;
      std::vector<int> first, second;
      for (int i = 0; i < m; ++i) (i % 2 ? second : first).push_back(i);
      if (second.empty()) second.push_back(first.back()), first.pop_back();
      p.parts = {first, second};
      p.quotas = {1, static_cast<int>(second.size()) > 0 ? 1 : 0};
      spec = p;
    }
    bruteforce::DistributionTable table;
    try {
      table = bruteforce::exact_distribution(lq, spec);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NullMass);
      continue;
    }
    auto fam = counting::to_linear(spec, m);
    Sampler<Rational> sampler(exact_oracle(lq), fam);
    // walk every feasible subset's decision path and compare the product
    for (const auto& [mask, prob] : table.probs) {
      std::uint64_t Y = 0, N = 0;
      Rational product(1);
      for (int e = 0; e < m; ++e) {
        Rational p = sampler.inclusion_prob(Y, N, e);
        if (mask >> e & 1u) {
          product *= p;
          Y |= 1ull << e;
        } else {
          product *= 1 - p;
          N |= 1ull << e;
        }
      }
      CHECK(product == prob);
    }
  }
}

TEST_CASE("empirical distribution is close to the exact one") {
  // diag(2,1): P({1,2}) = 1/3, P({1}) = 1/3, P({2}) = 1/6, P(empty) = 1/6
  auto g = exact_oracle(diag_kernel({2, 1}));
  Sampler<Rational> s(g, unconstrained(2));
  const int draws = 20000;
  std::vector<int> counts(4, 0);
  for (int i = 0; i < draws; ++i)
    ++counts[static_cast<std::size_t>(s.draw(mix_seed(99, static_cast<std::uint64_t>(i))).mask)];
  auto freq = [&](int mask) { return counts[static_cast<std::size_t>(mask)] / double(draws); };
  CHECK(freq(0b00) == doctest::Approx(1.0 / 6).epsilon(0.15));
  CHECK(freq(0b01) == doctest::Approx(1.0 / 3).epsilon(0.15));
  CHECK(freq(0b10) == doctest::Approx(1.0 / 6).epsilon(0.15));
  CHECK(freq(0b11) == doctest::Approx(1.0 / 3).epsilon(0.15));
}

TEST_CASE("partition-constrained draws are uniform over the four pairs") {
  QMatrix l = diag_kernel({1, 1, 1, 1});
  auto g = exact_oracle(l);
  counting::PartitionFamily p;
  p.arity = 4;
  p.parts = {{0, 1}, {2, 3}};
  p.quotas = {1, 1};
  Sampler<Rational> s(g, counting::to_linear(p));
  const int draws = 20000;
  std::map<std::uint64_t, int> counts;
  for (int i = 0; i < draws; ++i) {
    auto out = s.draw(mix_seed(7, static_cast<std::uint64_t>(i)));
    CHECK(out.subset.size() == 2);
    ++counts[out.mask];
  }
  CHECK(counts.size() == 4);
  // each frequency within 3 sigma of 0.25: sigma = sqrt(p(1-p)/n) ~ 0.00306
  for (const auto& [mask, cnt] : counts)
    CHECK(std::abs(cnt / double(draws) - 0.25) < 3 * 0.00307);
}

TEST_CASE("float sampler matches the exact sampler decision for decision") {
  std::mt19937_64 rng(21);
  Eigen::MatrixXd ld = testutil::random_psd(rng, 5);
  QMatrix lq = QMatrix::from_double(ld);
  auto gf = genpoly::dpp_oracle(
      genpoly::cholesky_factor(genpoly::Kernel{ld}));
  auto gq = exact_oracle(lq);
  Sampler<Complex> sf(gf, unconstrained(5));
  Sampler<Rational> sq(gq, unconstrained(5));
  for (std::uint64_t seed = 1; seed <= 40; ++seed)
    CHECK(sf.draw(seed).mask == sq.draw(seed).mask);
}

TEST_CASE("mass estimator reaches the (1+2eps) window on small instances") {
  auto g = exact_oracle(diag_kernel({1, 1, 1}));
  MassEstimator<Rational> est(g, unconstrained(3));
  int ok = 0;
  const double eps = 0.1;
  for (int run = 0; run < 20; ++run) {
    auto mass = est.estimate(eps, mix_seed(1234, static_cast<std::uint64_t>(run)));
    double x = mass.value.get_d();
    if (x / 8.0 <= 1 + 2 * eps && 8.0 / x <= 1 + 2 * eps) ++ok;
  }
  CHECK(ok >= 18);
}

TEST_CASE("mass estimator handles diag(2,1) and a partition family") {
  auto g = exact_oracle(diag_kernel({2, 1}));
  MassEstimator<Rational> est(g, unconstrained(2));
  auto mass = est.estimate(0.1, 77);
  CHECK(mass.value.get_d() == doctest::Approx(6.0).epsilon(0.2));

  QMatrix l4 = diag_kernel({1, 1, 1, 1});
  counting::PartitionFamily p;
  p.arity = 4;
  p.parts = {{0, 1}, {2, 3}};
  p.quotas = {1, 1};
  MassEstimator<Rational> est4(exact_oracle(l4), counting::to_linear(p));
  auto mass4 = est4.estimate(0.1, 99);
  CHECK(mass4.value.get_d() == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("one-shot estimator wrapper and null-mass rejection") {
  auto g = exact_oracle(diag_kernel({1, 1, 1}));
  auto mass = estimate_mass_via_sampler(g, unconstrained(3), 0.2, 11);
  CHECK(mass.value.get_d() == doctest::Approx(8.0).epsilon(0.4));

  LinearFamily infeasible;
  infeasible.arity = 3;
  infeasible.constraints.push_back({{1, 1, 1}, IntSet::singleton(9)});
  CHECK_THROWS_AS(estimate_mass_via_sampler(g, infeasible, 0.2, 11), Error);
}

TEST_CASE("sampled chains report probabilities in [0,1]") {
  std::mt19937_64 rng(31);
  Eigen::MatrixXd ld = testutil::random_psd(rng, 6);
  auto gf = genpoly::dpp_oracle(genpoly::cholesky_factor(genpoly::Kernel{ld}));
  Sampler<Complex> s(gf, unconstrained(6));
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto out = s.draw(seed);
    for (double p : out.chain_probs) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}
