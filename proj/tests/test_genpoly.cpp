#include <doctest.h>

#include "test_util.hpp"

using namespace cdpp;
using namespace cdpp::genpoly;

namespace {

std::vector<Complex> cpoint(std::initializer_list<double> vals) {
  std::vector<Complex> p;
  for (double v : vals) p.emplace_back(v, 0.0);
  return p;
}

double eval_real(const GenPolyOracle<Complex>& g, std::initializer_list<double> vals) {
  auto p = cpoint(vals);
  return evaluate(g, std::span<const Complex>(p)).real();
}

}  // namespace

TEST_CASE("cholesky_factor identity and 1x1") {
  Kernel id{Eigen::MatrixXd::Identity(2, 2)};
  auto v = cholesky_factor(id);
  CHECK(v.rank() == 2);
  CHECK((v.entries * v.entries.transpose() - id.entries).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0).epsilon(1e-14));

  Kernel four{Eigen::MatrixXd::Constant(1, 1, 4.0)};
  auto v4 = cholesky_factor(four);
  CHECK(v4.entries(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("cholesky_factor reconstructs a general kernel") {
  Eigen::MatrixXd l(2, 2);
  l << 2, 1, 1, 1;
  auto v = cholesky_factor(Kernel{l});
  CHECK((v.entries * v.entries.transpose() - l).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cholesky_factor rejects indefinite kernels and drops rank") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;  // eigenvalues 3, -1
  CHECK_THROWS_WITH_AS(cholesky_factor(Kernel{bad}), doctest::Contains("pivot"),
                       Error);

  // rank-1 kernel: zero pivot column dropped
  Eigen::MatrixXd rank1(3, 3);
  Eigen::VectorXd u(3);
  u << 1, 2, 3;
  rank1 = u * u.transpose();
  auto v = cholesky_factor(Kernel{rank1});
  CHECK(v.rank() == 1);
  CHECK((v.entries * v.entries.transpose() - rank1).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dpp_oracle on identity kernels") {
  auto v = cholesky_factor(Kernel{Eigen::MatrixXd::Identity(2, 2)});
  auto g = dpp_oracle(v);
  CHECK(eval_real(g, {1, 1}) == doctest::Approx(4.0));
  CHECK(eval_real(g, {0, 0}) == doctest::Approx(1.0));
  CHECK(eval_real(g, {3, 0}) == doctest::Approx(4.0));  // 1 + 3*mu({1})
}

TEST_CASE("dpp_oracle matches the brute-force generating polynomial") {
  Eigen::MatrixXd l(2, 2);
  l << 2, 1, 1, 1;
  auto g = dpp_oracle(cholesky_factor(Kernel{l}));
  // brute force: 1 + 2 + 1 + det = 5 at the all-ones point
  CHECK(eval_real(g, {1, 1}) == doctest::Approx(5.0));
}

TEST_CASE("dpp oracles: exact kernel form agrees with the float factor form") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    int m = 2 + static_cast<int>(rng() % 4);
    QMatrix lq = testutil::random_int_psd(rng, m);
    Eigen::MatrixXd l = lq.to_double();
    auto gf = dpp_oracle(cholesky_factor(Kernel{l}));
    auto gq = dpp_oracle_exact(lq);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int t = 0; t < 10; ++t) {
      std::vector<Complex> pf;
      std::vector<Rational> pq;
      for (int i = 0; i < m; ++i) {
        int num = static_cast<int>(rng() % 9) - 4;
        pf.emplace_back(num / 2.0, 0.0);
        Rational q(num, 2);
        q.canonicalize();
        pq.push_back(q);
      }
      double want = evaluate(gq, std::span<const Rational>(pq)).get_d();
      double got = evaluate(gf, std::span<const Complex>(pf)).real();
      CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("matroid_oracle on the triangle") {
  Eigen::MatrixXi a(3, 2);
  a << 1, -1, 0, 1, 1, 0;
  auto g = matroid_oracle<Complex>(a);
  CHECK(eval_real(g, {1, 1, 1}) == doctest::Approx(3.0));  // Cayley 3^1
  CHECK(eval_real(g, {1, 1, 0}) == doctest::Approx(1.0));
  CHECK(eval_real(g, {0, 0, 0}) == doctest::Approx(0.0));

  auto gq = matroid_oracle<Rational>(a);
  std::vector<Rational> ones(3, Rational(1));
  CHECK(evaluate(gq, std::span<const Rational>(ones)) == 3);
}

TEST_CASE("matroid_oracle rejects rank-deficient representations") {
  Eigen::MatrixXi a(2, 2);
  a << 1, 1, 1, 1;
  CHECK_THROWS_AS(matroid_oracle<Complex>(a), Error);
}

TEST_CASE("explicit_oracle basics") {
  ExplicitSetFunction ones;
  ones.m = 2;
  ones.table = {1, 1, 1, 1};
  auto g = explicit_oracle<Complex>(ones);
  CHECK(eval_real(g, {1, 1}) == doctest::Approx(4.0));

  ExplicitSetFunction ind;  // indicator of {1}
  ind.m = 2;
  ind.table = {0, 1, 0, 0};
  auto gi = explicit_oracle<Rational>(ind);
  std::vector<Rational> p{Rational(7), Rational(113)};
  CHECK(evaluate(gi, std::span<const Rational>(p)) == 7);
}

TEST_CASE("explicit minor table agrees with the dpp oracle at random points") {
  std::mt19937_64 rng(11);
  Eigen::MatrixXd l = testutil::random_psd(rng, 3);
  auto table = testutil::minor_table(l);
  auto ge = explicit_oracle<Complex>(table);
  auto gd = dpp_oracle(cholesky_factor(Kernel{l}));
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  for (int t = 0; t < 10; ++t) {
    std::vector<Complex> p;
    for (int i = 0; i < 3; ++i) p.emplace_back(uni(rng), 0.0);
    double a = evaluate(ge, std::span<const Complex>(p)).real();
    double b = evaluate(gd, std::span<const Complex>(p)).real();
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("transform: zeroing, cost substitution, tagging") {
  auto g = dpp_oracle(cholesky_factor(Kernel{Eigen::MatrixXd::Identity(2, 2)}));

  TransformProgram zero2;
  zero2.source_arity = 2;
  zero2.zeroed = {1};
  auto gz = transform(g, zero2);
  CHECK(gz.arity == 1);
  CHECK(eval_real(gz, {1}) == doctest::Approx(2.0));  // subsets avoiding 2

  TransformProgram costs;
  costs.source_arity = 2;
  costs.exponents = {{1}, {2}};
  auto gc = transform(g, costs);
  CHECK(gc.arity == 1);
  CHECK(eval_real(gc, {2}) == doctest::Approx(15.0));  // 1+2+4+8

  TransformProgram tag;
  tag.source_arity = 2;
  tag.tagged = {0};
  auto gt = transform(g, tag);
  CHECK(gt.arity == 3);
  CHECK(eval_real(gt, {0, 1, 1}) == doctest::Approx(2.0));  // y=0 kills {1}
}

TEST_CASE("transform rejects clashing programs") {
  auto g = dpp_oracle(cholesky_factor(Kernel{Eigen::MatrixXd::Identity(2, 2)}));
  TransformProgram clash;
  clash.source_arity = 2;
  clash.zeroed = {0};
  clash.tagged = {0};
  CHECK_THROWS_AS(transform(g, clash), Error);

  TransformProgram sub_clash;
  sub_clash.source_arity = 2;
  sub_clash.zeroed = {0};
  sub_clash.exponents = {{1}, {1}};
  CHECK_THROWS_AS(transform(g, sub_clash), Error);
}

TEST_CASE("transform then evaluate equals hand substitution on random programs") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 2 + static_cast<int>(rng() % 4);
    Eigen::MatrixXd l = testutil::random_psd(rng, m);
    auto g = dpp_oracle(cholesky_factor(Kernel{l}));
    int p = 1 + static_cast<int>(rng() % 2);
    TransformProgram prog;
    prog.source_arity = m;
    prog.exponents.assign(static_cast<std::size_t>(m),
                          std::vector<int>(static_cast<std::size_t>(p), 0));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < p; ++j)
        prog.exponents[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            static_cast<int>(rng() % 5) - 2;
    prog.axis_shifts.assign(static_cast<std::size_t>(p), 0);
    auto h = transform(g, prog);

    std::uniform_real_distribution<double> uni(0.4, 1.6);
    std::vector<Complex> aux;
    for (int j = 0; j < p; ++j) aux.emplace_back(uni(rng), 0.0);
    std::vector<Complex> x(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      Complex v(1.0, 0.0);
      for (int j = 0; j < p; ++j)
        v *= scalar_pow(aux[static_cast<std::size_t>(j)],
                        prog.exponents[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
      x[static_cast<std::size_t>(i)] = v;
    }
    double direct = evaluate(g, std::span<const Complex>(x)).real();
    double wrapped = evaluate(h, std::span<const Complex>(aux)).real();
    CHECK(std::abs(direct - wrapped) <= 1e-9 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("every backend matches brute force at random points") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    int m = 1 + static_cast<int>(rng() % 6);
    QMatrix lq = testutil::random_int_psd(rng, m);
    Eigen::MatrixXd l = lq.to_double();
    auto table = testutil::minor_table(l);
    auto gf = dpp_oracle(cholesky_factor(Kernel{l}));
    auto gq = dpp_oracle_exact(lq);
    auto ge = explicit_oracle<Rational>(table);
    std::uniform_real_distribution<double> uni(-1.0, 1.5);
    for (int t = 0; t < 20; ++t) {
      std::vector<Rational> pq;
      std::vector<Complex> pf;
      for (int i = 0; i < m; ++i) {
        int num = static_cast<int>(rng() % 7) - 3;
        Rational q(num, 2);
        q.canonicalize();
        pq.push_back(q);
        pf.emplace_back(num / 2.0, 0.0);
      }
      // brute-force sum over subsets
      Rational want(0);
      for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        Rational term = table.table[mask];
        for (int i = 0; i < m; ++i)
          if (mask >> i & 1u) term *= pq[static_cast<std::size_t>(i)];
        want += term;
      }
      CHECK(evaluate(gq, std::span<const Rational>(pq)) == want);
      CHECK(evaluate(ge, std::span<const Rational>(pq)) == want);
      double got = evaluate(gf, std::span<const Complex>(pf)).real();
      CHECK(std::abs(got - want.get_d()) <=
            1e-9 * std::max(1.0, std::abs(want.get_d())));
    }
  }
}

TEST_CASE("dpp_oracle at the all-ones point equals det(L + I)") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 1 + static_cast<int>(rng() % 7);
    Eigen::MatrixXd l = testutil::random_psd(rng, m);
    auto g = dpp_oracle(cholesky_factor(Kernel{l}));
    std::vector<Complex> ones(static_cast<std::size_t>(m), Complex(1, 0));
    double want = (l + Eigen::MatrixXd::Identity(m, m)).determinant();
    double got = evaluate(g, std::span<const Complex>(ones)).real();
    CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("evaluation at the all-zeros point equals the empty-set mass") {
  std::mt19937_64 rng(41);
  Eigen::MatrixXd l = testutil::random_psd(rng, 4);
  auto g = dpp_oracle(cholesky_factor(Kernel{l}));
  CHECK(eval_real(g, {0, 0, 0, 0}) == doctest::Approx(1.0));

  Eigen::MatrixXi a(3, 2);
  a << 1, -1, 0, 1, 1, 0;
  auto gm = matroid_oracle<Complex>(a);
  CHECK(eval_real(gm, {0, 0, 0}) == doctest::Approx(0.0));
}

TEST_CASE("evaluate rejects arity mismatches") {
  auto g = dpp_oracle(cholesky_factor(Kernel{Eigen::MatrixXd::Identity(2, 2)}));
  std::vector<Complex> p{Complex(1, 0)};
  CHECK_THROWS_AS(evaluate(g, std::span<const Complex>(p)), Error);
}
