#include <doctest.h>

#include "test_util.hpp"

using namespace cdpp;
using namespace cdpp::bruteforce;

TEST_CASE("constrained mass on reference kernels") {
  counting::BudgetConstraint b;
  b.c = {1, 1, 1};
  b.C = 2;
  Eigen::MatrixXd id3 = Eigen::MatrixXd::Identity(3, 3);
  CHECK(constrained_mass_bruteforce(id3, counting::FamilySpec{b}) == 7);

  Eigen::MatrixXd l(2, 2);
  l << 2, 1, 1, 1;
  CHECK(constrained_mass_bruteforce(l, std::monostate{}) == 5);
}

TEST_CASE("triangle matroid with budget") {
  Eigen::MatrixXi a(3, 2);
  a << 1, -1, 0, 1, 1, 0;
  counting::BudgetConstraint b;
  b.c = {1, 2, 3};
  b.C = 4;
  CHECK(constrained_mass_bruteforce(a, counting::FamilySpec{b}) == 2);
}

TEST_CASE("exact distributions normalize and reject null families") {
  Eigen::MatrixXd l = Eigen::Vector2d(2, 1).asDiagonal();
  auto table = exact_distribution(l, std::monostate{});
  CHECK(table.probs.at(0b00) == Rational(1, 6));
  CHECK(table.probs.at(0b01) == Rational(1, 3));
  CHECK(table.probs.at(0b10) == Rational(1, 6));
  CHECK(table.probs.at(0b11) == Rational(1, 3));
  Rational sum(0);
  for (const auto& [mask, p] : table.probs) sum += p;
  CHECK(sum == 1);

  counting::BudgetConstraint infeasible;
  infeasible.c = {1, 1};
  infeasible.C = -5;
  CHECK_THROWS_AS(exact_distribution(l, counting::FamilySpec{infeasible}), Error);
}

TEST_CASE("distribution masses times total equal the per-subset masses") {
  std::mt19937_64 rng(601);
  QMatrix lq = testutil::random_int_psd(rng, 4);
  auto table = exact_distribution(lq, std::monostate{});
  for (const auto& [mask, p] : table.probs) {
    counting::LinearFamily pin;
    pin.arity = 4;
    std::vector<long long> ind(4, 0);
    int size = 0;
    for (int i = 0; i < 4; ++i)
      if (mask >> i & 1u) {
        ind[static_cast<std::size_t>(i)] = 1;
        ++size;
      }
    pin.constraints.push_back({ind, counting::IntSet::singleton(size)});
    std::vector<long long> anti(4, 0);
    for (int i = 0; i < 4; ++i)
      if (!(mask >> i & 1u)) anti[static_cast<std::size_t>(i)] = 1;
    pin.constraints.push_back({anti, counting::IntSet::singleton(0)});
    Rational mass = constrained_mass_bruteforce(lq, counting::FamilySpec{pin});
    CHECK(p * table.total_mass == mass);
  }
}

TEST_CASE("uniform family yields the uniform table") {
  genpoly::ExplicitSetFunction f;
  f.m = 3;
  f.table.assign(8, Rational(1));
  auto table = exact_distribution(f, std::monostate{});
  for (const auto& [mask, p] : table.probs) CHECK(p == Rational(1, 8));
}

TEST_CASE("graph structure enumeration") {
  auto trees = enumerate_graph_structures(complete_graph(3),
                                          GraphKind::SpanningTrees);
  CHECK(trees.count == 3);

  auto pm_c4 = enumerate_graph_structures(cycle_graph(4),
                                          GraphKind::PerfectMatchings);
  CHECK(pm_c4.count == 2);

  auto pm_k4 = enumerate_graph_structures(complete_graph(4),
                                          GraphKind::PerfectMatchings);
  CHECK(pm_k4.count == 3);

  Graph costed = complete_graph(3);
  costed.costs = {1, 2, 3};
  CostFilter at_most{CostFilter::Mode::AtMost, 4};
  CHECK(enumerate_graph_structures(costed, GraphKind::SpanningTrees, at_most)
            .count == 2);
  CostFilter exact{CostFilter::Mode::Exact, 5};
  CHECK(enumerate_graph_structures(costed, GraphKind::SpanningTrees, exact)
            .count == 1);
}

TEST_CASE("size guards") {
  genpoly::ExplicitSetFunction big;
  big.m = 21;
  CHECK_THROWS_AS(constrained_mass_bruteforce(big, std::monostate{}),
                  std::exception);
  Graph wide = complete_graph(7);  // 21 edges
  CHECK_THROWS_AS(enumerate_graph_structures(wide, GraphKind::SpanningTrees),
                  Error);
  Graph crowd = complete_graph(13);
  CHECK_THROWS_AS(enumerate_graph_structures(crowd, GraphKind::PerfectMatchings),
                  Error);
}
