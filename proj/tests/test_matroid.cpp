#include <doctest.h>

#include "cdpp/matroid.hpp"
#include "test_util.hpp"

using namespace cdpp;
using namespace cdpp::matroid;

namespace {

Graph k3() { return complete_graph(3); }

}  // namespace

TEST_CASE("graphic representations of small graphs") {
  auto rep = graphic_representation(k3());
  CHECK(rep.ground_size() == 3);
  CHECK(rep.rank() == 2);
  CHECK(count_bases(rep) == 3);  // Cayley 3^1

  Graph single;
  single.n = 2;
  single.edges = {{0, 1}};
  auto rep1 = graphic_representation(single);
  CHECK(rep1.rank() == 1);
  CHECK(std::abs(rep1.a(0, 0)) == 1);
  CHECK(count_bases(rep1) == 1);

  CHECK(count_bases(graphic_representation(complete_graph(4))) == 16);
}

TEST_CASE("disconnected graphs are rejected") {
  Graph g;
  g.n = 4;
  g.edges = {{0, 1}, {2, 3}};
  CHECK_THROWS_AS(graphic_representation(g), Error);
}

TEST_CASE("reduce_to_basis_columns drops dependent columns") {
  Eigen::MatrixXi full(3, 2);
  full << 1, -1, 0, 1, 1, 0;
  CHECK(reduce_to_basis_columns(full).rank() == 2);

  Eigen::MatrixXi padded(3, 3);
  padded << 1, -1, 0, 0, 1, 0, 1, 0, 0;  // appended zero column
  auto reduced = reduce_to_basis_columns(padded);
  CHECK(reduced.rank() == 2);
  CHECK(count_bases(reduced) == 3);

  Eigen::MatrixXi dup(3, 3);
  dup << 1, -1, -1, 0, 1, 1, 1, 0, 0;  // duplicated column
  auto red2 = reduce_to_basis_columns(dup);
  CHECK(red2.rank() == 2);
  CHECK(count_bases(red2) == 3);
}

TEST_CASE("spot check total unimodularity of incidence matrices") {
  auto rep = graphic_representation(complete_graph(5));
  CHECK(spot_check_unimodular(rep.a, 12345));
}

TEST_CASE("budgeted basis counts on the triangle") {
  auto rep = graphic_representation(k3());
  std::vector<long long> c{1, 2, 3};
  CHECK(count_bases_budgeted(rep, c, 4) == 2);  // tree costs 3, 4, 5
  CHECK(count_bases_budgeted(rep, c, 2) == 0);
  std::vector<long long> ones{1, 1, 1};
  MatroidOptions exact_opts;
  exact_opts.backend = Backend::Exact;
  CHECK(count_bases_budgeted(rep, ones, 3, exact_opts) == 3);

  auto k4 = graphic_representation(complete_graph(4));
  std::vector<long long> c4{1, 1, 1, 1, 1, 1};
  CHECK(count_bases_budgeted(k4, c4, 6) == 16);
}

TEST_CASE("budgeted counts match enumeration on random graphs") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 3 + static_cast<int>(rng() % 3);
    Graph g = complete_graph(n);
    // prune a few edges but keep it connected
    while (g.edge_count() > n + 2) {
      std::size_t e = rng() % g.edges.size();
      auto removed = g.edges[e];
      g.edges.erase(g.edges.begin() + static_cast<long>(e));
      if (!is_connected(g)) g.edges.push_back(removed);
    }
    g.costs.clear();
    for (int e = 0; e < g.edge_count(); ++e)
      g.costs.push_back(1 + static_cast<long long>(rng() % 4));
    long long total = 0;
    for (long long v : g.costs) total += v;
    long long C = total / 2;
    auto rep = graphic_representation(g);
    bruteforce::CostFilter filter{bruteforce::CostFilter::Mode::AtMost, C};
    auto want = bruteforce::enumerate_graph_structures(
        g, bruteforce::GraphKind::SpanningTrees, filter);
    CHECK(count_bases_budgeted(rep, g.costs, C) == want.count);
  }
}

TEST_CASE("basis counts agree with the matrix-tree theorem") {
  std::mt19937_64 rng(73);
  for (int n = 3; n <= 7; ++n) {
    Graph g = complete_graph(n);
    auto rep = graphic_representation(g);
    // Kirchhoff: delete one row/col of the Laplacian
    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (auto [u, v] : g.edges) {
      lap(u, u) += 1;
      lap(v, v) += 1;
      lap(u, v) -= 1;
      lap(v, u) -= 1;
    }
    double kirchhoff = lap.topLeftCorner(n - 1, n - 1).determinant();
    CHECK(count_bases(rep).get_d() == doctest::Approx(kirchhoff));
  }
}

TEST_CASE("sample_basis_budgeted is uniform over feasible trees") {
  auto rep = graphic_representation(k3());
  std::vector<long long> ones{1, 1, 1};
  std::map<std::vector<int>, int> counts;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i)
    ++counts[sample_basis_budgeted(rep, ones, 3,
                                   mix_seed(11, static_cast<std::uint64_t>(i)))];
  CHECK(counts.size() == 3);
  for (const auto& [tree, cnt] : counts)
    CHECK(std::abs(cnt / double(draws) - 1.0 / 3) < 0.012);  // ~3.6 sigma

  // budget C = 4 with costs (1,2,3): only {e0,e1} and {e0,e2} survive
  std::vector<long long> c{1, 2, 3};
  std::map<std::vector<int>, int> counts2;
  for (int i = 0; i < 4000; ++i)
    ++counts2[sample_basis_budgeted(rep, c, 4,
                                    mix_seed(13, static_cast<std::uint64_t>(i)))];
  CHECK(counts2.size() == 2);

  CHECK_THROWS_AS(sample_basis_budgeted(rep, c, 2, 1), Error);  // infeasible
}

TEST_CASE("pm_to_st_instance builds the documented instances") {
  Graph single;
  single.n = 2;
  single.edges = {{0, 1}};
  auto inst = pm_to_st_instance(single);
  CHECK(inst.base == 3);
  CHECK(inst.target_cost == 12);
  CHECK(inst.alpha_inv == 1);

  auto c4 = pm_to_st_instance(cycle_graph(4));
  CHECK(c4.base == 11);
  CHECK(c4.target_cost == 16104);
  CHECK(c4.gprime.edge_count() == 10);

  Graph odd = complete_graph(3);
  CHECK_THROWS_AS(pm_to_st_instance(odd), Error);
}

TEST_CASE("ST_C equals alpha_inv times PM on every small even graph") {
  std::vector<Graph> graphs;
  Graph single;
  single.n = 2;
  single.edges = {{0, 1}};
  graphs.push_back(single);
  graphs.push_back(cycle_graph(4));
  graphs.push_back(complete_graph(4));
  Graph path4;  // path on 4 vertices: exactly one perfect matching
  path4.n = 4;
  path4.edges = {{0, 1}, {1, 2}, {2, 3}};
  graphs.push_back(path4);
  Graph triple;  // three disjoint edges on 6 vertices: one perfect matching
  triple.n = 6;
  triple.edges = {{0, 1}, {2, 3}, {4, 5}};
  graphs.push_back(triple);
  for (const auto& g : graphs) {
    auto inst = pm_to_st_instance(g);
    bruteforce::CostFilter f{bruteforce::CostFilter::Mode::Exact,
                             inst.target_cost};
    auto st = bruteforce::enumerate_graph_structures(
        inst.gprime, bruteforce::GraphKind::SpanningTrees, f);
    auto pm = bruteforce::enumerate_graph_structures(
        g, bruteforce::GraphKind::PerfectMatchings);
    CHECK(Rational(st.count) == inst.alpha_inv * Rational(pm.count));
  }
}

TEST_CASE("count_pm_via_reduction on the three reference graphs") {
  Graph single;
  single.n = 2;
  single.edges = {{0, 1}};
  CHECK(count_pm_via_reduction(single) == 1);
  CHECK(count_pm_via_reduction(cycle_graph(4)) == 2);
  CHECK(count_pm_via_reduction(complete_graph(4)) == 3);
}
