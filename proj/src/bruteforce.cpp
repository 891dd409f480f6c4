#include "cdpp/bruteforce.hpp"

namespace cdpp::bruteforce {

namespace {

// Local rational determinant by plain fraction Gaussian elimination. The
// engine uses Bareiss; keeping a different algorithm here preserves the
// independence of the cross-checks.
Rational local_det(std::vector<Rational> a, int n) {
  if (n == 0) return Rational(1);
  auto at = [&](int i, int j) -> Rational& {
    return a[static_cast<std::size_t>(i) * n + j];
  };
  Rational det(1);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    for (int i = k; i < n; ++i)
      if (at(i, k) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return Rational(0);
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(at(piv, j), at(k, j));
      det = -det;
    }
    det *= at(k, k);
    for (int i = k + 1; i < n; ++i) {
      if (at(i, k) == 0) continue;
      Rational f = at(i, k) / at(k, k);
      for (int j = k; j < n; ++j) at(i, j) -= f * at(k, j);
    }
  }
  return det;
}

Rational principal_minor(const QMatrix& kernel, std::uint32_t mask, int m) {
  std::vector<int> idx;
  for (int i = 0; i < m; ++i)
    if (mask >> i & 1u) idx.push_back(i);
  const int k = static_cast<int>(idx.size());
  std::vector<Rational> sub(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      sub[static_cast<std::size_t>(i) * k + j] =
          kernel(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  return local_det(std::move(sub), k);
}

long long mask_cost(std::span<const long long> c, std::uint32_t mask) {
  long long s = 0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (mask >> i & 1u) s += c[i];
  return s;
}

template <class MassFn>
Rational sum_over_family(int m, const FamilySpec& fam, MassFn&& mass_of) {
  require(m <= 20, ErrorCode::TooLarge, "brute force supports m <= 20");
  Rational total(0);
  const std::uint32_t subsets = 1u << m;
  for (std::uint32_t mask = 0; mask < subsets; ++mask)
    if (family_contains(fam, mask, m)) total += mass_of(mask);
  return total;
}

template <class MassFn>
DistributionTable table_over_family(int m, const FamilySpec& fam,
                                    MassFn&& mass_of) {
  require(m <= 16, ErrorCode::TooLarge,
          "exact distributions support m <= 16");
  DistributionTable table;
  table.total_mass = 0;
  const std::uint32_t subsets = 1u << m;
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    if (!family_contains(fam, mask, m)) continue;
    Rational mass = mass_of(mask);
    if (mass == 0) continue;
    table.probs.emplace(mask, mass);
    table.total_mass += mass;
  }
  require(table.total_mass > 0, ErrorCode::NullMass,
          "family carries no mass");
  for (auto& [mask, p] : table.probs) p /= table.total_mass;
  return table;
}

Rational tu_mass(const Eigen::MatrixXi& tu, std::uint32_t mask) {
  const int m = static_cast<int>(tu.rows());
  const int r = static_cast<int>(tu.cols());
  std::vector<int> rows;
  for (int i = 0; i < m; ++i)
    if (mask >> i & 1u) rows.push_back(i);
  if (static_cast<int>(rows.size()) != r) return Rational(0);
  std::vector<Rational> sub(static_cast<std::size_t>(r) * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      sub[static_cast<std::size_t>(i) * r + j] =
          tu(rows[static_cast<std::size_t>(i)], j);
  return local_det(std::move(sub), r) == 0 ? Rational(0) : Rational(1);
}

}  // namespace

bool family_contains(const FamilySpec& fam, std::uint32_t mask, int m) {
  if (std::holds_alternative<std::monostate>(fam)) return true;
  if (const auto* b = std::get_if<counting::BudgetConstraint>(&fam))
    return mask_cost(b->c, mask) <= b->C;
  if (const auto* l = std::get_if<counting::LinearFamily>(&fam)) {
    for (const auto& con : l->constraints)
      if (!con.K.contains(mask_cost(con.c, mask))) return false;
    return true;
  }
  const auto& p = std::get<counting::PartitionFamily>(fam);
  for (std::size_t j = 0; j < p.parts.size(); ++j) {
    int count = 0;
    for (int i : p.parts[j])
      if (mask >> i & 1u) ++count;
    if (count != p.quotas[j]) return false;
  }
  return true;
}

Rational constrained_mass_bruteforce(const QMatrix& kernel, const FamilySpec& fam) {
  const int m = kernel.rows();
  return sum_over_family(m, fam, [&](std::uint32_t mask) {
    return principal_minor(kernel, mask, m);
  });
}

Rational constrained_mass_bruteforce(const Eigen::MatrixXd& kernel,
                                     const FamilySpec& fam) {
  return constrained_mass_bruteforce(QMatrix::from_double(kernel), fam);
}

Rational constrained_mass_bruteforce(const genpoly::ExplicitSetFunction& f,
                                     const FamilySpec& fam) {
  return sum_over_family(f.m, fam, [&](std::uint32_t mask) {
    return f.table[mask];
  });
}

Rational constrained_mass_bruteforce(const Eigen::MatrixXi& tu,
                                     const FamilySpec& fam) {
  const int m = static_cast<int>(tu.rows());
  return sum_over_family(m, fam,
                         [&](std::uint32_t mask) { return tu_mass(tu, mask); });
}

DistributionTable exact_distribution(const QMatrix& kernel, const FamilySpec& fam) {
  const int m = kernel.rows();
  return table_over_family(m, fam, [&](std::uint32_t mask) {
    return principal_minor(kernel, mask, m);
  });
}

DistributionTable exact_distribution(const Eigen::MatrixXd& kernel,
                                     const FamilySpec& fam) {
  return exact_distribution(QMatrix::from_double(kernel), fam);
}

DistributionTable exact_distribution(const genpoly::ExplicitSetFunction& f,
                                     const FamilySpec& fam) {
  return table_over_family(f.m, fam,
                           [&](std::uint32_t mask) { return f.table[mask]; });
}

DistributionTable exact_distribution(const Eigen::MatrixXi& tu,
                                     const FamilySpec& fam) {
  const int m = static_cast<int>(tu.rows());
  return table_over_family(m, fam,
                           [&](std::uint32_t mask) { return tu_mass(tu, mask); });
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[static_cast<std::size_t>(a)] = b;
    return true;
  }
};

void enumerate_matchings(const Graph& g, std::uint32_t matched, int next_edge,
                         std::vector<int>& chosen, GraphStructures& out) {
  if (matched == (1u << g.n) - 1u) {
    out.count += 1;
    out.items.push_back(chosen);
    return;
  }
  if (next_edge >= g.edge_count()) return;
  // find the lowest unmatched vertex; some edge covering it must be chosen
  int v = 0;
  while (matched >> v & 1u) ++v;
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edges[static_cast<std::size_t>(e)];
    if (a != v && b != v) continue;
    if (matched >> a & 1u || matched >> b & 1u) continue;
    chosen.push_back(e);
    enumerate_matchings(g, matched | (1u << a) | (1u << b), 0, chosen, out);
    chosen.pop_back();
  }
}

}  // namespace

GraphStructures enumerate_graph_structures(const Graph& g, GraphKind kind,
                                           const CostFilter& filter) {
  GraphStructures out;
  out.count = 0;
  if (kind == GraphKind::SpanningTrees) {
    require(g.edge_count() <= 18, ErrorCode::TooLarge,
            "spanning-tree enumeration supports m <= 18 edges");
    const int m = g.edge_count();
    const int need = g.n - 1;
    const std::uint32_t subsets = 1u << m;
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
      if (__builtin_popcount(mask) != need) continue;
      UnionFind uf(g.n);
      bool acyclic = true;
      long long cost = 0;
      for (int e = 0; e < m && acyclic; ++e)
        if (mask >> e & 1u) {
          auto [u, v] = g.edges[static_cast<std::size_t>(e)];
          if (!uf.unite(u, v)) acyclic = false;
          if (g.has_costs()) cost += g.costs[static_cast<std::size_t>(e)];
        }
      if (!acyclic) continue;
      if (filter.mode == CostFilter::Mode::Exact && cost != filter.value)
        continue;
      if (filter.mode == CostFilter::Mode::AtMost && cost > filter.value)
        continue;
      out.count += 1;
      std::vector<int> edges;
      for (int e = 0; e < m; ++e)
        if (mask >> e & 1u) edges.push_back(e);
      out.items.push_back(std::move(edges));
    }
    return out;
  }
  require(g.n <= 12, ErrorCode::TooLarge,
          "perfect-matching enumeration supports n <= 12 vertices");
  if (g.n % 2 == 1) return out;  // no perfect matching on odd vertex counts
  std::vector<int> chosen;
  enumerate_matchings(g, 0, 0, chosen, out);
  return out;
}

}  // namespace cdpp::bruteforce
