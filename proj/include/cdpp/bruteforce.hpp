#pragma once

#include <cstdint>
#include <map>

#include "cdpp/counting.hpp"
#include "cdpp/graph.hpp"

namespace cdpp::bruteforce {

// Exhaustive-enumeration oracles used to validate the engine. This module
// deliberately shares no evaluation code with genpoly/counting/sampling: the
// determinant and membership routines below are independent implementations.

using counting::FamilySpec;

/// Exact normalized distribution over the feasible subsets.
struct DistributionTable {
  std::map<std::uint32_t, Rational> probs;  // mask -> probability
  Rational total_mass;
};

/// Membership test evaluated directly from the family description.
bool family_contains(const FamilySpec& fam, std::uint32_t mask, int m);

/// Sum of masses over the family, enumerating all 2^m subsets. The kernel
/// variants compute principal minors with a local fraction-arithmetic
/// Gaussian elimination.
Rational constrained_mass_bruteforce(const QMatrix& kernel, const FamilySpec& fam);
Rational constrained_mass_bruteforce(const Eigen::MatrixXd& kernel,
                                     const FamilySpec& fam);
Rational constrained_mass_bruteforce(const genpoly::ExplicitSetFunction& f,
                                     const FamilySpec& fam);
/// Basis-indicator measure of a TU representation (rows = elements).
Rational constrained_mass_bruteforce(const Eigen::MatrixXi& tu,
                                     const FamilySpec& fam);

DistributionTable exact_distribution(const QMatrix& kernel, const FamilySpec& fam);
DistributionTable exact_distribution(const Eigen::MatrixXd& kernel,
                                     const FamilySpec& fam);
DistributionTable exact_distribution(const genpoly::ExplicitSetFunction& f,
                                     const FamilySpec& fam);
DistributionTable exact_distribution(const Eigen::MatrixXi& tu,
                                     const FamilySpec& fam);

enum class GraphKind { SpanningTrees, PerfectMatchings };

struct CostFilter {
  enum class Mode { None, Exact, AtMost } mode = Mode::None;
  long long value = 0;
};

struct GraphStructures {
  Integer count;
  std::vector<std::vector<int>> items;  // edge indices (trees) or edge lists
};

/// Exhaustive enumeration of spanning trees (m <= 18 edges) or perfect
/// matchings (n <= 12 vertices), with an optional cost filter on trees.
GraphStructures enumerate_graph_structures(const Graph& g, GraphKind kind,
                                           const CostFilter& filter = {});

}  // namespace cdpp::bruteforce
