#pragma once

#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "cdpp/error.hpp"

namespace cdpp {

/// Undirected multigraph; vertices are 0-based internally, 1-based in files.
/// Self-loops are rejected (never in a tree; the reduction's cost bookkeeping
/// assumes distinct endpoints).
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<long long> costs;  // empty or one per edge

  int edge_count() const { return static_cast<int>(edges.size()); }
  bool has_costs() const { return !costs.empty(); }
};

/// Text edge list: one "u v [cost]" line per edge, 1-indexed vertices.
Graph parse_edge_list(std::istream& in);
Graph parse_edge_list_file(const std::string& path);

bool is_connected(const Graph& g);

Graph complete_graph(int n);
Graph cycle_graph(int n);

}  // namespace cdpp
