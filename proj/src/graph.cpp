#include "cdpp/graph.hpp"

#include <fstream>
#include <sstream>

namespace cdpp {

Graph parse_edge_list(std::istream& in) {
  Graph g;
  std::string line;
  bool any_cost = false;
  int max_vertex = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;  // blank line
    require(static_cast<bool>(ls >> v), ErrorCode::ParseError,
            "edge line " + std::to_string(line_no) + " needs two endpoints");
    require(u >= 1 && v >= 1, ErrorCode::ParseError,
            "vertices are 1-indexed");
    require(u != v, ErrorCode::ParseError,
            "self-loops are not supported (line " + std::to_string(line_no) + ")");
    long long cost;
    bool has_cost = static_cast<bool>(ls >> cost);
    if (g.edges.empty())
      any_cost = has_cost;
    else
      require(has_cost == any_cost, ErrorCode::ParseError,
              "either all edges carry costs or none do");
    g.edges.emplace_back(static_cast<int>(u - 1), static_cast<int>(v - 1));
    if (has_cost) g.costs.push_back(cost);
    max_vertex = std::max(max_vertex, static_cast<int>(std::max(u, v)));
  }
  require(!g.edges.empty(), ErrorCode::ParseError, "graph has no edges");
  g.n = max_vertex;
  return g;
}

Graph parse_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::ParseError, "cannot open graph file: " + path);
  return parse_edge_list(in);
}

bool is_connected(const Graph& g) {
  if (g.n <= 1) return true;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
  for (const auto& [u, v] : g.edges) {
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : adj[static_cast<std::size_t>(u)])
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++visited;
        stack.push_back(v);
      }
  }
  return visited == g.n;
}

Graph complete_graph(int n) {
  Graph g;
  g.n = n;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.edges.emplace_back(u, v);
  return g;
}

Graph cycle_graph(int n) {
  Graph g;
  g.n = n;
  for (int u = 0; u < n; ++u) g.edges.emplace_back(u, (u + 1) % n);
  return g;
}

}  // namespace cdpp
