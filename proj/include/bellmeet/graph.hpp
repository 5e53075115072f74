#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bellmeet/errors.hpp"

namespace bellmeet {

// Finite graph with 1-based node labels and the ordered-edge convention:
// edge k of node v leads to the k-th smallest out-neighbor (self-loop
// included when the graph is reflexive).  Immutable after construction.
struct Graph {
  int n = 0;
  std::vector<std::vector<int>> out;  // out[v-1] sorted strictly ascending
  bool reflexive = false;
  bool directed = false;
  std::optional<int> regular_degree;  // set when all nodes share one out-degree

  const std::vector<int>& neighbors(int v) const {
    check_node(v);
    return out[v - 1];
  }

  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  bool is_regular() const { return regular_degree.has_value(); }

  void check_node(int v) const {
    if (v < 1 || v > n) throw ValidationError("node index out of range: " + std::to_string(v));
  }
};

// Build from 1-indexed neighbor lists; rows are sorted, duplicates rejected.
// Reflexivity and directedness are inferred (all-or-no self loops; symmetry
// of the non-loop edge set).
inline Graph from_adjacency_list(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw ValidationError("adjacency list is empty");
  Graph g;
  g.n = static_cast<int>(rows.size());
  g.out.resize(rows.size());
  int self_loops = 0;
  for (int v = 1; v <= g.n; ++v) {
    const auto& row = rows[v - 1];
    if (row.empty()) throw ValidationError("empty row for node " + std::to_string(v));
    std::vector<int> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] < 1 || sorted[i] > g.n)
        throw ValidationError("node index out of range: " + std::to_string(sorted[i]) +
                              " in row " + std::to_string(v));
      if (i > 0 && sorted[i] == sorted[i - 1])
        throw ValidationError("duplicate neighbor " + std::to_string(sorted[i]) + " at node " +
                              std::to_string(v));
    }
    if (std::binary_search(sorted.begin(), sorted.end(), v)) ++self_loops;
    g.out[v - 1] = std::move(sorted);
  }
  if (self_loops != 0 && self_loops != g.n)
    throw ValidationError("mixed reflexivity: some nodes have self-loops and some do not");
  g.reflexive = (self_loops == g.n);

  bool symmetric = true;
  for (int v = 1; v <= g.n && symmetric; ++v)
    for (int w : g.out[v - 1]) {
      if (w == v) continue;
      if (!std::binary_search(g.out[w - 1].begin(), g.out[w - 1].end(), v)) {
        symmetric = false;
        break;
      }
    }
  g.directed = !symmetric;

  const int d0 = static_cast<int>(g.out[0].size());
  bool uniform = true;
  for (const auto& row : g.out) uniform = uniform && static_cast<int>(row.size()) == d0;
  if (uniform) g.regular_degree = d0;
  return g;
}

// Cycle over n >= 3 nodes.  Undirected: neighbors v-1 and v+1 (wraparound);
// directed: successor v+1 only.  Reflexive adds the self-loop.
inline Graph build_cycle(int n, bool reflexive, bool directed) {
  if (n < 3) throw ValidationError("cycle needs at least 3 nodes, got " + std::to_string(n));
  std::vector<std::vector<int>> rows(n);
  for (int v = 1; v <= n; ++v) {
    std::set<int> nb;
    const int succ = v == n ? 1 : v + 1;
    nb.insert(succ);
    if (!directed) nb.insert(v == 1 ? n : v - 1);
    if (reflexive) nb.insert(v);
    rows[v - 1].assign(nb.begin(), nb.end());
  }
  return from_adjacency_list(rows);
}

// Insert the self-loop at every node (degree R -> R+1).
inline Graph make_reflexive(const Graph& g) {
  if (g.reflexive) return g;
  std::vector<std::vector<int>> rows = g.out;
  for (int v = 1; v <= g.n; ++v) rows[v - 1].push_back(v);
  return from_adjacency_list(rows);
}

// k-th smallest out-neighbor of v, k in 1..deg(v).
inline int edge_target(const Graph& g, int v, int k) {
  const auto& nb = g.neighbors(v);
  if (k < 1 || k > static_cast<int>(nb.size()))
    throw ValidationError("edge index out of range: node " + std::to_string(v) + ", edge " +
                          std::to_string(k));
  return nb[k - 1];
}

// Nodes visited after each move; moves are edge indices valid at the node
// reached so far.
inline std::vector<int> walk(const Graph& g, int start, const std::vector<int>& moves) {
  g.check_node(start);
  std::vector<int> visited;
  visited.reserve(moves.size());
  int pos = start;
  for (int k : moves) {
    pos = edge_target(g, pos, k);
    visited.push_back(pos);
  }
  return visited;
}

}  // namespace bellmeet
