#pragma once

#include <cstdint>
#include <vector>

namespace brittle_bayes {

/// Dinic max-flow with integer capacities. Small graphs only (Prokhorov
/// feasibility checks run on bipartite support graphs with tens of nodes).
class MaxFlow {
 public:
  explicit MaxFlow(int n);

  void add_edge(int from, int to, std::int64_t cap);

  std::int64_t run(int source, int sink);

 private:
  struct Edge {
    int to;
    std::int64_t cap;
    int rev;
  };

  bool bfs(int s, int t);
  std::int64_t dfs(int v, int t, std::int64_t pushed);

  std::vector<std::vector<Edge>> graph_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace brittle_bayes
