#include "brittle_bayes/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace brittle_bayes {

MaxFlow::MaxFlow(int n) : graph_(static_cast<std::size_t>(n)), level_(n), iter_(n) {}

void MaxFlow::add_edge(int from, int to, std::int64_t cap) {
  auto& fwd = graph_[static_cast<std::size_t>(from)];
  auto& bwd = graph_[static_cast<std::size_t>(to)];
  fwd.push_back({to, cap, static_cast<int>(bwd.size())});
  bwd.push_back({from, 0, static_cast<int>(fwd.size()) - 1});
}

bool MaxFlow::bfs(int s, int t) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> q;
  level_[static_cast<std::size_t>(s)] = 0;
  q.push(s);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const Edge& e : graph_[static_cast<std::size_t>(v)]) {
      if (e.cap > 0 && level_[static_cast<std::size_t>(e.to)] < 0) {
        level_[static_cast<std::size_t>(e.to)] = level_[static_cast<std::size_t>(v)] + 1;
        q.push(e.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(t)] >= 0;
}

std::int64_t MaxFlow::dfs(int v, int t, std::int64_t pushed) {
  if (v == t) return pushed;
  for (int& i = iter_[static_cast<std::size_t>(v)];
       i < static_cast<int>(graph_[static_cast<std::size_t>(v)].size()); ++i) {
    Edge& e = graph_[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)];
    if (e.cap <= 0 || level_[static_cast<std::size_t>(v)] + 1 != level_[static_cast<std::size_t>(e.to)])
      continue;
    std::int64_t d = dfs(e.to, t, std::min(pushed, e.cap));
    if (d > 0) {
      e.cap -= d;
      graph_[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.rev)].cap += d;
      return d;
    }
  }
  return 0;
}

std::int64_t MaxFlow::run(int source, int sink) {
  std::int64_t flow = 0;
  while (bfs(source, sink)) {
    std::fill(iter_.begin(), iter_.end(), 0);
    while (std::int64_t pushed =
               dfs(source, sink, std::numeric_limits<std::int64_t>::max()))
      flow += pushed;
  }
  return flow;
}

}  // namespace brittle_bayes
