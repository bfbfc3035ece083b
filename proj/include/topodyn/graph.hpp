#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace topodyn {

// Compressed adjacency lists; successors of each node are sorted ascending.
class digraph {
 public:
  digraph() = default;

  digraph(std::size_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> edges) : offsets_(n + 1, 0) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    targets_.reserve(edges.size());
    for (auto [u, v] : edges) {
      ++offsets_[u + 1];
      targets_.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  }

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size(); }

  std::span<const std::uint32_t> successors(std::size_t u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }

  bool has_edge(std::size_t u, std::size_t v) const {
    auto s = successors(u);
    return std::binary_search(s.begin(), s.end(), static_cast<std::uint32_t>(v));
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(edge_count());
    for (std::size_t u = 0; u < size(); ++u)
      for (auto v : successors(u)) out.emplace_back(static_cast<std::uint32_t>(u), v);
    return out;
  }

  digraph reversed() const {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> r;
    r.reserve(edge_count());
    for (std::size_t u = 0; u < size(); ++u)
      for (auto v : successors(u)) r.emplace_back(v, static_cast<std::uint32_t>(u));
    return digraph(size(), std::move(r));
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
};

struct scc_result {
  std::vector<std::uint32_t> component;  // component id per node
  std::size_t count = 0;
};

// Tarjan's algorithm with an explicit stack.
inline scc_result strongly_connected_components(const digraph& g) {
  const std::size_t n = g.size();
  constexpr std::uint32_t unvisited = UINT32_MAX;
  std::vector<std::uint32_t> index(n, unvisited), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  scc_result res;
  res.component.assign(n, 0);
  std::uint32_t counter = 0;

  struct frame {
    std::uint32_t node;
    std::size_t next;
  };
  std::vector<frame> call;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      frame& f = call.back();
      auto succ = g.successors(f.node);
      if (f.next < succ.size()) {
        std::uint32_t w = succ[f.next++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      std::uint32_t v = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          res.component[w] = static_cast<std::uint32_t>(res.count);
        } while (w != v);
        ++res.count;
      }
    }
  }
  return res;
}

// Nodes on some directed cycle: members of a nontrivial SCC, or carrying a self-loop.
inline std::vector<std::uint32_t> cyclic_nodes(const digraph& g) {
  auto scc = strongly_connected_components(g);
  std::vector<std::size_t> sizes(scc.count, 0);
  for (auto c : scc.component) ++sizes[c];
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < g.size(); ++v)
    if (sizes[scc.component[v]] > 1 || g.has_edge(v, v)) out.push_back(v);
  return out;
}

inline bool strongly_connected(const digraph& g) {
  return g.size() > 0 && strongly_connected_components(g).count == 1;
}

// BFS distances from `src` (-1 where unreachable).
inline std::vector<std::int64_t> bfs_distances(const digraph& g, std::uint32_t src) {
  std::vector<std::int64_t> dist(g.size(), -1);
  std::vector<std::uint32_t> queue{src};
  dist[src] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    auto u = queue[h];
    for (auto v : g.successors(u))
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist;
}

// Shortest path with at least one edge from `from` to `to`. Successors are
// scanned in ascending order and the first discovery wins, so the parent of
// every node is the lowest-index node of the previous layer.
inline std::optional<std::vector<std::uint32_t>> shortest_path(const digraph& g, std::uint32_t from,
                                                               std::uint32_t to) {
  const std::size_t n = g.size();
  std::vector<std::int64_t> parent(n, -1);
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> layer{from}, next;
  // `from` itself is not marked: a path back to it must use at least one edge.
  while (!layer.empty()) {
    next.clear();
    for (auto u : layer)
      for (auto v : g.successors(u)) {
        if (seen[v]) continue;
        seen[v] = 1;
        parent[v] = u;
        next.push_back(v);
      }
    if (seen[to]) break;
    std::sort(next.begin(), next.end());
    layer.swap(next);
  }
  if (!seen[to]) return std::nullopt;
  std::vector<std::uint32_t> path{to};
  std::uint32_t cur = to;
  do {
    cur = static_cast<std::uint32_t>(parent[cur]);
    path.push_back(cur);
  } while (cur != from || path.size() == 1);
  // A cycle through `from` can revisit `from` only at its start.
  std::reverse(path.begin(), path.end());
  return path;
}

// gcd of all cycle lengths of a strongly connected graph.
inline std::optional<std::uint64_t> cycle_gcd(const digraph& g) {
  if (!strongly_connected(g)) return std::nullopt;
  auto level = bfs_distances(g, 0);
  std::uint64_t gcd = 0;
  for (std::uint32_t u = 0; u < g.size(); ++u)
    for (auto v : g.successors(u)) {
      auto d = level[u] + 1 - level[v];
      gcd = std::gcd(gcd, static_cast<std::uint64_t>(d < 0 ? -d : d));
    }
  return gcd;
}

// Largest shortest-path length over ordered pairs (a node to itself counts 0),
// via simultaneous frontier expansion of all sources in bitsets. nullopt when
// some pair is unreachable.
inline std::optional<std::size_t> max_shortest_path(const digraph& g) {
  const std::size_t n = g.size();
  if (n == 0) return std::nullopt;
  const std::size_t words = (n + 63) / 64;
  // reach[v] = set of sources that reach v within t steps
  std::vector<std::uint64_t> reach(n * words, 0), next(n * words, 0);
  for (std::size_t v = 0; v < n; ++v) reach[v * words + v / 64] |= 1ULL << (v % 64);
  const std::uint64_t tail_mask = (n % 64 == 0) ? ~0ULL : ((1ULL << (n % 64)) - 1);
  auto full = [&](const std::vector<std::uint64_t>& r) {
    for (std::size_t v = 0; v < n; ++v) {
      const std::uint64_t* row = r.data() + v * words;
      for (std::size_t w = 0; w + 1 < words; ++w)
        if (row[w] != ~0ULL) return false;
      if (row[words - 1] != tail_mask) return false;
    }
    return true;
  };
  std::size_t t = 0;
  while (!full(reach)) {
    next = reach;
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      const std::uint64_t* src = reach.data() + u * words;
      for (auto v : g.successors(u)) {
        std::uint64_t* dst = next.data() + static_cast<std::size_t>(v) * words;
        for (std::size_t w = 0; w < words; ++w) {
          std::uint64_t merged = dst[w] | src[w];
          changed |= merged != dst[w];
          dst[w] = merged;
        }
      }
    }
    if (!changed) return std::nullopt;
    reach.swap(next);
    ++t;
  }
  return t;
}

}  // namespace topodyn
