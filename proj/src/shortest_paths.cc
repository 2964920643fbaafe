#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <utility>

#include "spedac/solvers.h"

namespace spedac {
namespace {

using HeapEntry = std::pair<Cost, VertexId>;
using MinHeap =
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

}  // namespace

ShortestPathTree Dijkstra(const Instance& instance, bool from_sink) {
  const int32_t n = instance.vertex_count();
  ShortestPathTree tree;
  tree.distance.assign(n, kInfiniteCost);
  tree.predecessor.assign(n, -1);
  const VertexId root = from_sink ? instance.sink() : instance.source();
  tree.distance[root] = 0;
  MinHeap heap;
  heap.emplace(0, root);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > tree.distance[v]) continue;
    const auto arcs = from_sink ? instance.in_arcs(v) : instance.out_arcs(v);
    for (ArcIndex a : arcs) {
      const ArcRecord& arc = instance.arc(a);
      const VertexId w = from_sink ? arc.tail : arc.head;
      const Cost candidate = d + arc.weight;
      if (candidate < tree.distance[w]) {
        tree.distance[w] = candidate;
        tree.predecessor[w] = a;
        heap.emplace(candidate, w);
      }
    }
  }
  return tree;
}

std::optional<std::vector<VertexId>> ShortestPathVertices(
    const Instance& instance) {
  const ShortestPathTree tree = Dijkstra(instance, /*from_sink=*/false);
  if (tree.distance[instance.sink()] >= kInfiniteCost) return std::nullopt;
  std::vector<VertexId> path = {instance.sink()};
  while (path.back() != instance.source()) {
    path.push_back(instance.arc(tree.predecessor[path.back()]).tail);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<WeightedPath> RestrictedShortestPath(
    const Instance& instance, VertexId from, VertexId to,
    std::span<const uint8_t> banned_vertices,
    std::span<const uint8_t> banned_arcs, std::span<const Cost> weights) {
  auto vertex_banned = [&](VertexId v) {
    return !banned_vertices.empty() && banned_vertices[v];
  };
  if (vertex_banned(to)) return std::nullopt;
  const int32_t n = instance.vertex_count();
  std::vector<Cost> distance(n, kInfiniteCost);
  std::vector<ArcIndex> predecessor(n, -1);
  distance[from] = 0;
  MinHeap heap;
  heap.emplace(0, from);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > distance[v]) continue;
    if (v == to) break;
    for (ArcIndex a : instance.out_arcs(v)) {
      if (!banned_arcs.empty() && banned_arcs[a]) continue;
      const VertexId w = instance.arc(a).head;
      if (vertex_banned(w)) continue;
      const Cost weight = weights.empty() ? instance.arc(a).weight : weights[a];
      if (d + weight < distance[w]) {
        distance[w] = d + weight;
        predecessor[w] = a;
        heap.emplace(distance[w], w);
      }
    }
  }
  if (distance[to] >= kInfiniteCost) return std::nullopt;
  WeightedPath path;
  path.cost = distance[to];
  path.vertices.push_back(to);
  while (path.vertices.back() != from) {
    path.vertices.push_back(instance.arc(predecessor[path.vertices.back()]).tail);
  }
  std::reverse(path.vertices.begin(), path.vertices.end());
  return path;
}

std::vector<WeightedPath> KShortestPaths(const Instance& instance, int k) {
  std::vector<WeightedPath> accepted;
  if (k <= 0) return accepted;
  const std::vector<uint8_t> no_bans;
  auto first = RestrictedShortestPath(instance, instance.source(),
                                      instance.sink(), no_bans, no_bans);
  if (!first) return accepted;
  accepted.push_back(std::move(*first));
  std::set<std::vector<VertexId>> seen = {accepted.front().vertices};
  std::set<WeightedPath> candidates;

  std::vector<uint8_t> banned_vertices(instance.vertex_count());
  std::vector<uint8_t> banned_arcs(instance.arc_count());
  while (static_cast<int>(accepted.size()) < k) {
    const std::vector<VertexId> previous = accepted.back().vertices;
    Cost root_cost = 0;
    for (size_t i = 0; i + 1 < previous.size(); ++i) {
      std::fill(banned_vertices.begin(), banned_vertices.end(), 0);
      std::fill(banned_arcs.begin(), banned_arcs.end(), 0);
      for (size_t r = 0; r < i; ++r) banned_vertices[previous[r]] = 1;
      for (const WeightedPath& p : accepted) {
        if (p.vertices.size() > i + 1 &&
            std::equal(previous.begin(), previous.begin() + i + 1,
                       p.vertices.begin())) {
          banned_arcs[*instance.FindArc(p.vertices[i], p.vertices[i + 1])] = 1;
        }
      }
      auto spur = RestrictedShortestPath(instance, previous[i], instance.sink(),
                                         banned_vertices, banned_arcs);
      if (spur) {
        WeightedPath total;
        total.cost = root_cost + spur->cost;
        total.vertices.assign(previous.begin(), previous.begin() + i);
        total.vertices.insert(total.vertices.end(), spur->vertices.begin(),
                              spur->vertices.end());
        if (!seen.contains(total.vertices)) candidates.insert(std::move(total));
      }
      root_cost += instance.arc(*instance.FindArc(previous[i], previous[i + 1])).weight;
    }
    if (candidates.empty()) break;
    auto best = candidates.begin();
    seen.insert(best->vertices);
    accepted.push_back(*best);
    candidates.erase(best);
  }
  return accepted;
}

}  // namespace spedac
