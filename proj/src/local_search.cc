#include <chrono>
#include <random>
#include <utility>

#include "spedac/solvers.h"

namespace spedac {
namespace {

using Clock = std::chrono::steady_clock;

struct Move {
  size_t from;  // position of the detour's first vertex on the path
  size_t to;    // position of the detour's last vertex on the path
};

// Per-arc weights that surcharge arcs whose conflict partners are on the
// current path, steering detours away from "both selected" violations.
std::vector<Cost> ConflictAwareWeights(const Instance& instance,
                                       const PathSolution& current) {
  std::vector<uint8_t> on_path(instance.arc_count(), 0);
  for (ArcIndex a : current.arc_indices) on_path[a] = 1;
  std::vector<Cost> weights(instance.arc_count());
  for (ArcIndex a = 0; a < instance.arc_count(); ++a) {
    weights[a] = instance.arc(a).weight;
    for (ConflictIndex c : instance.conflicts_of(a)) {
      if (on_path[instance.partner(c, a)]) weights[a] += instance.conflict(c).penalty;
    }
  }
  return weights;
}

}  // namespace

SolveReport LocalSearch(const Instance& instance,
                        const LocalSearchOptions& options) {
  const auto start = Clock::now();
  auto out_of_time = [&] { return Clock::now() - start > options.time_limit; };

  SolveReport report;
  const std::optional<std::vector<VertexId>> seed_path =
      ShortestPathVertices(instance);
  if (!seed_path) {
    report.status = SolveStatus::kInfeasible;
    report.lower_bound = kInfiniteCost;
    report.seconds_total = Clock::now() - start;
    return report;
  }

  PathSolution best = Evaluate(instance, *seed_path);
  // Dropping the non-negative penalty terms relaxes the objective, so the
  // conflict-free distance is a valid lower bound.
  report.lower_bound = best.arc_cost;
  auto offer = [&](std::span<const VertexId> vertices) {
    ++report.nodes_explored;
    PathSolution candidate = Evaluate(instance, vertices);
    if (candidate.objective() >= best.objective()) return false;
    best = std::move(candidate);
    report.incumbent_history.push_back(best.objective());
    report.seconds_to_best = Clock::now() - start;
    return true;
  };
  report.incumbent_history.push_back(best.objective());

  for (const WeightedPath& p : KShortestPaths(instance, options.pool_size)) {
    if (out_of_time()) break;
    offer(p.vertices);
  }

  std::mt19937_64 rng(options.seed);
  std::vector<uint8_t> banned_vertices(instance.vertex_count());
  std::vector<uint8_t> banned_arcs(instance.arc_count(), 0);
  bool improved = true;
  while (improved && !out_of_time()) {
    improved = false;
    const std::vector<VertexId> path = best.vertices;
    std::vector<Move> moves;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      for (size_t j = i + 1; j < path.size(); ++j) {
        if (options.detour_radius > 0 &&
            j - i > static_cast<size_t>(options.detour_radius)) {
          break;
        }
        moves.push_back({i, j});
      }
    }
    // Fisher-Yates with a fixed draw rule so that a seed gives the same order
    // on every standard library.
    for (size_t i = moves.size(); i > 1; --i) {
      std::swap(moves[i - 1], moves[rng() % i]);
    }
    const std::vector<Cost> aware = ConflictAwareWeights(instance, best);

    for (const Move& move : moves) {
      if (out_of_time()) break;
      std::fill(banned_vertices.begin(), banned_vertices.end(), 0);
      for (size_t k = 0; k < move.from; ++k) banned_vertices[path[k]] = 1;
      for (size_t k = move.to + 1; k < path.size(); ++k) banned_vertices[path[k]] = 1;
      const ArcIndex first_arc = best.arc_indices[move.from];
      banned_arcs[first_arc] = 1;
      for (std::span<const Cost> weights :
           {std::span<const Cost>{}, std::span<const Cost>(aware)}) {
        auto detour = RestrictedShortestPath(instance, path[move.from],
                                             path[move.to], banned_vertices,
                                             banned_arcs, weights);
        if (!detour) continue;
        std::vector<VertexId> candidate(path.begin(), path.begin() + move.from);
        candidate.insert(candidate.end(), detour->vertices.begin(),
                         detour->vertices.end());
        candidate.insert(candidate.end(), path.begin() + move.to + 1, path.end());
        if (offer(candidate)) {
          improved = true;
          break;
        }
      }
      banned_arcs[first_arc] = 0;
      if (improved) break;
    }
  }

  report.upper_bound = best.objective();
  report.incumbent = std::move(best);
  report.status = SolveStatus::kFeasible;
  report.seconds_total = Clock::now() - start;
  return report;
}

}  // namespace spedac
